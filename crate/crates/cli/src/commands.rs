//! Command implementations. Each writes its artifacts below the output
//! directory and returns a JSON summary plus an exit status.

use std::fs;
use std::path::{Path, PathBuf};

use eulerlab::dynamics::{biot_savart, evolve_observed, SolverState};
use eulerlab::flow_map::{check_lagrangian_representation, VelocityHistory};
use eulerlab::lab::{
    box_doubling_check, generate_initial_data, run_family, theorem1_experiment, Approximation,
    ExperimentConfig, StabilityReport,
};
use eulerlab::norms::{lp_norm, HolderExponent, Lp, NormReport, SobolevOrder};
use eulerlab::spectral::{io, RealField};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, Status};
use crate::manifest::{now, sha256_hex, OutputDir, RunManifest, CONFIG_FILE};

pub const LEDGER_FILE: &str = "ledger.csv";
pub const HISTORY_DIR: &str = "history";
pub const HISTORY_INDEX: &str = "history/index.json";
pub const FAMILY_FILE: &str = "family.json";
pub const REFINEMENT_CSV: &str = "refinement.csv";
pub const REFINEMENT_JSON: &str = "refinement.json";
pub const BOXCHECK_FILE: &str = "boxcheck.json";
pub const FLOWCHECK_FILE: &str = "flowcheck.json";

/// Options shared by the experiment commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub freeze: bool,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            config: None,
            out: out.into(),
            seed: None,
            freeze: false,
        }
    }
}

/// Result of a completed command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub summary: Value,
}

impl Outcome {
    fn new(passed: bool, summary: Value) -> Self {
        Self {
            status: if passed { Status::Ok } else { Status::CheckFailed },
            summary,
        }
    }
}

/// Reads the config (defaults when none is given) and applies `--seed`.
pub fn load_config(opts: &RunOptions) -> Result<ExperimentConfig, CliError> {
    let mut config = match &opts.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", p.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = opts.seed {
        config.data.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// An output directory with its persisted config, ready for artifacts.
struct Run {
    out: OutputDir,
    manifest: RunManifest,
}

impl Run {
    fn start(command: &str, opts: &RunOptions, config: &ExperimentConfig) -> Result<Self, CliError> {
        let started_at = now();
        let mut out = OutputDir::create(&opts.out)?;
        let text = config.to_toml()?;
        out.write(CONFIG_FILE, &text)?;
        let manifest = RunManifest {
            command: command.into(),
            config_source: opts.config.clone(),
            config_path: CONFIG_FILE.into(),
            config_sha256: sha256_hex(text.as_bytes()),
            seed: config.data.seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            started_at,
            finished_at: started_at,
            outputs: Vec::new(),
        };
        Ok(Self { out, manifest })
    }

    fn finish(self) -> Result<(), CliError> {
        self.out.finish(self.manifest)?;
        Ok(())
    }
}

/// JSON sidecar of a checkpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub t: f64,
    #[serde(rename = "L")]
    pub box_length: f64,
    pub n: usize,
    pub config: ExperimentConfig,
}

/// Vorticity frames of a recorded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HistoryIndex {
    pub times: Vec<f64>,
    pub files: Vec<String>,
}

fn write_checkpoint(
    out: &mut OutputDir,
    name: &str,
    state: &SolverState<f64>,
    config: &ExperimentConfig,
) -> Result<(), CliError> {
    let grid = state.omega().grid();
    io::save_binary(state.omega(), out.path(format!("checkpoints/{name}.bin"))?)?;
    let meta = CheckpointMeta {
        t: state.t(),
        box_length: grid.box_length(),
        n: grid.n(),
        config: config.clone(),
    };
    out.write_json(format!("checkpoints/{name}.json"), &meta)
}

/// Evolves the configured datum; writes the ledger, the initial and final
/// checkpoints and the vorticity history.
pub fn cmd_evolve(opts: &RunOptions) -> Result<Outcome, CliError> {
    let config = load_config(opts)?;
    let grid = config.grid()?;
    let omega0 = generate_initial_data(&config.data, &grid)?;
    let mut run = Run::start("evolve", opts, &config)?;
    let solver = config.solver();
    let every = config.solver.history_every;
    let mut frames: Vec<SolverState<f64>> = Vec::new();
    let mut count = 0usize;
    let (last, ledger) = evolve_observed(&omega0, &solver, |s| {
        if count % every == 0 || s.t() == solver.t_end {
            frames.push(s.clone());
        }
        count += 1;
    })?;
    ledger.write_csv(fs::File::create(run.out.path(LEDGER_FILE)?)?)?;
    write_checkpoint(&mut run.out, "initial", &frames[0], &config)?;
    write_checkpoint(&mut run.out, "final", &last, &config)?;
    let mut index = HistoryIndex {
        times: Vec::new(),
        files: Vec::new(),
    };
    for (k, s) in frames.iter().enumerate() {
        let file = format!("omega_{k:05}.bin");
        io::save_binary(s.omega(), run.out.path(format!("{HISTORY_DIR}/{file}"))?)?;
        index.times.push(s.t());
        index.files.push(file);
    }
    run.out.write_json(HISTORY_INDEX, &index)?;
    let rows = ledger.rows();
    let summary = json!({
        "command": "evolve",
        "t_end": last.t(),
        "ledger_rows": rows.len(),
        "frames": index.times.len(),
        "l2_drift": ledger.max_relative_drift(|r| r.l2, 1e-300),
        "energy_drift": ledger.max_relative_drift(|r| r.energy, 1e-300),
    });
    run.finish()?;
    Ok(Outcome::new(true, summary))
}

#[derive(Serialize)]
struct PairSummary<'a> {
    #[serde(flatten)]
    report: &'a StabilityReport,
    passed: bool,
    initial: &'a eulerlab::lab::PairRow,
    last: &'a eulerlab::lab::PairRow,
}

/// Runs the configured δ ladder; one CSV and JSON per run plus the family
/// fit.
pub fn cmd_stability(opts: &RunOptions) -> Result<Outcome, CliError> {
    let config = load_config(opts)?;
    let grid = config.grid()?;
    let mut run = Run::start("stability", opts, &config)?;
    let family = run_family(
        &config.data,
        config.perturbation.mode,
        &config.perturbation.deltas,
        &grid,
        &config.pair_options(opts.freeze),
        &config.solver(),
    )?;
    for (k, r) in family.runs.iter().enumerate() {
        r.write_csv(fs::File::create(run.out.path(format!("pairs/pair_{k:02}.csv"))?)?)?;
        let summary = PairSummary {
            report: r,
            passed: r.passed(),
            initial: r.initial(),
            last: r.last(),
        };
        run.out.write_json(format!("pairs/pair_{k:02}.json"), &summary)?;
    }
    let passed = family.checks_passed();
    let mut summary = serde_json::to_value(&family)?;
    summary["checks_passed"] = json!(passed);
    if let Some(fit) = &family.fit {
        summary["gamma_fit"] = json!(fit.gamma_fit);
    }
    run.out.write_json(FAMILY_FILE, &summary)?;
    for w in &family.warnings {
        eprintln!("warning: {w}");
    }
    run.finish()?;
    Ok(Outcome::new(passed, summary))
}

/// Evolves the datum and its approximation sequence.
pub fn cmd_theorem1(opts: &RunOptions) -> Result<Outcome, CliError> {
    let config = load_config(opts)?;
    let grid = config.grid()?;
    let target = generate_initial_data(&config.data, &grid)?;
    let scale = match config.analysis.approximation {
        Approximation::Mollification => grid.spacing(),
        Approximation::Truncation => target.max_abs(),
    };
    let params: Vec<f64> = config.analysis.approximation_factors.iter().map(|f| f * scale).collect();
    let mut run = Run::start("theorem1", opts, &config)?;
    let report = theorem1_experiment(
        &target,
        config.analysis.approximation,
        &params,
        &config.solver(),
        config.analysis.sample_interval,
    )?;
    report.write_csv(fs::File::create(run.out.path(REFINEMENT_CSV)?)?)?;
    let passed = report.passed();
    let summary = json!({
        "approximation": report.approximation,
        "rows": report.rows,
        "sample_count": report.sample_count,
        "monotone": report.is_monotone(),
        "final_within_bound": report.final_within_bound(),
        "final_ratio": report.final_ratio(),
        "passed": passed,
    });
    run.out.write_json(REFINEMENT_JSON, &summary)?;
    run.finish()?;
    Ok(Outcome::new(passed, summary))
}

/// Compares the configured run with the same run in the doubled box.
pub fn cmd_boxcheck(opts: &RunOptions) -> Result<Outcome, CliError> {
    let config = load_config(opts)?;
    let grid = config.grid()?;
    let mut run = Run::start("boxcheck", opts, &config)?;
    let check = box_doubling_check(&config.data, &grid, &config.solver())?;
    let passed = check.passed();
    let mut summary = serde_json::to_value(check)?;
    summary["relative"] = json!(check.relative());
    summary["passed"] = json!(passed);
    run.out.write_json(BOXCHECK_FILE, &summary)?;
    run.finish()?;
    Ok(Outcome::new(passed, summary))
}

fn missing(what: &str, path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::invalid(format!("missing {what} {}: {e}", path.display()))
}

/// Loads the recorded vorticity frames of an `evolve` output directory.
pub fn load_history(dir: &Path) -> Result<(Vec<f64>, Vec<RealField<f64>>), CliError> {
    let index_path = dir.join(HISTORY_INDEX);
    let text = fs::read_to_string(&index_path).map_err(|e| missing("history index", &index_path, e))?;
    let index: HistoryIndex = serde_json::from_str(&text)?;
    if index.times.len() != index.files.len() {
        return Err(CliError::invalid("history index: times and files differ in length"));
    }
    let frames = index
        .files
        .iter()
        .map(|f| {
            let p = dir.join(HISTORY_DIR).join(f);
            if !p.exists() {
                return Err(missing("history frame", &p, "not found"));
            }
            Ok(io::load_binary(&p)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((index.times, frames))
}

/// Checks `ω(t) = ω̄ ∘ X(0, t, ·)` on a recorded run. `bound` overrides the
/// relative bound of the run's config. Results go to `out` (default: `dir`).
pub fn cmd_flowcheck(dir: &Path, t: f64, bound: Option<f64>, out: Option<&Path>) -> Result<Outcome, CliError> {
    let config_path = dir.join(CONFIG_FILE);
    let text = fs::read_to_string(&config_path).map_err(|e| missing("config", &config_path, e))?;
    let config = ExperimentConfig::from_toml(&text)?;
    let bound = bound.unwrap_or(config.analysis.lagrangian_bound);
    if !(bound >= 0.0) {
        return Err(CliError::invalid("bound must be ≥ 0"));
    }
    let (times, frames) = load_history(dir)?;
    if times.first() != Some(&0.0) {
        return Err(CliError::invalid("history does not start at t = 0"));
    }
    let k = times
        .iter()
        .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
        .ok_or_else(|| CliError::invalid(format!("no recorded frame at t = {t}")))?;
    let omega_bar = &frames[0];
    let error = if k == 0 {
        0.0
    } else {
        let velocities = frames.iter().map(biot_savart).collect();
        let history = VelocityHistory::new(times.clone(), velocities)?;
        check_lagrangian_representation(omega_bar, &history, &frames[k], times[k])?
    };
    let reference = lp_norm(omega_bar, Lp::Two);
    let relative = if reference > 0.0 { error / reference } else { error };
    let passed = if k == 0 { relative <= bound.max(1e-12) } else { relative <= bound };
    let summary = json!({
        "t": times[k],
        "error": error,
        "relative": relative,
        "bound": bound,
        "passed": passed,
    });
    let target = out.unwrap_or(dir);
    let mut writer = OutputDir::create(target)?;
    writer.write_json(FLOWCHECK_FILE, &summary)?;
    Ok(Outcome::new(passed, summary))
}

/// Norm table of a field file (`.csv` needs `box_length`; anything else is
/// read as binary).
pub fn cmd_norms(
    file: &Path,
    box_length: f64,
    beta: f64,
    alpha: Option<f64>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    if !file.exists() {
        return Err(missing("field file", file, "not found"));
    }
    let field: RealField<f64> = match file.extension().and_then(|e| e.to_str()) {
        Some("csv") => io::load_csv(file, box_length)?,
        _ => io::load_binary(file)?,
    };
    let alpha = alpha.map(HolderExponent::new).transpose()?;
    let report = NormReport::measure(&field, SobolevOrder::new(beta)?, alpha)?;
    let mut summary = serde_json::to_value(&report)?;
    summary["n"] = json!(field.grid().n());
    summary["box_length"] = json!(field.grid().box_length());
    summary["mean"] = json!(field.mean());
    summary["beta"] = json!(beta);
    if let Some(dir) = out {
        OutputDir::create(dir)?.write_json("norms.json", &summary)?;
    }
    Ok(Outcome::new(true, summary))
}
