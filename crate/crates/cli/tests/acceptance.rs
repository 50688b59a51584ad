//! Acceptance suite: runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each and exits nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use eulerlab::dynamics::{biot_savart, evolve, evolve_observed, SolverConfig};
use eulerlab::flow_map::{check_lagrangian_representation, VelocityHistory};
use eulerlab::lab::{
    box_doubling_check, generate_initial_data, run_family, run_pair, theorem1_experiment,
    Approximation, ChainCheck, DataKind, ExperimentConfig, FamilyReport, InitialDataSpec,
    PairOptions, PerturbationMode, PerturbationSpec, StabilityReport,
};
use eulerlab::norms::{check_interpolation, hs_norm, lp_norm, vector_l2, Lp, SobolevOrder};
use eulerlab::spectral::{forward_transform, inverse_transform, Grid2D, RealField};
use eulerlab_cli::{cmd_evolve, cmd_flowcheck, cmd_stability, RunOptions, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn grid(n: usize) -> Grid2D<f64> {
    Grid2D::new(n, 2.0 * PI).unwrap()
}

/// Random zero-mean field with no Nyquist content.
fn random_field(g: Grid2D<f64>, rng: &mut ChaCha8Rng) -> RealField<f64> {
    let values: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = RealField::new(g, values).unwrap();
    let s = forward_transform(&f).unwrap().map_indexed(|p, q, c| {
        if (p == 0 && q == 0) || g.is_nyquist(p) || g.is_nyquist(q) {
            Default::default()
        } else {
            c
        }
    });
    inverse_transform(&s).unwrap()
}

fn duality() -> Verdict {
    let g = grid(128);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let w = random_field(g, &mut rng);
        let weak = hs_norm(&w, SobolevOrder::new(-1.0).unwrap()).unwrap();
        let gap = (weak - vector_l2(&biot_savart(&w))).abs();
        worst = worst.max(gap / weak);
    }
    verdict(worst <= 1e-10, format!("max relative gap {worst:.2e} over 100 fields at n = 128 (bound 1e-10)"))
}

fn interpolation() -> Verdict {
    let g = grid(64);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_random = f64::INFINITY;
    for _ in 0..200 {
        let f = random_field(g, &mut rng);
        let l2 = lp_norm(&f, Lp::Two);
        for beta in [0.1, 0.25, 0.5] {
            let r = check_interpolation(&f, SobolevOrder::new(beta).unwrap()).unwrap();
            worst_random = worst_random.min(r / l2);
        }
    }
    let mut worst_mode = 0.0f64;
    for (a, b) in [(1.0, 0.0), (0.0, 3.0), (2.0, 5.0), (7.0, -4.0), (20.0, 11.0)] {
        let f = RealField::from_fn(g, |x, y| (a * x + b * y).sin());
        let l2 = lp_norm(&f, Lp::Two);
        for beta in [0.1, 0.25, 0.5] {
            let r = check_interpolation(&f, SobolevOrder::new(beta).unwrap()).unwrap();
            worst_mode = worst_mode.max(r.abs() / l2);
        }
    }
    verdict(
        worst_random >= -1e-10 && worst_mode <= 1e-10,
        format!(
            "min residual/‖f‖ {worst_random:.2e} on 600 random cases (bound −1e-10); single-mode |residual|/‖f‖ {worst_mode:.2e} (bound 1e-10)"
        ),
    )
}

fn solver_fidelity() -> Verdict {
    let g = grid(256);
    let tg = generate_initial_data(
        &InitialDataSpec {
            kind: DataKind::TaylorGreen,
            ..InitialDataSpec::default()
        },
        &g,
    )
    .unwrap();
    let config = SolverConfig::new(1.0);
    let (end, _) = evolve(&tg, &config).unwrap();
    let stationarity = lp_norm(&end.omega().sub(&tg).unwrap(), Lp::Two) / lp_norm(&tg, Lp::Two);
    let dipole = generate_initial_data(&InitialDataSpec::smooth_dipole(), &g).unwrap();
    let (_, ledger) = evolve(&dipole, &config).unwrap();
    let rows = ledger.rows();
    let (l2_0, e_0) = (rows[0].l2, rows[0].energy);
    let l2_drift = rows.iter().map(|r| (r.l2 / l2_0 - 1.0).abs()).fold(0.0, f64::max);
    let energy_drift = rows
        .iter()
        .map(|r| (r.energy * r.energy / (e_0 * e_0) - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        stationarity <= 1e-6 && l2_drift <= 1e-4 && energy_drift <= 1e-4,
        format!(
            "Taylor-Green ‖ω(1) − ω(0)‖/‖ω(0)‖ {stationarity:.2e} (bound 1e-6); dipole ‖ω‖ drift {l2_drift:.2e}, ‖u‖² drift {energy_drift:.2e} (bound 1e-4)"
        ),
    )
}

/// Relative Lagrangian representation error of the dipole at `t = 1`.
fn dipole_lagrangian(n: usize) -> f64 {
    let omega0 = generate_initial_data(&InitialDataSpec::smooth_dipole(), &grid(n)).unwrap();
    let mut times = Vec::new();
    let mut frames = Vec::new();
    let mut omegas = Vec::new();
    let (end, _) = evolve_observed(&omega0, &SolverConfig::new(1.0), |s| {
        times.push(s.t());
        frames.push(s.u().clone());
        omegas.push(s.omega().clone());
    })
    .unwrap();
    let history = VelocityHistory::new(times, frames).unwrap();
    let err = check_lagrangian_representation(&omegas[0], &history, end.omega(), 1.0).unwrap();
    err / lp_norm(&omegas[0], Lp::Two)
}

fn lagrangian(scratch: &Path) -> Verdict {
    let dir = scratch.join("taylor_green");
    let config = "[grid]\nn = 512\n[data]\nkind = \"taylor_green\"\n[solver]\nhistory_every = 10\n";
    let config_path = scratch.join("taylor_green.toml");
    fs::write(&config_path, config).unwrap();
    let mut opts = RunOptions::new(&dir);
    opts.config = Some(config_path);
    cmd_evolve(&opts).unwrap();
    let flow = cmd_flowcheck(&dir, 1.0, Some(1e-4), None).unwrap();
    let tg = flow.summary["relative"].as_f64().unwrap();
    let coarse = dipole_lagrangian(128);
    let fine = dipole_lagrangian(256);
    let ratio = coarse / fine;
    verdict(
        flow.status == Status::Ok && tg <= 1e-4 && ratio >= 2.0,
        format!(
            "Taylor-Green relative error {tg:.2e} at n = 512 (bound 1e-4); dipole {coarse:.2e} → {fine:.2e} for n = 128 → 256, ratio {ratio:.2} (bound ≥ 2)"
        ),
    )
}

const CHAIN_CHECKS: [ChainCheck; 4] = [
    ChainCheck::Interpolation,
    ChainCheck::EnergyEstimate,
    ChainCheck::Duality,
    ChainCheck::Poincare,
];

/// Recomputes `‖δω‖ ≤ ‖δu‖^γ ‖δω‖_{Ḣ^β}^{1−γ} (1 + 1e-9)` from the rows.
fn chain_margin(r: &StabilityReport) -> f64 {
    let g = r.beta / (1.0 + r.beta);
    r.rows
        .iter()
        .filter(|row| row.dw_l2 > 0.0)
        .map(|row| row.du_l2.powf(g) * row.dw_hbeta.powf(1.0 - g) * (1.0 + 1e-9) / row.dw_l2)
        .fold(f64::INFINITY, f64::min)
}

fn chain(family: &FamilyReport) -> Verdict {
    let failures: usize = family
        .runs
        .iter()
        .map(|r| CHAIN_CHECKS.iter().map(|c| r.failures_of(*c).count()).sum::<usize>())
        .sum();
    let rows: usize = family.runs.iter().map(|r| r.rows.len()).sum();
    let margin = family.runs.iter().map(chain_margin).fold(f64::INFINITY, f64::min);
    verdict(
        failures == 0 && margin >= 1.0,
        format!(
            "{failures} failures of checks (a)–(d) over {rows} rows in {} runs; min chain bound / ‖δω‖ = {margin:.4} (needs ≥ 1)",
            family.runs.len()
        ),
    )
}

fn rate(family: &FamilyReport) -> Verdict {
    match family.fit {
        Some(fit) => verdict(
            fit.gamma_fit >= family.gamma_theory - 0.05 && fit.r2 >= 0.95,
            format!(
                "gamma_fit {:.4} (bound ≥ {:.2}), r² {:.5} (bound ≥ 0.95), C_fit {:.3e}",
                fit.gamma_fit,
                family.gamma_theory - 0.05,
                fit.r2,
                fit.c_fit
            ),
        ),
        None => verdict(false, format!("no fit: {:?}", family.warnings)),
    }
}

fn energy_estimate(reports: &[&StabilityReport]) -> Verdict {
    let mut worst = 0.0f64;
    let mut flagged = 0;
    for r in reports {
        flagged += r.failures_of(ChainCheck::EnergyEstimate).count();
        let du0 = r.initial().du_l2;
        for row in r.rows.iter().filter(|row| row.t > 0.0) {
            let bound = (row.c_measured * row.t).exp() * du0 * (1.0 + 1e-6);
            if bound > 0.0 {
                worst = worst.max(row.du_l2 / bound);
            }
        }
    }
    verdict(
        flagged == 0 && worst <= 1.0,
        format!(
            "max over t > 0 of ‖δu(t)‖ / (e^(c t) ‖δu(0)‖ (1+1e-6)) = {worst:.4} over {} runs",
            reports.len()
        ),
    )
}

fn refinement() -> Verdict {
    let g = grid(256);
    let target = generate_initial_data(&InitialDataSpec::holder_patch_pair(0.5), &g).unwrap();
    let h = g.spacing();
    let r = theorem1_experiment(
        &target,
        Approximation::Mollification,
        &[4.0 * h, 2.0 * h, h],
        &SolverConfig::new(1.0),
        1.0 / 32.0,
    )
    .unwrap();
    let sups: Vec<String> = r.rows.iter().map(|row| format!("{:.3e}", row.sup_error)).collect();
    verdict(
        r.is_monotone() && r.final_ratio() <= 0.2,
        format!(
            "sups [{}] for widths 4h, 2h, h at n = 256; final/first {:.3} (bound 0.2)",
            sups.join(", "),
            r.final_ratio()
        ),
    )
}

fn periodization() -> Verdict {
    let config = ExperimentConfig::default();
    let spec = InitialDataSpec::smooth_dipole();
    let g = config.grid().unwrap();
    let check = box_doubling_check(&spec, &g, &config.solver()).unwrap();
    verdict(
        check.passed(),
        format!(
            "discrepancy/‖ω̄‖ {:.3e} (bound 1e-2), support diameter {:.3} vs L/4 = {:.3}, n = {}",
            check.relative(),
            spec.support_diameter(),
            g.box_length() / 4.0,
            g.n()
        ),
    )
}

/// Files below `root`, relative, sorted, excluding the manifest.
fn report_files(root: &Path) -> Vec<std::path::PathBuf> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<std::path::PathBuf>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(&p, root, out);
            } else if p.file_name().unwrap() != "manifest.json" {
                out.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out.sort();
    out
}

fn reproducibility(scratch: &Path) -> Verdict {
    let dirs = [scratch.join("stability_a"), scratch.join("stability_b")];
    let mut hashes = Vec::new();
    for d in &dirs {
        let mut opts = RunOptions::new(d);
        opts.seed = Some(7);
        let outcome = cmd_stability(&opts).unwrap();
        assert_ne!(outcome.status, Status::InvalidInput);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(d.join("manifest.json")).unwrap()).unwrap();
        hashes.push(manifest["config_sha256"].clone());
    }
    let files = report_files(&dirs[0]);
    let same_list = files == report_files(&dirs[1]);
    let differing: Vec<_> = files
        .iter()
        .filter(|f| fs::read(dirs[0].join(f)).ok() != fs::read(dirs[1].join(f)).ok())
        .collect();
    verdict(
        same_list && differing.is_empty() && hashes[0] == hashes[1] && !files.is_empty(),
        format!(
            "{} report files compared byte-for-byte, {} differ; config hashes equal: {}",
            files.len(),
            differing.len(),
            hashes[0] == hashes[1]
        ),
    )
}

fn main() {
    let scratch = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let mut results: Vec<(usize, &str, Verdict, f64)> = Vec::new();
    let mut timed = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let t0 = Instant::now();
        let v = f();
        let secs = t0.elapsed().as_secs_f64();
        println!(
            "{} [{id}] {name}: {} ({secs:.1} s)",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((id, name, v, secs));
    };

    timed(1, "duality identity", &mut duality);
    timed(2, "interpolation inequality", &mut interpolation);
    timed(3, "solver fidelity", &mut solver_fidelity);
    timed(4, "Lagrangian representation", &mut || lagrangian(scratch.path()));

    let config = ExperimentConfig::default();
    let family = run_family(
        &config.data,
        config.perturbation.mode,
        &config.perturbation.deltas,
        &config.grid().unwrap(),
        &config.pair_options(false),
        &config.solver(),
    )
    .unwrap();
    let dipole_pair = run_pair(
        &InitialDataSpec::smooth_dipole(),
        &PerturbationSpec::new(PerturbationMode::Translate, 1e-3).unwrap(),
        &grid(256),
        &PairOptions::new(0.25),
        &SolverConfig::new(1.0),
    )
    .unwrap();
    timed(5, "stability chain", &mut || chain(&family));
    timed(6, "stability rate", &mut || rate(&family));
    timed(7, "energy estimate", &mut || {
        let mut all: Vec<&StabilityReport> = family.runs.iter().collect();
        all.push(&dipole_pair);
        energy_estimate(&all)
    });
    timed(8, "approximation sequence", &mut refinement);
    timed(9, "periodization control", &mut periodization);
    timed(10, "reproducibility", &mut || reproducibility(scratch.path()));

    let failed = results.iter().filter(|r| !r.2.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1} s",
        results.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
