//! A δ ladder of paired runs and its rate fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{InitialDataSpec, PerturbationMode, PerturbationSpec};
use super::fit::{fit_rate, RateFit};
use super::pair::{run_pair, PairOptions, StabilityReport};
use crate::dynamics::SolverConfig;
use crate::error::Result;
use crate::spectral::Grid2D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub mode: PerturbationMode,
    pub beta: f64,
    pub gamma_theory: f64,
    pub deltas: Vec<f64>,
    /// `‖δω(T)‖_{L²}` per run.
    pub final_errors: Vec<f64>,
    /// Fit of `final_errors` against `deltas`; needs at least 3 runs.
    pub fit: Option<RateFit>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub runs: Vec<StabilityReport>,
}

impl FamilyReport {
    /// Every chain check of every run passed.
    pub fn checks_passed(&self) -> bool {
        self.runs.iter().all(StabilityReport::passed)
    }
}

/// Runs one pair per `δ` (in parallel) and fits the final errors.
pub fn run_family(
    spec: &InitialDataSpec,
    mode: PerturbationMode,
    deltas: &[f64],
    grid: &Grid2D<f64>,
    options: &PairOptions,
    config: &SolverConfig<f64>,
) -> Result<FamilyReport> {
    let perts: Vec<PerturbationSpec> = deltas
        .iter()
        .map(|&d| PerturbationSpec::new(mode, d))
        .collect::<Result<_>>()?;
    let runs: Vec<StabilityReport> = perts
        .par_iter()
        .map(|p| run_pair(spec, p, grid, options, config))
        .collect::<Result<_>>()?;
    let final_errors: Vec<f64> = runs.iter().map(|r| r.last().dw_l2).collect();
    let mut warnings = Vec::new();
    let fit = if deltas.len() < 3 {
        warnings.push(format!(
            "rate fit skipped: {} run(s), at least 3 are needed",
            deltas.len()
        ));
        None
    } else {
        match fit_rate(deltas, &final_errors) {
            Ok(f) => Some(f),
            Err(e) => {
                warnings.push(format!("rate fit skipped: {e}"));
                None
            }
        }
    };
    for r in &runs {
        if !r.passed() {
            warnings.push(format!("delta = {:e}: {} chain check failure(s)", r.delta, r.failures.len()));
        }
    }
    Ok(FamilyReport {
        mode,
        beta: options.beta,
        gamma_theory: options.beta / (1.0 + options.beta),
        deltas: deltas.to_vec(),
        final_errors,
        fit,
        warnings,
        runs,
    })
}
