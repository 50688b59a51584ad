//! Convergence of solutions under approximation of the initial datum.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{mollify, truncate_tails};
use super::pair::sample_times;
use crate::dynamics::{Evolution, SolverConfig};
use crate::error::{Error, Result};
use crate::norms::{lp_norm, Lp};
use crate::spectral::RealField;

/// Tolerated relative increase between consecutive sups.
pub const MONOTONE_SLACK: f64 = 0.1;
/// Allowed factor over the initial-error ratio for the final sup.
pub const FINAL_SLACK: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approximation {
    /// Gaussian mollifier; the parameter is its standard deviation.
    Mollification,
    /// Zeroes `|ω̄| < level`; the parameter is the level.
    Truncation,
}

impl Approximation {
    pub fn apply(self, f: &RealField<f64>, parameter: f64) -> RealField<f64> {
        match self {
            Self::Mollification => mollify(f, parameter),
            Self::Truncation => truncate_tails(f, parameter),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub parameter: f64,
    pub initial_error: f64,
    pub sup_error: f64,
}

pub const REFINEMENT_HEADER: &str = "parameter,initial_error,sup_error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub approximation: Approximation,
    pub rows: Vec<RefinementRow>,
    pub sample_count: usize,
}

impl RefinementReport {
    /// Sups nonincreasing up to [`MONOTONE_SLACK`].
    pub fn is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].sup_error <= (1.0 + MONOTONE_SLACK) * w[0].sup_error)
    }

    /// `sup_last / sup_first`, zero when the first sup vanishes.
    pub fn final_ratio(&self) -> f64 {
        let (first, last) = (self.rows[0].sup_error, self.rows[self.rows.len() - 1].sup_error);
        if first > 0.0 {
            last / first
        } else {
            0.0
        }
    }

    /// Final sup within [`FINAL_SLACK`] times the initial-error ratio.
    pub fn final_within_bound(&self) -> bool {
        let (first, last) = (self.rows[0], self.rows[self.rows.len() - 1]);
        if first.initial_error == 0.0 {
            return last.sup_error <= first.sup_error;
        }
        let ratio = last.initial_error / first.initial_error;
        last.sup_error <= first.sup_error * ratio * FINAL_SLACK
    }

    pub fn passed(&self) -> bool {
        self.is_monotone() && self.final_within_bound()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{REFINEMENT_HEADER}")?;
        for r in &self.rows {
            writeln!(w, "{:e},{:e},{:e}", r.parameter, r.initial_error, r.sup_error)?;
        }
        Ok(())
    }
}

/// Samples of the evolution of `omega0` at `times`.
fn sampled_run(omega0: &RealField<f64>, config: &SolverConfig<f64>, times: &[f64]) -> Result<Vec<RealField<f64>>> {
    let mut run = Evolution::new(omega0, *config)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        run.advance_to(t, |_| {})?;
        out.push(run.state().omega().clone());
    }
    Ok(out)
}

/// Evolves `target` and its approximations `approximation(target, p)` for
/// each parameter, recording `sup_t ‖ω_p(t) − ω(t)‖_{L²}` over the
/// sampling times. Parameters must be strictly decreasing and give
/// decreasing initial errors.
pub fn theorem1_experiment(
    target: &RealField<f64>,
    approximation: Approximation,
    parameters: &[f64],
    config: &SolverConfig<f64>,
    sample_interval: f64,
) -> Result<RefinementReport> {
    config.validate()?;
    if parameters.is_empty() {
        return Err(Error::InvalidParameter("no approximation parameters".into()));
    }
    if parameters.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
        return Err(Error::InvalidParameter("approximation parameters must be ≥ 0".into()));
    }
    if parameters.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "approximation parameters must be strictly decreasing".into(),
        ));
    }
    if !(sample_interval > 0.0) {
        return Err(Error::InvalidParameter("sample_interval must be positive".into()));
    }
    let data: Vec<RealField<f64>> = parameters.iter().map(|&p| approximation.apply(target, p)).collect();
    let start = Evolution::new(target, *config)?;
    let reference0 = start.state().omega();
    let initial: Vec<f64> = data
        .iter()
        .map(|d| Ok(lp_norm(&Evolution::new(d, *config)?.state().omega().sub(reference0)?, Lp::Two)))
        .collect::<Result<_>>()?;
    for w in initial.windows(2) {
        let ok = w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "initial errors must decrease strictly along the sequence: {initial:?}"
            )));
        }
    }
    let times = sample_times(config.t_end, sample_interval);
    let reference = sampled_run(target, config, &times)?;
    let sups: Vec<f64> = data
        .par_iter()
        .map(|d| {
            let run = sampled_run(d, config, &times)?;
            run.iter().zip(&reference).try_fold(0.0f64, |acc, (a, b)| {
                Ok(acc.max(lp_norm(&a.sub(b)?, Lp::Two)))
            })
        })
        .collect::<Result<_>>()?;
    let rows = parameters
        .iter()
        .zip(initial)
        .zip(sups)
        .map(|((&parameter, initial_error), sup_error)| RefinementRow {
            parameter,
            initial_error,
            sup_error,
        })
        .collect();
    Ok(RefinementReport {
        approximation,
        rows,
        sample_count: times.len(),
    })
}
