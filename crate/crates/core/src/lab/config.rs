//! Declarative experiment configuration (TOML).

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::data::{InitialDataSpec, PerturbationMode};
use super::pair::{PairOptions, SAMPLE_INTERVAL};
use super::refinement::Approximation;
use crate::dynamics::SolverConfig;
use crate::error::{Error, Result};
use crate::norms::HolderExponent;
use crate::spectral::Grid2D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub box_length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            n: 256,
            box_length: 2.0 * PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub cfl: f64,
    pub t_end: f64,
    pub dealias: bool,
    pub conservation_check_every: usize,
    pub holder_alpha: f64,
    /// Velocity-history stride, in steps.
    pub history_every: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            t_end: 1.0,
            dealias: true,
            conservation_check_every: 10,
            holder_alpha: 0.5,
            history_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationSection {
    pub mode: PerturbationMode,
    pub deltas: Vec<f64>,
}

impl Default for PerturbationSection {
    fn default() -> Self {
        Self {
            mode: PerturbationMode::Translate,
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    /// Sobolev order of the chain; `None` means `α/2`.
    pub beta: Option<f64>,
    pub sample_interval: f64,
    pub approximation: Approximation,
    /// Mollifier widths in grid spacings, or truncation levels as fractions
    /// of `‖ω̄‖_{L∞}`.
    pub approximation_factors: Vec<f64>,
    /// Relative bound of the Lagrangian representation check.
    pub lagrangian_bound: f64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            beta: None,
            sample_interval: SAMPLE_INTERVAL,
            approximation: Approximation::Mollification,
            approximation_factors: vec![4.0, 2.0, 1.0],
            lagrangian_bound: 1e-2,
        }
    }
}

/// Full experiment description with sections `[grid]`, `[solver]`,
/// `[data]`, `[perturbation]` and `[analysis]`. Missing keys take defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    pub solver: SolverSection,
    pub data: InitialDataSpec,
    pub perturbation: PerturbationSection,
    pub analysis: AnalysisSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Canonical serialization; equal configs give equal bytes.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid2D<f64>> {
        Grid2D::new(self.grid.n, self.grid.box_length)
    }

    pub fn solver(&self) -> SolverConfig<f64> {
        let s = &self.solver;
        SolverConfig {
            cfl: s.cfl,
            t_end: s.t_end,
            dealias: s.dealias,
            conservation_check_every: s.conservation_check_every,
            holder_alpha: s.holder_alpha,
        }
    }

    pub fn beta(&self) -> f64 {
        self.analysis.beta.unwrap_or(self.data.alpha / 2.0)
    }

    pub fn pair_options(&self, freeze: bool) -> PairOptions {
        PairOptions {
            beta: self.beta(),
            sample_interval: self.analysis.sample_interval,
            freeze,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.solver().validate()?;
        if self.solver.history_every == 0 {
            return Err(Error::InvalidParameter("history_every must be at least 1".into()));
        }
        self.data.validate()?;
        HolderExponent::new(self.data.alpha)?;
        self.pair_options(false).validate()?;
        if self.perturbation.deltas.is_empty() {
            return Err(Error::InvalidParameter("perturbation.deltas is empty".into()));
        }
        if self.perturbation.deltas.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::InvalidParameter("deltas must be finite and ≥ 0".into()));
        }
        let factors = &self.analysis.approximation_factors;
        if factors.is_empty() || factors.iter().any(|f| !(*f >= 0.0 && f.is_finite())) {
            return Err(Error::InvalidParameter(
                "approximation_factors must be a nonempty list of values ≥ 0".into(),
            ));
        }
        if !(self.analysis.lagrangian_bound >= 0.0) {
            return Err(Error::InvalidParameter("lagrangian_bound must be ≥ 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::data::DataKind;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let text = c.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml().unwrap(), text);
        assert_eq!(back.grid.box_length, 2.0 * PI);
        assert_eq!(c.beta(), 0.25);
    }

    #[test]
    fn partial_file() {
        let c = ExperimentConfig::from_toml(
            "[grid]\nn = 64\n[data]\nkind = \"taylor_green\"\n[solver]\nt_end = 0.5\n",
        )
        .unwrap();
        assert_eq!(c.grid.n, 64);
        assert_eq!(c.data.kind, DataKind::TaylorGreen);
        assert_eq!(c.solver.t_end, 0.5);
        assert_eq!(c.solver.cfl, 0.5);
    }

    #[test]
    fn rejects_invalid() {
        for text in [
            "[solver]\ncfl = 0.0\n",
            "[grid]\nn = 100\n",
            "[analysis]\nbeta = 1.5\n",
            "[perturbation]\ndeltas = []\n",
            "[data]\nalpha = 0.0\n",
            "[grid]\nunknown = 1\n",
            "not toml",
        ] {
            assert!(ExperimentConfig::from_toml(text).is_err(), "{text}");
        }
    }
}
