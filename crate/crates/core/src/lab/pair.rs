//! Paired evolutions and the per-time stability chain.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::data::{generate_initial_data, perturbed_data, InitialDataSpec, PerturbationSpec};
use crate::dynamics::{velocity_gradient_max, Evolution, SolverConfig, SolverState};
use crate::error::{Error, Result};
use crate::norms::{hs_norm_spectral, interpolation_bound, lp_norm, vector_l2, Lp, SobolevOrder};
use crate::spectral::{forward_raw, Grid2D, RealField};

/// Relative tolerance of the interpolation check (a).
pub const TOL_INTERPOLATION: f64 = 1e-10;
/// Relative slack of the energy estimate (b) and of the theorem bound.
pub const TOL_ENERGY: f64 = 1e-6;
/// Relative tolerance of the duality gap (c).
pub const TOL_DUALITY: f64 = 1e-10;
/// Round-off slack of the Poincaré bound (d).
pub const TOL_POINCARE: f64 = 1e-12;
/// Relative slack of the residual-free chain bound.
pub const TOL_CHAIN: f64 = 1e-9;

/// Default spacing of the sampling times.
pub const SAMPLE_INTERVAL: f64 = 1.0 / 32.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOptions {
    /// Sobolev order `β` in `(0, 1)`.
    pub beta: f64,
    pub sample_interval: f64,
    /// Replaces the solver by the identity map.
    pub freeze: bool,
}

impl PairOptions {
    pub fn new(beta: f64) -> Self {
        Self {
            beta,
            sample_interval: SAMPLE_INTERVAL,
            freeze: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!("β = {} must lie in (0, 1)", self.beta)));
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return Err(Error::InvalidParameter("sample_interval must be positive".into()));
        }
        Ok(())
    }
}

/// `0, Δ, 2Δ, …` up to and including `t_end`.
pub fn sample_times(t_end: f64, interval: f64) -> Vec<f64> {
    let k = (t_end / interval * (1.0 + 1e-12)).floor() as usize;
    let mut times: Vec<f64> = (0..=k).map(|i| i as f64 * interval).filter(|&t| t < t_end).collect();
    times.push(t_end);
    times
}

/// Quantities of the stability chain at one sampling time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub t: f64,
    pub dw_l2: f64,
    pub dw_hminus1: f64,
    pub dw_hbeta: f64,
    pub du_l2: f64,
    /// `‖δω‖_{Ḣ⁻¹}^γ ‖δω‖_{Ḣ^β}^{1−γ} − ‖δω‖_{L²}`.
    pub residual_proof1: f64,
    /// `|‖δω‖_{Ḣ⁻¹} − ‖δu‖_{L²}|`.
    pub gap_proof3: f64,
    /// Running sup of `max(‖∇u₁‖∞, ‖∇u₂‖∞)` over solver steps.
    pub c_measured: f64,
    /// `e^{c t} ‖δu(0)‖_{L²}`.
    pub energy_bound: f64,
    /// `‖δu‖_{L²}^γ ‖δω‖_{Ḣ^β}^{1−γ}`.
    pub chain_bound: f64,
    /// `(e^{c t} C ‖δω(0)‖_{L²})^γ (sup_{s≤t} ‖δω(s)‖_{Ḣ^β})^{1−γ}`.
    pub theorem_bound: f64,
    pub dw_l1: f64,
    pub dw_linf: f64,
}

pub const PAIR_HEADER: &str = "t,dw_l2,dw_hminus1,dw_hbeta,du_l2,residual_proof1,gap_proof3,c_measured,energy_bound,chain_bound,theorem_bound,dw_l1,dw_linf";

impl PairRow {
    fn values(&self) -> [f64; 13] {
        [
            self.t,
            self.dw_l2,
            self.dw_hminus1,
            self.dw_hbeta,
            self.du_l2,
            self.residual_proof1,
            self.gap_proof3,
            self.c_measured,
            self.energy_bound,
            self.chain_bound,
            self.theorem_bound,
            self.dw_l1,
            self.dw_linf,
        ]
    }

    fn csv(&self) -> String {
        self.values()
            .iter()
            .map(|v| format!("{v:e}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainCheck {
    /// (a) interpolation residual nonnegative.
    Interpolation,
    /// (b) `‖δu(t)‖ ≤ e^{ct} ‖δu(0)‖`.
    EnergyEstimate,
    /// (c) `‖δω‖_{Ḣ⁻¹} = ‖δu‖_{L²}`.
    Duality,
    /// (d) `‖δu(0)‖ ≤ (L/2π) ‖δω(0)‖`.
    Poincare,
    /// `‖δω‖ ≤ ‖δu‖^γ ‖δω‖_{Ḣ^β}^{1−γ}`.
    ChainBound,
    /// `‖δω‖ ≤` the instantiated theorem bound.
    TheoremBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub t: f64,
    pub check: ChainCheck,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of one paired run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub delta: f64,
    pub beta: f64,
    /// `β/(1+β)`.
    pub gamma_theory: f64,
    /// `L/2π`, the inverse smallest nonzero wavenumber.
    pub c_proof4: f64,
    pub t_end: f64,
    pub n: usize,
    pub box_length: f64,
    /// `ln(sup_t ‖δω‖_{Ḣ^β} / ‖δω(0)‖_{Ḣ^β}) / T`, zero for identical data.
    pub hbeta_growth: f64,
    pub steps: usize,
    pub frozen: bool,
    #[serde(skip)]
    pub rows: Vec<PairRow>,
    pub failures: Vec<CheckFailure>,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn initial(&self) -> &PairRow {
        &self.rows[0]
    }

    pub fn last(&self) -> &PairRow {
        self.rows.last().expect("at least one row")
    }

    pub fn failures_of(&self, check: ChainCheck) -> impl Iterator<Item = &CheckFailure> {
        self.failures.iter().filter(move |f| f.check == check)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{PAIR_HEADER}")?;
        for r in &self.rows {
            writeln!(w, "{}", r.csv())?;
        }
        Ok(())
    }
}

/// Accumulates rows and check outcomes.
struct Chain {
    beta: f64,
    gamma: f64,
    c_proof4: f64,
    du0: f64,
    dw0: f64,
    hbeta_sup: f64,
    rows: Vec<PairRow>,
    failures: Vec<CheckFailure>,
}

impl Chain {
    fn new(beta: f64, grid: &Grid2D<f64>) -> Self {
        Self {
            beta,
            gamma: beta / (1.0 + beta),
            c_proof4: grid.box_length() / (2.0 * PI),
            du0: 0.0,
            dw0: 0.0,
            hbeta_sup: 0.0,
            rows: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, t: f64, check: ChainCheck, lhs: f64, rhs: f64) {
        self.failures.push(CheckFailure { t, check, lhs, rhs });
    }

    fn record(&mut self, t: f64, s1: &SolverState<f64>, s2: &SolverState<f64>, c: f64) -> Result<()> {
        let dw = s1.omega().sub(s2.omega())?;
        let mut spec = forward_raw(&dw);
        // equal integrals hold by construction; drop round-off in the mean
        spec.coeffs_mut()[0] = Complex::new(0.0, 0.0);
        let hm1 = hs_norm_spectral(&spec, SobolevOrder::new(-1.0)?)?;
        let hb = hs_norm_spectral(&spec, SobolevOrder::new(self.beta)?)?;
        let l2 = lp_norm(&dw, Lp::Two);
        let du = vector_l2(&s1.u().sub(s2.u())?);
        if self.rows.is_empty() {
            self.du0 = du;
            self.dw0 = l2;
        }
        self.hbeta_sup = self.hbeta_sup.max(hb);
        let g = self.gamma;
        let energy_bound = (c * t).exp() * self.du0;
        let row = PairRow {
            t,
            dw_l2: l2,
            dw_hminus1: hm1,
            dw_hbeta: hb,
            du_l2: du,
            residual_proof1: interpolation_bound(hm1, hb, self.beta) - l2,
            gap_proof3: (hm1 - du).abs(),
            c_measured: c,
            energy_bound,
            chain_bound: du.powf(g) * hb.powf(1.0 - g),
            theorem_bound: ((c * t).exp() * self.c_proof4 * self.dw0).powf(g) * self.hbeta_sup.powf(1.0 - g),
            dw_l1: lp_norm(&dw, Lp::One),
            dw_linf: lp_norm(&dw, Lp::Infinity),
        };
        if !row.is_finite() {
            return Err(Error::NumericalBlowup { t });
        }
        if row.residual_proof1 < -TOL_INTERPOLATION * l2 {
            self.fail(t, ChainCheck::Interpolation, l2, l2 + row.residual_proof1);
        }
        if du > energy_bound * (1.0 + TOL_ENERGY) {
            self.fail(t, ChainCheck::EnergyEstimate, du, energy_bound);
        }
        if row.gap_proof3 > TOL_DUALITY * hm1.max(du) {
            self.fail(t, ChainCheck::Duality, hm1, du);
        }
        if self.rows.is_empty() && du > self.c_proof4 * l2 * (1.0 + TOL_POINCARE) {
            self.fail(t, ChainCheck::Poincare, du, self.c_proof4 * l2);
        }
        if l2 > row.chain_bound * (1.0 + TOL_CHAIN) {
            self.fail(t, ChainCheck::ChainBound, l2, row.chain_bound);
        }
        if l2 > row.theorem_bound * (1.0 + TOL_ENERGY) {
            self.fail(t, ChainCheck::TheoremBound, l2, row.theorem_bound);
        }
        self.rows.push(row);
        Ok(())
    }
}

/// Evolves `omega1` and `omega2` side by side with a shared time step and
/// checks the stability chain at every sampling time.
pub fn run_pair_fields(
    omega1: &RealField<f64>,
    omega2: &RealField<f64>,
    delta: f64,
    options: &PairOptions,
    config: &SolverConfig<f64>,
) -> Result<StabilityReport> {
    options.validate()?;
    if omega1.grid() != omega2.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *omega1.grid();
    let mut e1 = Evolution::new(omega1, *config)?;
    let mut e2 = Evolution::new(omega2, *config)?;
    let mut chain = Chain::new(options.beta, &grid);
    let gradient = |e: &Evolution<f64>| velocity_gradient_max(e.state().u());
    let mut c = gradient(&e1).max(gradient(&e2));
    let mut steps = 0;
    for &t in &sample_times(config.t_end, options.sample_interval) {
        if !options.freeze {
            while e1.state().t() < t {
                let dt = e1.state().max_dt(config.cfl).min(e2.state().max_dt(config.cfl));
                e1.step_toward(dt, t)?;
                e2.step_toward(dt, t)?;
                steps += 1;
                c = c.max(gradient(&e1)).max(gradient(&e2));
            }
        }
        chain.record(t, e1.state(), e2.state(), c)?;
    }
    let hb0 = chain.rows[0].dw_hbeta;
    let hbeta_growth = if hb0 > 0.0 {
        (chain.hbeta_sup / hb0).ln() / config.t_end
    } else {
        0.0
    };
    Ok(StabilityReport {
        delta,
        beta: options.beta,
        gamma_theory: chain.gamma,
        c_proof4: chain.c_proof4,
        t_end: config.t_end,
        n: grid.n(),
        box_length: grid.box_length(),
        hbeta_growth,
        steps,
        frozen: options.freeze,
        rows: chain.rows,
        failures: chain.failures,
    })
}

/// Generates `ω̄₁` from `spec`, `ω̄₂` by applying `pert`, and runs the pair.
pub fn run_pair(
    spec: &InitialDataSpec,
    pert: &PerturbationSpec,
    grid: &Grid2D<f64>,
    options: &PairOptions,
    config: &SolverConfig<f64>,
) -> Result<StabilityReport> {
    if spec.kind == super::data::DataKind::HolderPatchPair && options.beta >= spec.alpha {
        return Err(Error::InvalidParameter(format!(
            "β = {} must be below α = {}",
            options.beta, spec.alpha
        )));
    }
    let omega1 = generate_initial_data(spec, grid)?;
    let omega2 = perturbed_data(spec, pert, grid)?;
    run_pair_fields(&omega1, &omega2, pert.delta, options, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::data::PerturbationMode;

    fn grid(n: usize) -> Grid2D<f64> {
        Grid2D::new(n, 2.0 * PI).unwrap()
    }

    fn short(t_end: f64) -> SolverConfig<f64> {
        SolverConfig::new(t_end)
    }

    #[test]
    fn sampling() {
        let t = sample_times(1.0, 1.0 / 32.0);
        assert_eq!(t.len(), 33);
        assert_eq!(t[0], 0.0);
        assert_eq!(*t.last().unwrap(), 1.0);
        let t = sample_times(0.1, 0.03);
        assert_eq!(t.len(), 5);
        assert_eq!(*t.last().unwrap(), 0.1);
    }

    #[test]
    fn zero_perturbation_is_trivial() {
        let spec = InitialDataSpec::smooth_dipole();
        let pert = PerturbationSpec::new(PerturbationMode::Translate, 0.0).unwrap();
        let r = run_pair(&spec, &pert, &grid(64), &PairOptions::new(0.25), &short(0.25)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        for row in &r.rows {
            assert!(row.dw_l2 <= 1e-13 && row.du_l2 <= 1e-13 && row.dw_hbeta <= 1e-13);
        }
        assert_eq!(r.hbeta_growth, 0.0);
    }

    #[test]
    fn chain_holds_on_a_short_run() {
        let spec = InitialDataSpec::holder_patch_pair(0.5);
        let pert = PerturbationSpec::new(PerturbationMode::Translate, 0.05).unwrap();
        let r = run_pair(&spec, &pert, &grid(64), &PairOptions::new(0.25), &short(0.25)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rows.len(), 9);
        assert!((r.gamma_theory - 0.2).abs() < 1e-15);
        assert!((r.c_proof4 - 1.0).abs() < 1e-15);
        assert!(r.hbeta_growth.is_finite());
        for row in &r.rows {
            assert!(row.dw_l2 > 0.0 && row.c_measured > 0.0);
            assert!(row.dw_l2 <= row.chain_bound * (1.0 + 1e-9));
        }
    }

    #[test]
    fn frozen_rows_repeat() {
        let spec = InitialDataSpec::holder_patch_pair(0.5);
        let pert = PerturbationSpec::new(PerturbationMode::AmplitudeWiggle, 0.1).unwrap();
        let mut opts = PairOptions::new(0.25);
        opts.freeze = true;
        let r = run_pair(&spec, &pert, &grid(64), &opts, &short(1.0)).unwrap();
        assert!(r.passed());
        assert_eq!(r.steps, 0);
        let first = r.rows[0];
        for row in &r.rows[1..] {
            assert_eq!(row.dw_l2, first.dw_l2);
            assert_eq!(row.du_l2, first.du_l2);
            assert_eq!(row.dw_hbeta, first.dw_hbeta);
        }
    }

    #[test]
    fn swap_symmetry() {
        let g = grid(64);
        let spec = InitialDataSpec::smooth_dipole();
        let pert = PerturbationSpec::new(PerturbationMode::AmplitudeWiggle, 0.2).unwrap();
        let a = generate_initial_data(&spec, &g).unwrap();
        let b = perturbed_data(&spec, &pert, &g).unwrap();
        let opts = PairOptions::new(0.25);
        let r1 = run_pair_fields(&a, &b, 0.2, &opts, &short(0.25)).unwrap();
        let r2 = run_pair_fields(&b, &a, 0.2, &opts, &short(0.25)).unwrap();
        for (x, y) in r1.rows.iter().zip(&r2.rows) {
            for (p, q) in [(x.dw_l2, y.dw_l2), (x.du_l2, y.du_l2), (x.dw_hbeta, y.dw_hbeta), (x.dw_hminus1, y.dw_hminus1)] {
                assert!((p - q).abs() <= 1e-12 * p.max(1e-300), "{p} {q}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let spec = InitialDataSpec::holder_patch_pair(0.5);
        let pert = PerturbationSpec::new(PerturbationMode::Translate, 0.01).unwrap();
        let g = grid(32);
        assert!(run_pair(&spec, &pert, &g, &PairOptions::new(0.6), &short(0.1)).is_err());
        assert!(run_pair(&spec, &pert, &g, &PairOptions::new(0.0), &short(0.1)).is_err());
        let other = RealField::zeros(grid(64));
        let same = RealField::zeros(g);
        assert!(matches!(
            run_pair_fields(&same, &other, 0.0, &PairOptions::new(0.2), &short(0.1)),
            Err(Error::GridMismatch)
        ));
    }
}
