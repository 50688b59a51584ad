use num_complex::Complex;

use super::biot_savart::velocity_spectra;
use super::ledger::{ConservationLedger, LedgerRow};
use crate::error::{Error, Result};
use crate::norms::{holder_seminorm, lp_norm, vector_l2, HolderExponent, Lp};
use crate::scalar::Real;
use crate::spectral::{
    dealias, forward_raw, inverse_raw, spectral_derivative, Axis, RealField,
    SpectralField, VectorField,
};

/// Velocity floor in the CFL bound, guarding the zero-velocity case.
const CFL_VELOCITY_FLOOR: f64 = 1e-12;

/// Time, vorticity and its cached Biot-Savart velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<T> {
    t: T,
    omega: RealField<T>,
    u: VectorField<T>,
}

impl<T: Real> SolverState<T> {
    pub fn new(t: T, omega: RealField<T>) -> Result<Self> {
        omega.check_finite()?;
        if !(t >= T::zero() && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time {t} must be ≥ 0")));
        }
        let u = super::biot_savart(&omega);
        Ok(Self { t, omega, u })
    }

    fn from_spectrum(t: T, w: &SpectralField<T>) -> Self {
        let (ux, uy) = velocity_spectra(w);
        Self {
            t,
            omega: inverse_raw(w),
            u: VectorField::new(inverse_raw(&ux), inverse_raw(&uy)).expect("shared grid"),
        }
    }

    #[inline]
    pub fn t(&self) -> T {
        self.t
    }

    #[inline]
    pub fn omega(&self) -> &RealField<T> {
        &self.omega
    }

    #[inline]
    pub fn u(&self) -> &VectorField<T> {
        &self.u
    }

    /// Largest step allowed by `dt ≤ cfl · h / max(‖u¹‖∞, ‖u²‖∞, ε)`.
    pub fn max_dt(&self, cfl: T) -> T {
        let umax = self.u.max_component().max(T::of(CFL_VELOCITY_FLOOR));
        cfl * self.omega.grid().spacing() / umax
    }
}

/// Time integration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Courant number in `(0, 1]`.
    pub cfl: T,
    pub t_end: T,
    pub dealias: bool,
    /// Ledger sampling period, in steps.
    pub conservation_check_every: usize,
    /// Exponent of the Hölder column in the ledger.
    pub holder_alpha: T,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(t_end: T) -> Self {
        Self {
            cfl: T::of(0.5),
            t_end,
            dealias: true,
            conservation_check_every: 10,
            holder_alpha: T::of(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "cfl = {} must lie in (0, 1]",
                self.cfl
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "t_end = {} must be positive and finite",
                self.t_end
            )));
        }
        if self.conservation_check_every == 0 {
            return Err(Error::InvalidParameter(
                "conservation_check_every must be at least 1".into(),
            ));
        }
        HolderExponent::new(self.holder_alpha)?;
        Ok(())
    }
}

fn truncate<T: Real>(w: &SpectralField<T>) -> SpectralField<T> {
    dealias(w)
}

/// Spectrum of `−(u·∇)ω` for vorticity spectrum `w`. With dealiasing the
/// factors and the product are both restricted to the 2/3 band. The mean
/// mode is zero since `div u = 0`.
fn advection_spectrum<T: Real>(w: &SpectralField<T>, dealiased: bool) -> SpectralField<T> {
    let w = if dealiased { truncate(w) } else { w.clone() };
    let (ux, uy) = velocity_spectra(&w);
    let ux = inverse_raw(&ux);
    let uy = inverse_raw(&uy);
    let wx = inverse_raw(&spectral_derivative(&w, Axis::X));
    let wy = inverse_raw(&spectral_derivative(&w, Axis::Y));
    let product: Vec<T> = (0..w.grid().len())
        .map(|k| -(ux.values()[k] * wx.values()[k] + uy.values()[k] * wy.values()[k]))
        .collect();
    let mut out = forward_raw(&RealField::from_raw(*w.grid(), product));
    if dealiased {
        out = truncate(&out);
    }
    out.coeffs_mut()[0] = Complex::new(T::zero(), T::zero());
    out
}

/// `∂ₜω = −(u·∇)ω`, with dealiased products.
pub fn rhs<T: Real>(state: &SolverState<T>) -> RealField<T> {
    rhs_with(state, true)
}

pub fn rhs_with<T: Real>(state: &SolverState<T>, dealiased: bool) -> RealField<T> {
    inverse_raw(&advection_spectrum(&forward_raw(state.omega()), dealiased))
}

/// Projects a vorticity onto the resolved 2/3 band.
pub fn project_to_band<T: Real>(omega: &RealField<T>) -> RealField<T> {
    inverse_raw(&truncate(&forward_raw(omega)))
}

/// One classical RK4 step. Rejects `dt` above the CFL bound.
pub fn step<T: Real>(state: &SolverState<T>, dt: T, config: &SolverConfig<T>) -> Result<SolverState<T>> {
    let max_dt = state.max_dt(config.cfl);
    if !(dt >= T::zero()) || dt > max_dt * (T::one() + T::of(1e-12)) {
        return Err(Error::CflViolation {
            dt: dt.as_f64(),
            max_dt: max_dt.as_f64(),
        });
    }
    let w0 = forward_raw(state.omega());
    let half = dt / T::of(2.0);
    let k1 = advection_spectrum(&w0, config.dealias);
    let k2 = advection_spectrum(&axpy(&w0, half, &k1), config.dealias);
    let k3 = advection_spectrum(&axpy(&w0, half, &k2), config.dealias);
    let k4 = advection_spectrum(&axpy(&w0, dt, &k3), config.dealias);
    let sixth = dt / T::of(6.0);
    let two = T::of(2.0);
    let mut w1 = w0.clone();
    for (k, c) in w1.coeffs_mut().iter_mut().enumerate() {
        let incr = k1.coeffs()[k] + (k2.coeffs()[k] + k3.coeffs()[k]) * two + k4.coeffs()[k];
        *c = *c + incr * sixth;
    }
    let next = SolverState::from_spectrum(state.t + dt, &w1);
    if !next.omega.is_finite() {
        return Err(Error::NumericalBlowup {
            t: next.t.as_f64(),
        });
    }
    Ok(next)
}

fn axpy<T: Real>(a: &SpectralField<T>, c: T, b: &SpectralField<T>) -> SpectralField<T> {
    let coeffs = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x + y * c)
        .collect();
    SpectralField::from_raw(*a.grid(), coeffs)
}

/// Adaptive-step driver that can stop exactly on requested times.
#[derive(Debug, Clone)]
pub struct Evolution<T> {
    state: SolverState<T>,
    config: SolverConfig<T>,
    steps: usize,
}

impl<T: Real> Evolution<T> {
    /// Starts at `t = 0`. With dealiasing on, the datum is first projected
    /// onto the resolved band.
    pub fn new(omega0: &RealField<T>, config: SolverConfig<T>) -> Result<Self> {
        config.validate()?;
        omega0.check_finite()?;
        let omega0 = if config.dealias {
            project_to_band(omega0)
        } else {
            omega0.clone()
        };
        Ok(Self {
            state: SolverState::new(T::zero(), omega0)?,
            config,
            steps: 0,
        })
    }

    pub fn state(&self) -> &SolverState<T> {
        &self.state
    }

    pub fn into_state(self) -> SolverState<T> {
        self.state
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.config
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Advances by exactly `dt` (which must satisfy the CFL bound).
    pub fn step_by(&mut self, dt: T) -> Result<()> {
        self.state = step(&self.state, dt, &self.config)?;
        self.steps += 1;
        Ok(())
    }

    /// Steps by `dt`, clipped so the state does not pass `target`; a
    /// clipped step lands exactly on `target`.
    pub fn step_toward(&mut self, dt: T, target: T) -> Result<()> {
        let remaining = target - self.state.t;
        let last = dt >= remaining;
        self.step_by(if last { remaining } else { dt })?;
        if last {
            self.state.t = target;
        }
        Ok(())
    }

    /// Steps with the CFL time step, clipping the last step so the state
    /// lands exactly on `target`. `on_step` sees every intermediate state.
    pub fn advance_to(&mut self, target: T, mut on_step: impl FnMut(&SolverState<T>)) -> Result<()> {
        while self.state.t < target {
            let dt = self.state.max_dt(self.config.cfl);
            self.step_toward(dt, target)?;
            on_step(&self.state);
        }
        Ok(())
    }
}

pub(crate) fn ledger_row<T: Real>(state: &SolverState<T>, alpha: HolderExponent<T>) -> LedgerRow {
    let omega = state.omega();
    LedgerRow {
        t: state.t().as_f64(),
        l1: lp_norm(omega, Lp::One).as_f64(),
        l2: lp_norm(omega, Lp::Two).as_f64(),
        linf: lp_norm(omega, Lp::Infinity).as_f64(),
        mean: omega.mean().as_f64(),
        energy: vector_l2(state.u()).as_f64(),
        holder: holder_seminorm(omega, alpha).as_f64(),
    }
}

/// Runs to `config.t_end`, sampling the ledger at `t = 0`, every
/// `conservation_check_every` steps and at `t_end`.
pub fn evolve<T: Real>(
    omega0: &RealField<T>,
    config: &SolverConfig<T>,
) -> Result<(SolverState<T>, ConservationLedger)> {
    evolve_observed(omega0, config, |_| {})
}

/// As [`evolve`], calling `on_step` with the initial state and after every step.
pub fn evolve_observed<T: Real>(
    omega0: &RealField<T>,
    config: &SolverConfig<T>,
    mut on_step: impl FnMut(&SolverState<T>),
) -> Result<(SolverState<T>, ConservationLedger)> {
    let mut run = Evolution::new(omega0, *config)?;
    let alpha = HolderExponent::new(config.holder_alpha)?;
    let mut ledger = ConservationLedger::default();
    ledger.push(ledger_row(run.state(), alpha))?;
    on_step(run.state());
    let every = config.conservation_check_every;
    let mut steps = 0usize;
    let mut failure = None;
    run.advance_to(config.t_end, |s| {
        on_step(s);
        steps += 1;
        if failure.is_none() && (steps % every == 0 || s.t() == config.t_end) {
            if let Err(e) = ledger.push(ledger_row(s, alpha)) {
                failure = Some(e);
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok((run.into_state(), ledger)),
    }
}
