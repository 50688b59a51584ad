//! Lebesgue, homogeneous Sobolev and Hölder norms, plus verifiers for the
//! interpolation inequality and the `Ḣ⁻¹`/velocity duality.

mod holder;

pub use holder::holder_seminorm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, pairwise_sum_by, Real};
use crate::spectral::{forward_raw, RealField, SpectralField, VectorField};

/// Order `s` of the homogeneous Sobolev space `Ḣˢ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SobolevOrder<T>(T);

impl<T: Real> SobolevOrder<T> {
    pub fn new(s: T) -> Result<Self> {
        if !s.is_finite() || s.abs() > T::of(4.0) {
            return Err(Error::InvalidParameter(format!(
                "Sobolev order {s} must be finite with |s| ≤ 4"
            )));
        }
        Ok(Self(s))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// Hölder exponent `α ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HolderExponent<T>(T);

impl<T: Real> HolderExponent<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "Hölder exponent {alpha} must lie in (0, 1)"
            )));
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// Lebesgue exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lp {
    One,
    Two,
    Infinity,
}

/// `‖f‖_{Lᵖ}` with box quadrature `(Σ|f|ᵖ h²)^{1/p}`.
pub fn lp_norm<T: Real>(f: &RealField<T>, p: Lp) -> T {
    let da = f.grid().cell_area();
    match p {
        Lp::One => pairwise_sum_by(f.values(), |v: T| v.abs()) * da,
        Lp::Two => (pairwise_sum_by(f.values(), |v: T| v * v) * da).sqrt(),
        Lp::Infinity => f.max_abs(),
    }
}

/// `‖u‖_{L²} = (‖u¹‖² + ‖u²‖²)^{1/2}`.
pub fn vector_l2<T: Real>(u: &VectorField<T>) -> T {
    let a = lp_norm(u.x(), Lp::Two);
    let b = lp_norm(u.y(), Lp::Two);
    (a * a + b * b).sqrt()
}

fn check_zero_mean<T: Real>(s: &SpectralField<T>) -> Result<()> {
    let grid = s.grid();
    let mean = s.coeffs()[0].norm();
    // ‖f‖_{L²} from Parseval
    let l2 = grid.box_length() * s.energy().sqrt();
    let tol = T::exact_tol() * l2 / grid.box_length();
    if mean > tol {
        return Err(Error::NonZeroMean {
            mean: mean.as_f64(),
            tolerance: tol.as_f64(),
        });
    }
    Ok(())
}

/// `Ḣˢ` norm of an already transformed field.
pub(crate) fn hs_norm_spectral<T: Real>(s: &SpectralField<T>, order: SobolevOrder<T>) -> Result<T> {
    let order = order.value();
    if order < T::zero() {
        check_zero_mean(s)?;
    }
    let grid = *s.grid();
    let n = grid.n();
    let mut terms = Vec::with_capacity(grid.len());
    for q in 0..n {
        let kq = grid.wavenumber(q);
        for p in 0..n {
            if p == 0 && q == 0 {
                continue;
            }
            let kp = grid.wavenumber(p);
            let k2 = kp * kp + kq * kq;
            let w = if order == T::zero() {
                T::one()
            } else {
                k2.powf(order)
            };
            terms.push(w * s.get(p, q).norm_sqr());
        }
    }
    let l = grid.box_length();
    Ok(l * pairwise_sum(&terms).sqrt())
}

/// Homogeneous Sobolev norm `(L² Σ_{k≠0} |k|^{2s} |f̂(k)|²)^{1/2}`.
///
/// Negative orders require a zero-mean input since `|k|^{s}` is singular at
/// `k = 0`.
pub fn hs_norm<T: Real>(f: &RealField<T>, order: SobolevOrder<T>) -> Result<T> {
    f.check_finite()?;
    hs_norm_spectral(&forward_raw(f), order)
}

/// Returns `‖f‖_{Ḣ⁻¹}^{β/(1+β)} ‖f‖_{Ḣ^β}^{1/(1+β)} − ‖f‖_{L²}`, which is
/// nonnegative up to round-off.
pub fn check_interpolation<T: Real>(f: &RealField<T>, beta: SobolevOrder<T>) -> Result<T> {
    let b = beta.value();
    if !(b > T::zero() && b < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "interpolation order β = {b} must lie in (0, 1)"
        )));
    }
    f.check_finite()?;
    let s = forward_raw(f);
    let weak = hs_norm_spectral(&s, SobolevOrder(-T::one()))?;
    let strong = hs_norm_spectral(&s, beta)?;
    let l2 = lp_norm(f, Lp::Two);
    Ok(interpolation_bound(weak, strong, b) - l2)
}

/// `weak^{β/(1+β)} · strong^{1/(1+β)}`.
pub fn interpolation_bound<T: Real>(weak: T, strong: T, beta: T) -> T {
    let one = T::one();
    weak.powf(beta / (one + beta)) * strong.powf(one / (one + beta))
}

/// `| ‖ω‖_{Ḣ⁻¹} − ‖u‖_{L²} |` for `u` the Biot-Savart velocity of `ω`.
pub fn check_duality<T: Real>(omega: &RealField<T>, u: &VectorField<T>) -> Result<T> {
    if omega.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let weak = hs_norm(omega, SobolevOrder(-T::one()))?;
    Ok((weak - vector_l2(u)).abs())
}

/// Flat norm table serialized with keys `l1, l2, linf, hminus1, hbeta, holder`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub hminus1: Option<f64>,
    pub hbeta: Option<f64>,
    pub holder: Option<f64>,
    #[serde(skip)]
    pub hs_values: Vec<(f64, f64)>,
}

impl NormReport {
    /// Norm table of `f`. `Ḣ⁻¹` is reported only for zero-mean fields.
    pub fn measure<T: Real>(
        f: &RealField<T>,
        beta: SobolevOrder<T>,
        alpha: Option<HolderExponent<T>>,
    ) -> Result<Self> {
        f.check_finite()?;
        let s = forward_raw(f);
        let hminus1 = match hs_norm_spectral(&s, SobolevOrder(-T::one())) {
            Ok(v) => Some(v.as_f64()),
            Err(Error::NonZeroMean { .. }) => None,
            Err(e) => return Err(e),
        };
        let hbeta = hs_norm_spectral(&s, beta)?.as_f64();
        let mut hs_values = vec![(beta.value().as_f64(), hbeta)];
        if let Some(v) = hminus1 {
            hs_values.insert(0, (-1.0, v));
        }
        Ok(Self {
            l1: lp_norm(f, Lp::One).as_f64(),
            l2: lp_norm(f, Lp::Two).as_f64(),
            linf: lp_norm(f, Lp::Infinity).as_f64(),
            hminus1,
            hbeta: Some(hbeta),
            holder: alpha.map(|a| holder_seminorm(f, a).as_f64()),
            hs_values,
        })
    }
}
