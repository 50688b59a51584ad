use num_complex::Complex;

use crate::scalar::Real;
use crate::spectral::{
    forward_raw, inverse_raw, spectral_derivative, Axis, RealField, SpectralField, VectorField,
};

/// Velocity spectra `û = i (k₂, −k₁) ω̂ / |k|²`, with `û(0) = 0`.
///
/// A component whose multiplier is odd in a Nyquist index has no conjugate
/// partner and is zeroed, so the velocity stays real.
pub(crate) fn velocity_spectra<T: Real>(w: &SpectralField<T>) -> (SpectralField<T>, SpectralField<T>) {
    let grid = *w.grid();
    let zero = Complex::new(T::zero(), T::zero());
    let ux = w.map_indexed(|p, q, c| {
        if (p == 0 && q == 0) || grid.is_nyquist(q) {
            return zero;
        }
        let (k1, k2) = (grid.wavenumber(p), grid.wavenumber(q));
        let m = k2 / (k1 * k1 + k2 * k2);
        Complex::new(-c.im * m, c.re * m)
    });
    let uy = w.map_indexed(|p, q, c| {
        if (p == 0 && q == 0) || grid.is_nyquist(p) {
            return zero;
        }
        let (k1, k2) = (grid.wavenumber(p), grid.wavenumber(q));
        let m = -k1 / (k1 * k1 + k2 * k2);
        Complex::new(-c.im * m, c.re * m)
    });
    (ux, uy)
}

/// Divergence-free velocity whose curl is `ω` minus its mean.
pub fn biot_savart<T: Real>(omega: &RealField<T>) -> VectorField<T> {
    let (ux, uy) = velocity_spectra(&forward_raw(omega));
    VectorField::new(inverse_raw(&ux), inverse_raw(&uy)).expect("shared grid")
}

/// Spectral curl `∂ₓu² − ∂ᵧu¹`.
pub fn curl<T: Real>(u: &VectorField<T>) -> RealField<T> {
    let dx = spectral_derivative(&forward_raw(u.y()), Axis::X);
    let dy = spectral_derivative(&forward_raw(u.x()), Axis::Y);
    inverse_raw(&dx.add(&dy.scale(-T::one())).expect("shared grid"))
}

/// Spectral divergence `∂ₓu¹ + ∂ᵧu²`.
pub fn divergence<T: Real>(u: &VectorField<T>) -> RealField<T> {
    let dx = spectral_derivative(&forward_raw(u.x()), Axis::X);
    let dy = spectral_derivative(&forward_raw(u.y()), Axis::Y);
    inverse_raw(&dx.add(&dy).expect("shared grid"))
}

/// `max_x |∇u(x)|_F`, the pointwise Frobenius norm of the velocity gradient
/// evaluated spectrally on the grid.
pub fn velocity_gradient_max<T: Real>(u: &VectorField<T>) -> T {
    let sx = forward_raw(u.x());
    let sy = forward_raw(u.y());
    let parts = [
        inverse_raw(&spectral_derivative(&sx, Axis::X)),
        inverse_raw(&spectral_derivative(&sx, Axis::Y)),
        inverse_raw(&spectral_derivative(&sy, Axis::X)),
        inverse_raw(&spectral_derivative(&sy, Axis::Y)),
    ];
    let len = u.grid().len();
    let mut best = T::zero();
    for k in 0..len {
        let s = parts.iter().fold(T::zero(), |acc, p| acc + p.values()[k] * p.values()[k]);
        if s > best {
            best = s;
        }
    }
    best.sqrt()
}
