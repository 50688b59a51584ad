//! Forward/inverse 2D discrete Fourier transforms, spectral derivatives and
//! the 2/3 dealiasing filter.

use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use super::{Grid2D, RealField, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Differentiation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// In-place unnormalized 2D FFT of an `n × n` row-major buffer.
pub(crate) fn fft2<T: Real>(data: &mut [Complex<T>], n: usize, direction: FftDirection) {
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft(n, direction);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    let mut t = vec![Complex::new(T::zero(), T::zero()); n * n];
    transpose(data, &mut t, n);
    fft.process_with_scratch(&mut t, &mut scratch);
    transpose(&t, data, n);
}

fn transpose<T: Copy>(src: &[T], dst: &mut [T], n: usize) {
    const B: usize = 16;
    for jb in (0..n).step_by(B) {
        for ib in (0..n).step_by(B) {
            for j in jb..(jb + B).min(n) {
                for i in ib..(ib + B).min(n) {
                    dst[i * n + j] = src[j * n + i];
                }
            }
        }
    }
}

/// Forward transform without the finiteness scan.
pub(crate) fn forward_raw<T: Real>(f: &RealField<T>) -> SpectralField<T> {
    let grid = *f.grid();
    let n = grid.n();
    let mut buf: Vec<Complex<T>> = f
        .values()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    fft2(&mut buf, n, FftDirection::Forward);
    let norm = T::one() / T::of_usize(grid.len());
    for c in &mut buf {
        *c = *c * norm;
    }
    SpectralField::from_raw(grid, buf)
}

/// Inverse transform keeping the real part, without the symmetry check.
pub(crate) fn inverse_raw<T: Real>(s: &SpectralField<T>) -> RealField<T> {
    let grid = *s.grid();
    let mut buf = s.coeffs().to_vec();
    fft2(&mut buf, grid.n(), FftDirection::Inverse);
    RealField::from_raw(grid, buf.into_iter().map(|c| c.re).collect())
}

/// Fourier coefficients normalized so that `f(x) = Σ_k f̂(k) e^{i k·x}`;
/// the zero-wavenumber coefficient is the mean of `f`.
pub fn forward_transform<T: Real>(f: &RealField<T>) -> Result<SpectralField<T>> {
    f.check_finite()?;
    Ok(forward_raw(f))
}

/// Exact inverse of [`forward_transform`]. The spectrum must be conjugate
/// symmetric, otherwise the synthesized field would be complex.
pub fn inverse_transform<T: Real>(s: &SpectralField<T>) -> Result<RealField<T>> {
    let dev = s.symmetry_deviation();
    if !(dev <= T::exact_tol()) {
        return Err(Error::NotConjugateSymmetric {
            deviation: dev.as_f64(),
        });
    }
    Ok(inverse_raw(s))
}

/// Multiplies each coefficient by `i k_axis`. The Nyquist coefficient along
/// the differentiation axis has no partner and is zeroed.
pub fn spectral_derivative<T: Real>(s: &SpectralField<T>, axis: Axis) -> SpectralField<T> {
    let grid = *s.grid();
    s.map_indexed(|p, q, c| {
        let idx = match axis {
            Axis::X => p,
            Axis::Y => q,
        };
        if grid.is_nyquist(idx) {
            Complex::new(T::zero(), T::zero())
        } else {
            let k = grid.wavenumber(idx);
            Complex::new(-c.im * k, c.re * k)
        }
    })
}

/// True when `(p, q)` survives the square 2/3 rule, `max(|ĵx|, |ĵy|) ≤ n/3`.
#[inline]
pub(crate) fn in_band<T: Real>(grid: &Grid2D<T>, p: usize, q: usize) -> bool {
    let n = grid.n() as i64;
    let jp = grid.signed_freq(p).abs();
    let jq = grid.signed_freq(q).abs();
    3 * jp.max(jq) <= n
}

/// Square 2/3-rule truncation.
pub fn dealias<T: Real>(s: &SpectralField<T>) -> SpectralField<T> {
    let grid = *s.grid();
    s.map_indexed(|p, q, c| {
        if in_band(&grid, p, q) {
            c
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid2D;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Direct evaluation of the defining sum, O(n⁴).
    fn naive_dft(f: &RealField<f64>) -> Vec<Complex<f64>> {
        let n = f.grid().n();
        let mut out = vec![Complex::new(0.0, 0.0); n * n];
        for q in 0..n {
            for p in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for j in 0..n {
                    for i in 0..n {
                        let phase = -2.0 * PI * ((p * i + q * j) as f64) / n as f64;
                        acc += Complex::from_polar(f.get(i, j), phase);
                    }
                }
                out[q * n + p] = acc / (n * n) as f64;
            }
        }
        out
    }

    fn random_field(grid: Grid2D<f64>, seed: u64) -> RealField<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        RealField::new(grid, values).unwrap()
    }

    #[test]
    fn zero_and_constant() {
        let g = Grid2D::new(16, 3.0).unwrap();
        let z = forward_transform(&RealField::zeros(g)).unwrap();
        assert!(z.coeffs().iter().all(|c| c.norm() == 0.0));
        let one = forward_transform(&RealField::constant(g, 1.0)).unwrap();
        assert!((one.get(0, 0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let rest: f64 = one.coeffs()[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(rest < 1e-15);
    }

    #[test]
    fn sine_mode_matches_direct_summation() {
        let l = 1.7;
        let g = Grid2D::new(8, l).unwrap();
        let f = RealField::from_fn(g, |x, _| (2.0 * PI * x / l).sin());
        let fast = forward_transform(&f).unwrap();
        let slow = naive_dft(&f);
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!((fast.get(1, 0) - Complex::new(0.0, -0.5)).norm() < 1e-14);
        assert!((fast.get(7, 0) - Complex::new(0.0, 0.5)).norm() < 1e-14);
        let others = fast
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != 1 && *k != 7)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-14);
    }

    #[test]
    fn random_field_matches_direct_summation() {
        let g = Grid2D::new(8, 2.0).unwrap();
        let f = random_field(g, 3);
        let fast = forward_transform(&f).unwrap();
        for (a, b) in fast.coeffs().iter().zip(&naive_dft(&f)) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn forward_rejects_nan_with_index() {
        let g = Grid2D::new(8, 1.0).unwrap();
        let mut v = vec![0.0; 64];
        v[g.index(2, 6)] = f64::INFINITY;
        let f = RealField::from_raw(g, v);
        assert!(matches!(
            forward_transform(&f),
            Err(Error::NonFinite { i: 2, j: 6, .. })
        ));
    }

    #[test]
    fn inverse_of_single_mode() {
        let l = 2.5;
        let g = Grid2D::new(16, l).unwrap();
        let mut s = SpectralField::zeros(g);
        s.set(1, 0, Complex::new(0.0, -0.5));
        s.set(15, 0, Complex::new(0.0, 0.5));
        let f = inverse_transform(&s).unwrap();
        let exact = RealField::from_fn(g, |x, _| (2.0 * PI * x / l).sin());
        let err = f.sub(&exact).unwrap().max_abs();
        assert!(err < 1e-14);
        assert_eq!(inverse_transform(&SpectralField::zeros(g)).unwrap(), RealField::zeros(g));
    }

    #[test]
    fn inverse_rejects_asymmetric() {
        let g = Grid2D::new(8, 1.0).unwrap();
        let mut s = SpectralField::zeros(g);
        s.set(1, 0, Complex::new(1.0, 0.0));
        assert!(matches!(
            inverse_transform(&s),
            Err(Error::NotConjugateSymmetric { .. })
        ));
    }

    #[test]
    fn round_trip_random() {
        for n in [8, 32, 128] {
            let g = Grid2D::new(n, 1.3).unwrap();
            let f = random_field(g, n as u64);
            let s = forward_transform(&f).unwrap();
            assert!(s.symmetry_deviation() < 1e-13);
            let back = inverse_transform(&s).unwrap();
            let err = back.sub(&f).unwrap().max_abs() / f.max_abs();
            assert!(err <= 1e-12, "n = {n}: {err}");
        }
    }

    #[test]
    fn round_trip_f32() {
        let g = Grid2D::<f32>::new(32, 1.0).unwrap();
        let f = random_field(g.cast(), 9).cast::<f32>();
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() < 1e-5);
    }

    #[test]
    fn derivative_of_sine() {
        let l = 3.0;
        let g = Grid2D::new(32, l).unwrap();
        let k = 2.0 * PI / l;
        let f = RealField::from_fn(g, |x, _| (k * x).sin());
        let s = forward_transform(&f).unwrap();
        let dx = inverse_transform(&spectral_derivative(&s, Axis::X)).unwrap();
        let exact = RealField::from_fn(g, |x, _| k * (k * x).cos());
        assert!(dx.sub(&exact).unwrap().max_abs() / k <= 1e-12);
        let dy = inverse_transform(&spectral_derivative(&s, Axis::Y)).unwrap();
        assert!(dy.max_abs() <= 1e-15);
        let c = forward_transform(&RealField::constant(g, 4.0)).unwrap();
        assert!(spectral_derivative(&c, Axis::X).max_abs() == 0.0);
    }

    #[test]
    fn derivative_zeroes_nyquist() {
        let g = Grid2D::new(8, 1.0).unwrap();
        let f = RealField::from_index_fn(g, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 });
        let s = forward_transform(&f).unwrap();
        assert!(s.get(4, 0).norm() > 0.9);
        assert_eq!(spectral_derivative(&s, Axis::X).max_abs(), 0.0);
    }

    #[test]
    fn dealias_filter() {
        let g = Grid2D::new(16, 1.0).unwrap();
        // in-band field: |ĵ| ≤ 5 for n = 16
        let f = RealField::from_fn(g, |x, y| {
            (2.0 * PI * 5.0 * x).cos() + (2.0 * PI * 3.0 * y).sin() * (2.0 * PI * 5.0 * x).sin()
        });
        let s = forward_transform(&f).unwrap();
        let d = dealias(&s);
        for (a, b) in d.coeffs().iter().zip(s.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
        for q in 0..16 {
            for p in 0..16 {
                if in_band(&g, p, q) {
                    assert_eq!(d.get(p, q), s.get(p, q));
                }
            }
        }
        let mut nyq = SpectralField::zeros(g);
        nyq.set(8, 0, Complex::new(1.0, 0.0));
        assert_eq!(dealias(&nyq).max_abs(), 0.0);
        let r = forward_transform(&random_field(g, 1)).unwrap();
        let d = dealias(&r);
        assert!(d.energy() <= r.energy());
        for (a, b) in d.coeffs().iter().zip(r.coeffs()) {
            assert!(*a == *b || a.norm() == 0.0);
        }
    }
}
