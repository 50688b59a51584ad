use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Periodic square grid on `[0, L)²` with `n` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D<T> {
    n: usize,
    box_length: T,
}

impl<T: Real> Grid2D<T> {
    pub fn new(n: usize, box_length: T) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 8"
            )));
        }
        if !(box_length.is_finite() && box_length > T::zero()) {
            return Err(Error::InvalidGrid(format!(
                "box length {box_length} must be positive and finite"
            )));
        }
        Ok(Self { n, box_length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> T {
        self.box_length
    }

    /// Number of samples, `n²`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `L / n`.
    #[inline]
    pub fn spacing(&self) -> T {
        self.box_length / T::of_usize(self.n)
    }

    /// Area element `(L / n)²` used by quadrature sums.
    #[inline]
    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    /// Coordinate of sample `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> T {
        T::of_usize(i) * self.spacing()
    }

    /// Flat storage index of sample `(x_i, y_j)`; rows are lines of constant `y`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    /// Signed integer frequency of storage index `idx`, in `(-n/2, n/2]`.
    #[inline]
    pub fn signed_freq(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let idx = idx as i64;
        if idx <= n / 2 {
            idx
        } else {
            idx - n
        }
    }

    /// Physical wavenumber `(2π / L) · ĵ`.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> T {
        self.fundamental() * T::of(self.signed_freq(idx) as f64)
    }

    /// Smallest nonzero wavenumber magnitude, `2π / L`.
    #[inline]
    pub fn fundamental(&self) -> T {
        T::PI() * T::of(2.0) / self.box_length
    }

    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        idx == self.n / 2
    }

    /// Storage index of the frequency `-ĵ`.
    #[inline]
    pub fn negate_index(&self, idx: usize) -> usize {
        (self.n - idx) % self.n
    }

    /// Reduces a coordinate into `[0, L)`.
    #[inline]
    pub fn wrap(&self, x: T) -> T {
        let l = self.box_length;
        let r = x - (x / l).floor() * l;
        if r >= l {
            r - l
        } else {
            r
        }
    }

    /// Same grid with the scalar type converted.
    pub fn cast<U: Real>(&self) -> Grid2D<U> {
        Grid2D {
            n: self.n,
            box_length: U::of(self.box_length.as_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid2D::new(4, 1.0).is_err());
        assert!(Grid2D::new(12, 1.0).is_err());
        assert!(Grid2D::new(16, 0.0).is_err());
        assert!(Grid2D::new(16, f64::NAN).is_err());
        assert!(Grid2D::new(16, 2.0).is_ok());
    }

    #[test]
    fn frequency_map() {
        let g = Grid2D::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let freqs: Vec<i64> = (0..8).map(|i| g.signed_freq(i)).collect();
        assert_eq!(freqs, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert!((g.wavenumber(5) + 3.0).abs() < 1e-15);
        assert_eq!(g.negate_index(0), 0);
        assert_eq!(g.negate_index(3), 5);
        assert_eq!(g.negate_index(4), 4);
    }

    #[test]
    fn wrap_into_box() {
        let g = Grid2D::<f64>::new(8, 1.0).unwrap();
        assert!((g.wrap(1.25) - 0.25).abs() < 1e-15);
        assert!((g.wrap(-0.25) - 0.75).abs() < 1e-15);
        assert!(g.wrap(-1e-18) < 1.0);
    }
}
