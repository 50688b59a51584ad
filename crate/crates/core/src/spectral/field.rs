use num_complex::Complex;

use super::Grid2D;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};

/// Real samples on a [`Grid2D`], stored row-major with rows of constant `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField<T> {
    grid: Grid2D<T>,
    values: Vec<T>,
}

impl<T: Real> RealField<T> {
    /// Builds a field, rejecting wrong shapes and non-finite samples.
    pub fn new(grid: Grid2D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let field = Self { grid, values };
        field.check_finite()?;
        Ok(field)
    }

    pub(crate) fn from_raw(grid: Grid2D<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self::from_raw(grid, vec![T::zero(); grid.len()])
    }

    pub fn constant(grid: Grid2D<T>, c: T) -> Self {
        Self::from_raw(grid, vec![c; grid.len()])
    }

    /// Samples `f(x, y)` at every grid point.
    pub fn from_fn(grid: Grid2D<T>, f: impl Fn(T, T) -> T) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..n {
            let y = grid.coord(j);
            for i in 0..n {
                values.push(f(grid.coord(i), y));
            }
        }
        Self::from_raw(grid, values)
    }

    /// Samples `f(i, j)` over grid indices.
    pub fn from_index_fn(grid: Grid2D<T>, f: impl Fn(usize, usize) -> T) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..n {
            for i in 0..n {
                values.push(f(i, j));
            }
        }
        Self::from_raw(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value at `(x_i, y_j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    /// First non-finite sample, if any.
    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(k) => Err(Error::NonFinite {
                i: k % self.grid.n(),
                j: k / self.grid.n(),
                value: self.values[k].as_f64(),
            }),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Grid average, equal to the zero-wavenumber coefficient.
    pub fn mean(&self) -> T {
        pairwise_sum(&self.values) / T::of_usize(self.values.len())
    }

    /// Quadrature of the field over the box.
    pub fn integral(&self) -> T {
        pairwise_sum(&self.values) * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |m, &v| if v.abs() > m { v.abs() } else { m })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    /// `self + c · other`.
    pub fn axpy(&self, c: T, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + c * b)
    }

    /// Periodic grid shift: the result at `(i, j)` is `self(i - di, j - dj)`.
    pub fn shift(&self, di: i64, dj: i64) -> Self {
        let n = self.grid.n() as i64;
        Self::from_index_fn(self.grid, |i, j| {
            let si = (i as i64 - di).rem_euclid(n) as usize;
            let sj = (j as i64 - dj).rem_euclid(n) as usize;
            self.get(si, sj)
        })
    }

    /// Reflection `x ↦ L - x`, exact on the grid (`i ↦ -i mod n`).
    pub fn reflect_x(&self) -> Self {
        let n = self.grid.n();
        Self::from_index_fn(self.grid, |i, j| self.get((n - i) % n, j))
    }

    /// Same samples with the scalar type converted.
    pub fn cast<U: Real>(&self) -> RealField<U> {
        RealField {
            grid: self.grid.cast(),
            values: self.values.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }
}

/// Complex Fourier coefficients with `f(x) = Σ_k f̂(k) e^{i k·x}`.
///
/// Storage mirrors [`RealField`]: coefficient `(p, q)` sits at `q · n + p`,
/// where `p` indexes the x-frequency and `q` the y-frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    grid: Grid2D<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: Grid2D<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_raw(grid: Grid2D<T>, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self::from_raw(grid, vec![Complex::new(T::zero(), T::zero()); grid.len()])
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> Complex<T> {
        self.coeffs[self.grid.index(p, q)]
    }

    #[inline]
    pub fn set(&mut self, p: usize, q: usize, c: Complex<T>) {
        let k = self.grid.index(p, q);
        self.coeffs[k] = c;
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| if c.norm() > m { c.norm() } else { m })
    }

    /// `max_k |f̂(-k) - conj f̂(k)|`, relative to the largest coefficient.
    pub fn symmetry_deviation(&self) -> T {
        let n = self.grid.n();
        let scale = self.max_abs();
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for q in 0..n {
            let nq = self.grid.negate_index(q);
            for p in 0..n {
                let np = self.grid.negate_index(p);
                let d = (self.get(np, nq) - self.get(p, q).conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst / scale
    }

    /// Multiplies each coefficient by `m(p, q)`.
    pub fn map_indexed(&self, m: impl Fn(usize, usize, Complex<T>) -> Complex<T>) -> Self {
        let n = self.grid.n();
        let mut out = self.coeffs.clone();
        for q in 0..n {
            for p in 0..n {
                let k = q * n + p;
                out[k] = m(p, q, out[k]);
            }
        }
        Self::from_raw(self.grid, out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_raw(
            self.grid,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn scale(&self, c: T) -> Self {
        Self::from_raw(self.grid, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `Σ_k |f̂(k)|²`.
    pub fn energy(&self) -> T {
        let sq: Vec<T> = self.coeffs.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&sq)
    }
}

/// Two-component field, e.g. a velocity `u = (u¹, u²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<T> {
    x: RealField<T>,
    y: RealField<T>,
}

impl<T: Real> VectorField<T> {
    pub fn new(x: RealField<T>, y: RealField<T>) -> Result<Self> {
        if x.grid() != y.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { x, y })
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        Self {
            x: RealField::zeros(grid),
            y: RealField::zeros(grid),
        }
    }

    /// Spatially uniform field `(cx, cy)`.
    pub fn uniform(grid: Grid2D<T>, cx: T, cy: T) -> Self {
        Self {
            x: RealField::constant(grid, cx),
            y: RealField::constant(grid, cy),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<T> {
        self.x.grid()
    }

    #[inline]
    pub fn x(&self) -> &RealField<T> {
        &self.x
    }

    #[inline]
    pub fn y(&self) -> &RealField<T> {
        &self.y
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            x: self.x.sub(&other.x)?,
            y: self.y.sub(&other.y)?,
        })
    }

    /// `max(‖u¹‖∞, ‖u²‖∞)`.
    pub fn max_component(&self) -> T {
        self.x.max_abs().max(self.y.max_abs())
    }
}
