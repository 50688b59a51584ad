use crate::dynamics::{divergence, SolverState};
use crate::error::{Error, Result};
use crate::norms::{lp_norm, vector_l2, Lp};
use crate::scalar::Real;
use crate::spectral::{Grid2D, RealField, VectorField};

/// Velocity frames sampled at strictly increasing times.
#[derive(Debug, Clone)]
pub struct VelocityHistory<T> {
    grid: Grid2D<T>,
    times: Vec<T>,
    frames: Vec<VectorField<T>>,
    speeds: Vec<T>,
}

impl<T: Real> VelocityHistory<T> {
    /// Validates frame count, time ordering, grids and that every frame is
    /// spectrally divergence-free to `1e-10` relative to `(2π/L)·‖u‖_{L²}`.
    pub fn new(times: Vec<T>, frames: Vec<VectorField<T>>) -> Result<Self> {
        let history = Self::new_synthetic(times, frames)?;
        for (t, u) in history.times.iter().zip(&history.frames) {
            let div = lp_norm(&divergence(u), Lp::Two);
            let scale = vector_l2(u) * history.grid.fundamental();
            if div > T::exact_tol() * scale {
                return Err(Error::InvalidParameter(format!(
                    "velocity frame at t = {t} is not divergence-free ({:e})", div.as_f64()
                )));
            }
        }
        Ok(history)
    }

    /// As [`VelocityHistory::new`] without the divergence test, for analytic
    /// velocities that are not periodic (rigid rotation, say).
    pub fn new_synthetic(times: Vec<T>, frames: Vec<VectorField<T>>) -> Result<Self> {
        if times.len() < 2 || times.len() != frames.len() {
            return Err(Error::InvalidParameter(format!(
                "history needs ≥ 2 frames with one time each ({} times, {} frames)",
                times.len(),
                frames.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || !times.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidParameter(
                "history times must be finite and strictly increasing".into(),
            ));
        }
        let grid = *frames[0].grid();
        if frames.iter().any(|f| *f.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        let speeds = frames.iter().map(|f| f.max_component()).collect();
        Ok(Self {
            grid,
            times,
            frames,
            speeds,
        })
    }

    /// Time-independent velocity repeated at two times.
    pub fn steady(u: VectorField<T>, t_end: T) -> Result<Self> {
        Self::new(vec![T::zero(), t_end], vec![u.clone(), u])
    }

    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn frames(&self) -> &[VectorField<T>] {
        &self.frames
    }

    pub fn start(&self) -> T {
        self.times[0]
    }

    pub fn end(&self) -> T {
        *self.times.last().expect("≥ 2 frames")
    }

    /// Largest sub-step on `[times[k], times[k+1]]` with Courant number `cfl`.
    pub(crate) fn cfl_step(&self, k: usize, cfl: T) -> T {
        let umax = self.speeds[k]
            .max(self.speeds[(k + 1).min(self.speeds.len() - 1)])
            .max(T::of(1e-12));
        cfl * self.grid.spacing() / umax
    }

    pub(crate) fn check_time(&self, t: T) -> Result<()> {
        if !(t >= self.start() && t <= self.end()) {
            return Err(Error::TimeOutOfRange {
                t: t.as_f64(),
                start: self.start().as_f64(),
                end: self.end().as_f64(),
            });
        }
        Ok(())
    }

    /// Frame index `k` and weight `θ` with `u(t) = (1−θ) u_k + θ u_{k+1}`.
    pub(crate) fn bracket(&self, t: T) -> (usize, T) {
        let last = self.times.len() - 1;
        let k = self.times.partition_point(|&s| s <= t).clamp(1, last) - 1;
        let (a, b) = (self.times[k], self.times[k + 1]);
        let theta = ((t - a) / (b - a)).max(T::zero()).min(T::one());
        (k, theta)
    }

    /// Velocity at time `t` and position `(x, y)`: bilinear in space, linear
    /// in time.
    pub fn velocity_at(&self, t: T, x: T, y: T) -> (T, T) {
        let (k, theta) = self.bracket(t);
        let stencil = Stencil::new(&self.grid, x, y);
        let (ax, ay) = stencil.sample_vector(&self.frames[k]);
        if theta == T::zero() {
            return (ax, ay);
        }
        let (bx, by) = stencil.sample_vector(&self.frames[k + 1]);
        let one = T::one();
        ((one - theta) * ax + theta * bx, (one - theta) * ay + theta * by)
    }
}

/// Bilinear interpolation weights at a periodic position.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stencil {
    i0: usize,
    i1: usize,
    j0: usize,
    j1: usize,
    tx: f64,
    ty: f64,
}

impl Stencil {
    pub(crate) fn new<T: Real>(grid: &Grid2D<T>, x: T, y: T) -> Self {
        let n = grid.n();
        let h = grid.spacing();
        let fx = grid.wrap(x) / h;
        let fy = grid.wrap(y) / h;
        let (bx, by) = (fx.floor(), fy.floor());
        let i0 = bx.to_usize().unwrap_or(0) % n;
        let j0 = by.to_usize().unwrap_or(0) % n;
        Self {
            i0,
            i1: (i0 + 1) % n,
            j0,
            j1: (j0 + 1) % n,
            tx: (fx - bx).as_f64(),
            ty: (fy - by).as_f64(),
        }
    }

    pub(crate) fn sample<T: Real>(&self, f: &RealField<T>) -> T {
        let (tx, ty) = (T::of(self.tx), T::of(self.ty));
        let one = T::one();
        let a = f.get(self.i0, self.j0) * (one - tx) + f.get(self.i1, self.j0) * tx;
        let b = f.get(self.i0, self.j1) * (one - tx) + f.get(self.i1, self.j1) * tx;
        a * (one - ty) + b * ty
    }

    fn sample_vector<T: Real>(&self, u: &VectorField<T>) -> (T, T) {
        (self.sample(u.x()), self.sample(u.y()))
    }
}

/// Collects velocity frames from solver states.
#[derive(Debug, Clone, Default)]
pub struct HistoryRecorder<T> {
    times: Vec<T>,
    frames: Vec<VectorField<T>>,
}

impl<T: Real> HistoryRecorder<T> {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            frames: Vec::new(),
        }
    }

    pub fn record(&mut self, state: &SolverState<T>) {
        self.times.push(state.t());
        self.frames.push(state.u().clone());
    }

    pub fn finish(self) -> Result<VelocityHistory<T>> {
        VelocityHistory::new(self.times, self.frames)
    }
}
