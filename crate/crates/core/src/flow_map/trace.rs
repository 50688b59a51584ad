use std::io::Write;

use super::history::{Stencil, VelocityHistory};
use crate::error::{Error, Result};
use crate::norms::{lp_norm, Lp};
use crate::scalar::Real;
use crate::spectral::RealField;

/// Edge refinement used when transporting a polygon boundary.
pub const EDGE_SUBDIVISIONS: usize = 16;

/// A query point and its preimage at time 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowPoint<T> {
    pub x: (T, T),
    /// Preimage wrapped into `[0, L)²`.
    pub origin: (T, T),
    /// Preimage without periodic wrapping, for distances across the seam.
    pub origin_unwrapped: (T, T),
}

/// Preimages `X(0, t, x)` of a set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample<T> {
    pub t: T,
    pub points: Vec<FlowPoint<T>>,
}

impl<T: Real> FlowSample<T> {
    /// CSV with header `x,y,X0x,X0y`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,X0x,X0y")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{}",
                p.x.0.as_f64(),
                p.x.1.as_f64(),
                p.origin.0.as_f64(),
                p.origin.1.as_f64()
            )?;
        }
        Ok(())
    }
}

/// Courant number of the characteristic sub-steps.
pub const TRACE_CFL: f64 = 0.5;

/// Integration breakpoints from `from` to `to`. Each frame interval is cut
/// into equal sub-steps no longer than the CFL step of its bracketing frames;
/// the knots depend only on the history, so flows compose consistently.
fn breakpoints<T: Real>(history: &VelocityHistory<T>, from: T, to: T) -> Vec<T> {
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    let times = history.times();
    let mut ts = vec![lo];
    for k in 0..times.len() - 1 {
        let (a, b) = (times[k], times[k + 1]);
        if b <= lo || a >= hi {
            continue;
        }
        let cap = history.cfl_step(k, T::of(TRACE_CFL));
        let m = ((b - a) / cap).ceil().to_usize().unwrap_or(1).max(1);
        for s in 1..=m {
            let knot = a + (b - a) * T::of_usize(s) / T::of_usize(m);
            if knot > lo && knot < hi {
                ts.push(knot);
            }
        }
    }
    ts.push(hi);
    if from > to {
        ts.reverse();
    }
    ts
}

/// Transports `points` (unwrapped) along `dX/ds = u(s, X)` from `s = from`
/// to `s = to` with RK4 between consecutive frame times.
pub(crate) fn transport<T: Real>(
    history: &VelocityHistory<T>,
    from: T,
    to: T,
    points: &[(T, T)],
) -> Vec<(T, T)> {
    let mut xs = points.to_vec();
    if from == to {
        return xs;
    }
    let ts = breakpoints(history, from, to);
    let two = T::of(2.0);
    let six = T::of(6.0);
    for w in ts.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let ds = s1 - s0;
        let mid = s0 + ds / two;
        for p in xs.iter_mut() {
            let (x, y) = *p;
            let k1 = history.velocity_at(s0, x, y);
            let k2 = history.velocity_at(mid, x + ds / two * k1.0, y + ds / two * k1.1);
            let k3 = history.velocity_at(mid, x + ds / two * k2.0, y + ds / two * k2.1);
            let k4 = history.velocity_at(s1, x + ds * k3.0, y + ds * k3.1);
            *p = (
                x + ds / six * (k1.0 + two * (k2.0 + k3.0) + k4.0),
                y + ds / six * (k1.1 + two * (k2.1 + k3.1) + k4.1),
            );
        }
    }
    xs
}

/// Flow map between two recorded times; `to < from` integrates backward.
pub(crate) fn flow_between<T: Real>(
    history: &VelocityHistory<T>,
    from: T,
    to: T,
    points: &[(T, T)],
) -> Result<Vec<(T, T)>> {
    history.check_time(from)?;
    history.check_time(to)?;
    if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::InvalidParameter("query points must be finite".into()));
    }
    Ok(transport(history, from, to, points))
}

/// Regular Lagrangian flow `X(0, t, x)`: integrates the characteristics
/// backward from `t` to the start of the history.
pub fn backward_flow<T: Real>(
    history: &VelocityHistory<T>,
    t: T,
    points: &[(T, T)],
) -> Result<FlowSample<T>> {
    let origins = flow_between(history, t, history.start(), points)?;
    let grid = history.grid();
    Ok(FlowSample {
        t,
        points: points
            .iter()
            .zip(origins)
            .map(|(&x, o)| FlowPoint {
                x: (grid.wrap(x.0), grid.wrap(x.1)),
                origin: (grid.wrap(o.0), grid.wrap(o.1)),
                origin_unwrapped: o,
            })
            .collect(),
    })
}

/// `‖ω(t,·) − ω̄(X(0,t,·))‖_{L²}` over the full grid, with `ω̄` sampled
/// bilinearly at the preimages.
pub fn check_lagrangian_representation<T: Real>(
    omega_bar: &RealField<T>,
    history: &VelocityHistory<T>,
    omega_t: &RealField<T>,
    t: T,
) -> Result<T> {
    let grid = *omega_bar.grid();
    if grid != *omega_t.grid() || grid != *history.grid() {
        return Err(Error::GridMismatch);
    }
    let n = grid.n();
    let mut points = Vec::with_capacity(grid.len());
    for j in 0..n {
        for i in 0..n {
            points.push((grid.coord(i), grid.coord(j)));
        }
    }
    let origins = flow_between(history, t, history.start(), &points)?;
    let pulled: Vec<T> = origins
        .iter()
        .map(|&(x, y)| Stencil::new(&grid, x, y).sample(omega_bar))
        .collect();
    let pulled = RealField::new(grid, pulled)?;
    Ok(lp_norm(&omega_t.sub(&pulled)?, Lp::Two))
}

fn shoelace<T: Real>(pts: &[(T, T)]) -> T {
    let m = pts.len();
    let mut acc = T::zero();
    for k in 0..m {
        let (a, b) = (pts[k], pts[(k + 1) % m]);
        acc = acc + (a.0 * b.1 - b.0 * a.1);
    }
    acc / T::of(2.0)
}

/// Transports the polygon with the given corners back to time 0 and returns
/// `area(preimage) / area(original)`. Each edge is subdivided into
/// [`EDGE_SUBDIVISIONS`] segments before transport, so the preimage polygon
/// follows the curved image of the edges.
pub fn incompressibility_check<T: Real>(
    history: &VelocityHistory<T>,
    t: T,
    cell_corners: &[(T, T)],
) -> Result<T> {
    if cell_corners.len() < 3 {
        return Err(Error::DegeneratePolygon { area: 0.0 });
    }
    let mut boundary = Vec::with_capacity(cell_corners.len() * EDGE_SUBDIVISIONS);
    let m = cell_corners.len();
    for k in 0..m {
        let (a, b) = (cell_corners[k], cell_corners[(k + 1) % m]);
        for s in 0..EDGE_SUBDIVISIONS {
            let w = T::of_usize(s) / T::of_usize(EDGE_SUBDIVISIONS);
            boundary.push((a.0 + (b.0 - a.0) * w, a.1 + (b.1 - a.1) * w));
        }
    }
    let area = shoelace(&boundary);
    let h = history.grid().spacing();
    if !(area.abs() > T::of(1e-6) * h * h) {
        return Err(Error::DegeneratePolygon { area: area.as_f64() });
    }
    let pre = flow_between(history, t, history.start(), &boundary)?;
    Ok(shoelace(&pre) / area)
}
