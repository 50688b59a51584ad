//! Initial-data families and perturbations.
//!
//! Compact data come as mirrored pairs: a positive patch left of the pair
//! axis and its exact negative mirror image on the right, so the total
//! integral vanishes sample by sample.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::HolderExponent;
use crate::scalar::Real;
use crate::spectral::{forward_raw, inverse_raw, Grid2D, RealField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    Zero,
    /// `ω = −2 sin(κx) sin(κy)` with `κ = 2π/L`; stationary on the torus.
    TaylorGreen,
    /// Pair of `A · exp(1 − 1/(1 − ρ²/r²))` bumps.
    SmoothDipole,
    /// Pair of `A · (1 − ρ/r)₊^α` cones with a Hölder edge.
    HolderPatchPair,
    /// Pair of discs of radius `r` whose edge rises smoothly over `[r − 2w, r]`.
    MollifiedVortexPatch,
}

/// Geometry and regularity of an initial datum. Lengths are absolute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialDataSpec {
    pub kind: DataKind,
    pub alpha: f64,
    /// Pair midpoint; `None` puts it at the box centre.
    pub center: Option<[f64; 2]>,
    /// Distance from the pair axis to each patch centre.
    pub half_separation: f64,
    pub radius: f64,
    pub amplitude: f64,
    /// Edge half-width `w` of the mollified disc.
    pub edge_width: f64,
    pub seed: u64,
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        Self {
            kind: DataKind::HolderPatchPair,
            alpha: 0.5,
            center: None,
            half_separation: 0.4,
            radius: 0.35,
            amplitude: 1.0,
            edge_width: 0.1,
            seed: 0,
        }
    }
}

impl InitialDataSpec {
    pub fn smooth_dipole() -> Self {
        Self {
            kind: DataKind::SmoothDipole,
            ..Self::default()
        }
    }

    pub fn holder_patch_pair(alpha: f64) -> Self {
        Self {
            kind: DataKind::HolderPatchPair,
            alpha,
            ..Self::default()
        }
    }

    fn is_compact(&self) -> bool {
        !matches!(self.kind, DataKind::Zero | DataKind::TaylorGreen)
    }

    /// Diameter of the union of both supports.
    pub fn support_diameter(&self) -> f64 {
        if self.is_compact() {
            2.0 * (self.half_separation + self.radius)
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.half_separation, self.radius, self.amplitude, self.edge_width]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("data parameters must be finite".into()));
        }
        if self.kind == DataKind::HolderPatchPair {
            HolderExponent::new(self.alpha)?;
        }
        if self.is_compact() {
            if !(self.radius > 0.0) {
                return Err(Error::InvalidParameter("radius must be positive".into()));
            }
            if self.half_separation < self.radius {
                return Err(Error::InvalidParameter(
                    "patches overlap: half_separation must be ≥ the patch radius".into(),
                ));
            }
            if self.kind == DataKind::MollifiedVortexPatch
                && !(self.edge_width > 0.0 && self.edge_width <= self.radius / 2.0)
            {
                return Err(Error::InvalidParameter("edge_width must lie in (0, radius/2]".into()));
            }
        }
        Ok(())
    }
}

/// `exp(1 − 1/(1 − s²))` on `|s| < 1`, zero outside.
fn smooth_bump(s2: f64) -> f64 {
    if s2 < 1.0 {
        (1.0 - 1.0 / (1.0 - s2)).exp()
    } else {
        0.0
    }
}

/// C^∞ transition from 0 (`t ≤ 0`) to 1 (`t ≥ 1`).
fn smooth_step(t: f64) -> f64 {
    let f = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    let (a, b) = (f(t), f(1.0 - t));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

fn profile(spec: &InitialDataSpec, rho: f64) -> f64 {
    let r = spec.radius;
    match spec.kind {
        DataKind::SmoothDipole => smooth_bump((rho / r).powi(2)),
        DataKind::HolderPatchPair => {
            if rho < r {
                (1.0 - rho / r).powf(spec.alpha)
            } else {
                0.0
            }
        }
        DataKind::MollifiedVortexPatch => {
            let w = spec.edge_width;
            smooth_step((r - rho) / (2.0 * w))
        }
        DataKind::Zero | DataKind::TaylorGreen => 0.0,
    }
}

/// Index of the mirror axis `x = c`: `2c / h`, which must be an integer.
fn mirror_index<T: Real>(grid: &Grid2D<T>, cx: f64) -> Result<i64> {
    let twice = 2.0 * cx / grid.spacing().as_f64();
    let r = twice.round();
    if (twice - r).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "pair axis x = {cx} must lie on the half-grid (spacing {})",
            grid.spacing()
        )));
    }
    Ok(r as i64)
}

/// Subtracts the mirror image across grid column `axis / 2`.
fn antisymmetrize<T: Real>(positive: &RealField<T>, axis: i64) -> RealField<T> {
    let n = positive.grid().n() as i64;
    RealField::from_index_fn(*positive.grid(), |i, j| {
        let m = (axis - i as i64).rem_euclid(n) as usize;
        positive.get(i, j) - positive.get(m, j)
    })
}

fn center_of<T: Real>(spec: &InitialDataSpec, grid: &Grid2D<T>) -> (f64, f64) {
    let l = grid.box_length().as_f64();
    spec.center.map(|c| (c[0], c[1])).unwrap_or((l / 2.0, l / 2.0))
}

/// Mirrored pair built from `patch(x − cₓ, y − c_y)` centred at
/// `(axis − half_separation, cy)`; distances are periodic.
fn mirrored_pair<T: Real>(
    grid: &Grid2D<T>,
    spec: &InitialDataSpec,
    cy: f64,
    patch: impl Fn(f64, f64) -> f64,
) -> Result<RealField<T>> {
    let (cx, _) = center_of(spec, grid);
    let axis = mirror_index(grid, cx)?;
    let l = grid.box_length().as_f64();
    let px = cx - spec.half_separation;
    let periodic = |d: f64| d - (d / l).round() * l;
    let positive = RealField::from_fn(*grid, |x, y| {
        let dx = periodic(x.as_f64() - px);
        let dy = periodic(y.as_f64() - cy);
        T::of(patch(dx, dy))
    });
    Ok(antisymmetrize(&positive, axis))
}

/// Samples the datum described by `spec` on `grid`.
pub fn generate_initial_data<T: Real>(spec: &InitialDataSpec, grid: &Grid2D<T>) -> Result<RealField<T>> {
    spec.validate()?;
    let l = grid.box_length().as_f64();
    let limit = l / 4.0;
    if spec.support_diameter() > limit * (1.0 + 1e-12) {
        return Err(Error::SupportTooLarge {
            diameter: spec.support_diameter(),
            limit,
        });
    }
    let a = spec.amplitude;
    match spec.kind {
        DataKind::Zero => Ok(RealField::zeros(*grid)),
        DataKind::TaylorGreen => {
            let k = 2.0 * std::f64::consts::PI / l;
            Ok(RealField::from_fn(*grid, |x, y| {
                T::of(-2.0 * a * (k * x.as_f64()).sin() * (k * y.as_f64()).sin())
            }))
        }
        _ => {
            let (_, cy) = center_of(spec, grid);
            mirrored_pair(grid, spec, cy, |dx, dy| a * profile(spec, (dx * dx + dy * dy).sqrt()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// Moves the whole pair by `δ` along `y`.
    Translate,
    /// Adds `δ · A` times a mirrored pair of smooth bumps of radius `r/2`,
    /// placed (seeded) inside the positive patch.
    AmplitudeWiggle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub mode: PerturbationMode,
    pub delta: f64,
}

impl PerturbationSpec {
    pub fn new(mode: PerturbationMode, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta = {delta} must be ≥ 0")));
        }
        Ok(Self { mode, delta })
    }
}

/// The perturbed datum `ω̄₂`. Both modes keep `∫ω̄₂ = ∫ω̄₁ = 0` by
/// construction.
pub fn perturbed_data<T: Real>(
    spec: &InitialDataSpec,
    pert: &PerturbationSpec,
    grid: &Grid2D<T>,
) -> Result<RealField<T>> {
    match pert.mode {
        PerturbationMode::Translate => {
            let mut moved = spec.clone();
            let (cx, cy) = center_of(spec, grid);
            moved.center = Some([cx, cy + pert.delta]);
            generate_initial_data(&moved, grid)
        }
        PerturbationMode::AmplitudeWiggle => {
            let base = generate_initial_data(spec, grid)?;
            if !spec.is_compact() {
                return Err(Error::InvalidParameter(
                    "amplitude_wiggle needs compact pair data".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let rb = spec.radius / 2.0;
            let reach = spec.radius - rb;
            let (ox, oy) = loop {
                let (ox, oy) = (rng.gen_range(-reach..=reach), rng.gen_range(-reach..=reach));
                if ox * ox + oy * oy <= reach * reach {
                    break (ox, oy);
                }
            };
            let (_, cy) = center_of(spec, grid);
            let scale = pert.delta * spec.amplitude;
            let wiggle = mirrored_pair(grid, spec, cy, |dx, dy| {
                scale * smooth_bump(((dx - ox).powi(2) + (dy - oy).powi(2)) / (rb * rb))
            })?;
            base.add(&wiggle)
        }
    }
}

/// Trapezoid nodes for the radial mollifier integrals.
const MOLLIFIER_NODES: usize = 256;

/// Fourier transform `φ̂(ξ)` of the standard mollifier
/// `φ(x) ∝ exp(−1/(1 − |x|²))` on the unit disc, normalized to `φ̂(0) = 1`.
/// With `r = s³` the radial integrands are flat to high order at both ends,
/// so the trapezoid rule is accurate to round-off.
fn mollifier_transform(xi: f64) -> f64 {
    let h = 1.0 / MOLLIFIER_NODES as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..MOLLIFIER_NODES {
        let s = i as f64 * h;
        let r = s * s * s;
        let w = smooth_bump(r * r) * r * s * s;
        num += w * libm::j0(xi * r);
        den += w;
    }
    num / den
}

/// Convolution with the standard mollifier `φ_ε = ε⁻² φ(·/ε)` supported in
/// the disc of radius `ε`, applied through its Fourier multiplier.
pub fn mollify<T: Real>(f: &RealField<T>, width: T) -> RealField<T> {
    let grid = *f.grid();
    let k0 = grid.fundamental().as_f64();
    let eps = width.as_f64();
    let n = grid.n();
    let mut cache: HashMap<i64, T> = HashMap::new();
    let mut multiplier = Vec::with_capacity(grid.len());
    for q in 0..n {
        let b = grid.signed_freq(q);
        for p in 0..n {
            let a = grid.signed_freq(p);
            let key = a * a + b * b;
            let m = *cache
                .entry(key)
                .or_insert_with(|| T::of(mollifier_transform(eps * k0 * (key as f64).sqrt())));
            multiplier.push(m);
        }
    }
    let s = forward_raw(f).map_indexed(|p, q, c| c * multiplier[q * n + p]);
    inverse_raw(&s)
}

/// Zeroes samples with `|ω| < level` (amplitude-tail truncation).
pub fn truncate_tails<T: Real>(f: &RealField<T>, level: T) -> RealField<T> {
    f.map(|v| if v.abs() < level { T::zero() } else { v })
}
