use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HolderExponent;
use crate::scalar::Real;
use crate::spectral::RealField;

/// Offsets with `max(|Δi|, |Δj|)` up to this bound are sampled exhaustively.
pub const NEAR_OFFSET: i64 = 8;
/// Random far offsets drawn per grid point.
pub const FAR_SAMPLES: usize = 64;
const SEED: u64 = 0x486f_6c64_6572;

/// Grid estimate of the Hölder seminorm
/// `max |f(x) − f(y)| / dist(x, y)^α` over pairs with `0 < dist ≤ L/4`.
///
/// All offsets in the `±8` neighbourhood are visited, plus 64 random longer
/// offsets per point (fixed seed per row, so the result is deterministic).
/// The value is a lower bound of the full all-pairs grid seminorm.
pub fn holder_seminorm<T: Real>(f: &RealField<T>, alpha: HolderExponent<T>) -> T {
    let grid = *f.grid();
    let n = grid.n() as i64;
    let h = grid.spacing();
    let a = alpha.value();
    let r0 = grid.box_length() / T::of(4.0);
    // radius in cells, compared in exact integer arithmetic
    let r0_cells = n / 4;
    let within = |di: i64, dj: i64| di * di + dj * dj <= r0_cells * r0_cells;
    let weight = |di: i64, dj: i64| {
        let d = h * T::of(((di * di + dj * dj) as f64).sqrt());
        T::one() / d.powf(a)
    };
    debug_assert!(r0 > T::zero());

    // half-plane of near offsets; |f(x) − f(y)| is symmetric
    let mut near = Vec::new();
    for dj in 0..=NEAR_OFFSET {
        for di in -NEAR_OFFSET..=NEAR_OFFSET {
            if (dj == 0 && di <= 0) || !within(di, dj) {
                continue;
            }
            near.push((di, dj, weight(di, dj)));
        }
    }
    let far_possible = r0_cells > NEAR_OFFSET;

    let idx = |i: i64, j: i64| grid.index(i.rem_euclid(n) as usize, j.rem_euclid(n) as usize);
    let vals = f.values();
    let mut best = T::zero();
    for j in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ (j as u64).wrapping_mul(0x9E37_79B9));
        for i in 0..n {
            let v = vals[idx(i, j)];
            for &(di, dj, w) in &near {
                let q = (v - vals[idx(i + di, j + dj)]).abs() * w;
                if q > best {
                    best = q;
                }
            }
            if !far_possible {
                continue;
            }
            let mut drawn = 0;
            while drawn < FAR_SAMPLES {
                let di = rng.gen_range(-r0_cells..=r0_cells);
                let dj = rng.gen_range(-r0_cells..=r0_cells);
                if di.abs().max(dj.abs()) <= NEAR_OFFSET || !within(di, dj) {
                    continue;
                }
                drawn += 1;
                let q = (v - vals[idx(i + di, j + dj)]).abs() * weight(di, dj);
                if q > best {
                    best = q;
                }
            }
        }
    }
    best
}
