use eulerlab::spectral::{forward_transform, inverse_transform, Grid2D, RealField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random zero-mean field without Nyquist content.
pub fn random_field(g: Grid2D<f64>, seed: u64) -> RealField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = RealField::new(g, values).unwrap();
    let s = forward_transform(&f).unwrap().map_indexed(|p, q, c| {
        if (p == 0 && q == 0) || g.is_nyquist(p) || g.is_nyquist(q) {
            Default::default()
        } else {
            c
        }
    });
    inverse_transform(&s).unwrap()
}
