use std::f64::consts::PI;

use eulerlab::dynamics::{biot_savart, curl, divergence, evolve, project_to_band, SolverConfig};
use eulerlab::lab::{generate_initial_data, InitialDataSpec};
use eulerlab::norms::{lp_norm, Lp};
use eulerlab::spectral::{Grid2D, RealField};

fn dipole(n: usize) -> RealField<f64> {
    generate_initial_data(&InitialDataSpec::smooth_dipole(), &Grid2D::new(n, 2.0 * PI).unwrap()).unwrap()
}

fn rel(a: &RealField<f64>, b: &RealField<f64>) -> f64 {
    lp_norm(&a.sub(b).unwrap(), Lp::Two) / lp_norm(b, Lp::Two)
}

#[test]
fn biot_savart_identities() {
    // Nyquist-free input: the identities exclude the unpaired Nyquist modes
    let w = project_to_band(&dipole(64));
    let u = biot_savart(&w);
    assert!(divergence(&u).max_abs() <= 1e-12 * u.max_component());
    let back = curl(&u);
    let mean = w.mean();
    assert!(rel(&back, &w.map(|v| v - mean)) <= 1e-12);
}

#[test]
fn mirror_symmetry_is_preserved() {
    // the pair is odd under x ↦ L − x about the box centre; the flow keeps it
    let w = dipole(64);
    let (end, _) = evolve(&w, &SolverConfig::new(0.5)).unwrap();
    let mirrored = end.omega().reflect_x().map(|v| -v);
    assert!(rel(&mirrored, end.omega()) <= 1e-12);
}

#[test]
fn translation_equivariance() {
    let w = dipole(64);
    let config = SolverConfig::new(0.5);
    let (a, _) = evolve(&w.shift(5, -3), &config).unwrap();
    let (b, _) = evolve(&w, &config).unwrap();
    assert!(rel(a.omega(), &b.omega().shift(5, -3)) <= 1e-12);
}

#[test]
fn integral_is_conserved() {
    let w = dipole(64).map(|v| v + 0.3);
    let (end, ledger) = evolve(&w, &SolverConfig::new(1.0)).unwrap();
    let l = end.omega().grid().box_length();
    assert!((end.omega().integral() - w.integral()).abs() <= 1e-12 * l * l);
    let m0 = ledger.rows()[0].mean;
    assert!(ledger.rows().iter().all(|r| (r.mean - m0).abs() <= 1e-12));
}

/// Smooth data made of a few low modes, exactly resolved on every grid.
fn low_modes(n: usize) -> RealField<f64> {
    let g = Grid2D::new(n, 2.0 * PI).unwrap();
    RealField::from_fn(g, |x, y| {
        x.sin() * (2.0 * y).sin() + 0.6 * (2.0 * x + y + 0.3).cos() - 0.4 * (x - 3.0 * y).sin()
    })
}

#[test]
fn refinement_convergence() {
    // coarse-to-fine differences on the common coarse grid
    let config = SolverConfig::new(1.0);
    let sub = |f: &RealField<f64>, n: usize| {
        let k = f.grid().n() / n;
        RealField::from_index_fn(Grid2D::new(n, 2.0 * PI).unwrap(), |i, j| f.get(i * k, j * k))
    };
    let runs: Vec<RealField<f64>> = [32usize, 64, 128]
        .iter()
        .map(|&n| evolve(&low_modes(n), &config).unwrap().0.omega().clone())
        .collect();
    let d1 = lp_norm(&runs[0].sub(&sub(&runs[1], 32)).unwrap(), Lp::Two);
    let d2 = lp_norm(&runs[1].sub(&sub(&runs[2], 64)).unwrap(), Lp::Two);
    assert!(d1 >= 4.0 * d2, "{d1:e} {d2:e}");
}

#[test]
fn dipole_conserves_norms() {
    let (_, ledger) = evolve(&dipole(128), &SolverConfig::new(1.0)).unwrap();
    assert!(ledger.max_relative_drift(|r| r.l2, 1e-300) <= 1e-4);
    assert!(ledger.max_relative_drift(|r| r.energy, 1e-300) <= 1e-4);
}
