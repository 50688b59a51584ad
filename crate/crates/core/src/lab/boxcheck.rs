//! Sensitivity of compactly supported runs to the periodic box size.

use serde::{Deserialize, Serialize};

use super::data::{generate_initial_data, InitialDataSpec};
use crate::dynamics::{Evolution, SolverConfig};
use crate::error::Result;
use crate::norms::{lp_norm, Lp};
use crate::spectral::{Grid2D, RealField};

/// Contract: discrepancy at most this fraction of `‖ω̄‖_{L²}`.
pub const BOX_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCheck {
    /// `‖ω_L(T) − ω_{2L}(T)‖_{L²}` over the small box.
    pub discrepancy: f64,
    /// `‖ω̄‖_{L²}`.
    pub reference_l2: f64,
    pub box_length: f64,
    pub n: usize,
}

impl BoxCheck {
    pub fn relative(&self) -> f64 {
        if self.reference_l2 > 0.0 {
            self.discrepancy / self.reference_l2
        } else {
            0.0
        }
    }

    pub fn passed(&self) -> bool {
        self.discrepancy <= BOX_TOLERANCE * self.reference_l2
    }
}

/// Places `small` in the middle of a box twice as large at the same spacing.
pub fn embed_centered(small: &RealField<f64>) -> Result<RealField<f64>> {
    let g = small.grid();
    let n = g.n();
    let big = Grid2D::new(2 * n, 2.0 * g.box_length())?;
    let off = n / 2;
    Ok(RealField::from_index_fn(big, |i, j| {
        if (off..off + n).contains(&i) && (off..off + n).contains(&j) {
            small.get(i - off, j - off)
        } else {
            0.0
        }
    }))
}

/// The window of `big` that [`embed_centered`] filled.
pub fn central_window(big: &RealField<f64>) -> Result<RealField<f64>> {
    let g = big.grid();
    let n = g.n() / 2;
    let small = Grid2D::new(n, g.box_length() / 2.0)?;
    let off = n / 2;
    Ok(RealField::from_index_fn(small, |i, j| big.get(i + off, j + off)))
}

/// Runs `spec` in the box of `grid` and in the doubled box, and compares the
/// solutions at `config.t_end` over the small box.
pub fn box_doubling_check(spec: &InitialDataSpec, grid: &Grid2D<f64>, config: &SolverConfig<f64>) -> Result<BoxCheck> {
    let omega0 = generate_initial_data(spec, grid)?;
    let mut small = Evolution::new(&omega0, *config)?;
    let mut big = Evolution::new(&embed_centered(&omega0)?, *config)?;
    small.advance_to(config.t_end, |_| {})?;
    big.advance_to(config.t_end, |_| {})?;
    let window = central_window(big.state().omega())?;
    Ok(BoxCheck {
        discrepancy: lp_norm(&small.state().omega().sub(&window)?, Lp::Two),
        reference_l2: lp_norm(&omega0, Lp::Two),
        box_length: grid.box_length(),
        n: grid.n(),
    })
}
