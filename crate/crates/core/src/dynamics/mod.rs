//! Biot-Savart inversion and the pseudospectral RK4 integrator for
//! `∂ₜω + u·∇ω = 0`.

mod biot_savart;
mod ledger;
mod solver;

pub use biot_savart::{biot_savart, curl, divergence, velocity_gradient_max};
pub use ledger::{ConservationLedger, LedgerRow, LEDGER_HEADER};
pub use solver::{
    evolve, evolve_observed, project_to_band, rhs, rhs_with, step, Evolution, SolverConfig,
    SolverState,
};
