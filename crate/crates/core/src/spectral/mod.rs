//! Periodic grids, real and spectral fields, transforms and dealiasing.

mod field;
mod grid;
pub mod io;
mod transform;

pub use field::{RealField, SpectralField, VectorField};
pub use grid::Grid2D;
pub use transform::{dealias, forward_transform, inverse_transform, spectral_derivative, Axis};

pub(crate) use transform::{forward_raw, inverse_raw};
