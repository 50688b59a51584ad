//! Pseudospectral laboratory for the 2D incompressible Euler equations in
//! vorticity form on a periodic box.
//!
//! Every numerical type is generic over the scalar ([`Real`]: `f32` or
//! `f64`); the aliases below fix `f64`, which is what the tolerances in the
//! experiment harness are calibrated for.

pub mod dynamics;
pub mod error;
pub mod flow_map;
pub mod lab;
pub mod norms;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = spectral::Grid2D<f64>;
pub type Field = spectral::RealField<f64>;
pub type Spectrum = spectral::SpectralField<f64>;
pub type Velocity = spectral::VectorField<f64>;
pub type State = dynamics::SolverState<f64>;
pub type Config = dynamics::SolverConfig<f64>;
pub type History = flow_map::VelocityHistory<f64>;

pub type Grid32 = spectral::Grid2D<f32>;
pub type Field32 = spectral::RealField<f32>;
pub type State32 = dynamics::SolverState<f32>;
