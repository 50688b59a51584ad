//! Backward characteristics of recorded velocity histories: the Lagrangian
//! flow `X(0, t, x)`, the transport representation `ω(t, x) = ω̄(X(0, t, x))`
//! and area preservation.

mod history;
mod trace;

pub use history::{HistoryRecorder, VelocityHistory};
pub use trace::{
    backward_flow, check_lagrangian_representation, incompressibility_check, FlowPoint,
    FlowSample, EDGE_SUBDIVISIONS,
};
