//! Experiment harness: initial-data families, paired stability runs, rate
//! fits, approximation sequences and box-size controls.

mod boxcheck;
mod config;
mod data;
mod family;
mod fit;
mod pair;
mod refinement;

pub use boxcheck::{box_doubling_check, central_window, embed_centered, BoxCheck, BOX_TOLERANCE};
pub use config::{AnalysisSection, ExperimentConfig, GridSection, PerturbationSection, SolverSection};
pub use data::{
    generate_initial_data, mollify, perturbed_data, truncate_tails, DataKind, InitialDataSpec,
    PerturbationMode, PerturbationSpec,
};
pub use family::{run_family, FamilyReport};
pub use fit::{fit_rate, RateFit};
pub use pair::{
    run_pair, run_pair_fields, sample_times, ChainCheck, CheckFailure, PairOptions, PairRow,
    StabilityReport, PAIR_HEADER, SAMPLE_INTERVAL, TOL_CHAIN, TOL_DUALITY, TOL_ENERGY,
    TOL_INTERPOLATION, TOL_POINCARE,
};
pub use refinement::{
    theorem1_experiment, Approximation, RefinementReport, RefinementRow, FINAL_SLACK,
    MONOTONE_SLACK, REFINEMENT_HEADER,
};
