//! Distinguishability of reduced states and the BLP non-Markovianity measure.

pub mod backflow;
pub mod distance;
pub mod ensemble;
pub mod ingest;
pub mod smoothing;

pub use backflow::{
    blp_measure, blp_measure_analytic, blp_measure_antipodal, blp_measure_smooth, omega_plus,
    BackflowInterval, MeasureResult, OmegaPlus, PairDistance, Refinement, SmoothSignal,
    DEFAULT_REFINE_TOL, LONG_WINDOW, LONG_WINDOW_SAMPLES, SHORT_WINDOW, SHORT_WINDOW_SAMPLES,
};
pub use distance::trace_distance;
pub use ensemble::{ensemble_beta, gauss_hermite, DEFAULT_QUAD_POINTS};
pub use ingest::{load_trajectory, read_trajectory};
pub use smoothing::moving_average;
