//! Phase relaxation of a central qubit coupled to `n` identical satellite
//! qubits in a star topology, with a tunable transverse drive on the
//! satellites and symmetric flip-flop noise on every qubit.
//!
//! The crate provides
//!
//! - [`propagator`]: the closed-form reduced dynamics (`b₀(t)`, `β_n(t)`,
//!   reduced state of the central qubit) built on the spectral
//!   decomposition in [`spectrum`];
//! - [`oracle`]: a brute-force dense integrator of the full `(n+1)`-qubit
//!   GKLS equation used as ground truth;
//! - [`measure`]: trace distance, backflow intervals and the BLP
//!   non-Markovianity measure, plus smoothing and drive-inhomogeneity
//!   averaging;
//! - [`cli`]: the `nmrelax` command-line front end.

pub mod cli;
pub mod config;
pub mod density;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod params;
pub mod propagator;
pub mod spectrum;

pub use density::DensityMatrix2;
pub use error::{Error, Result};
pub use params::{ModelParams, TimeGrid, Trajectory};
pub use propagator::Propagator;
pub use spectrum::{cubic_spectrum, Method, Propagation, SpectralData};

pub use num_complex::Complex64 as C64;
