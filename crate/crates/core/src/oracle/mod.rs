//! Brute-force dense integration of the full `(1+n)`-qubit GKLS equation.
//!
//! This is the ground truth for [`crate::propagator`]: nothing here uses the
//! block structure or the product form of the reduced dynamics.

pub mod evolve;
pub mod generator;
pub mod state;

use std::io::Write;

pub use evolve::{evolve, evolve_observe};
pub use generator::{build_star_generator, Flip, Generator, Hamiltonian, Jump};
pub use state::{extract_beta, initial_state, initial_state_from, partial_trace_env, DensityMatrixN};

use crate::error::Result;
use crate::params::{ModelParams, TimeGrid, Trajectory};
use crate::C64;

/// One grid point of an oracle run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    pub beta: C64,
    pub trace_defect: f64,
    pub hermiticity_defect: f64,
}

/// Result of integrating from an equatorial initial state.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub theta: f64,
    pub samples: Vec<OracleSample>,
    /// Smallest eigenvalue seen at the positivity checkpoints.
    pub min_eigenvalue: f64,
    /// Largest deviation of the full diagonal from its initial value.
    pub max_diagonal_drift: f64,
    pub final_state: DensityMatrixN,
}

impl OracleRun {
    pub fn beta_trajectory(&self) -> Trajectory {
        let times = self.samples.iter().map(|s| s.t).collect();
        let values = self.samples.iter().map(|s| s.beta).collect();
        Trajectory::new(times, values, "beta_oracle").expect("grid times are increasing")
    }

    pub fn max_trace_defect(&self) -> f64 {
        self.samples.iter().map(|s| s.trace_defect).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.samples.iter().map(|s| s.hermiticity_defect).fold(0.0, f64::max)
    }

    /// Diagnostics CSV: `t,re_beta,im_beta,trace_defect,hermiticity_defect`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re_beta,im_beta,trace_defect,hermiticity_defect")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{:e},{:e}",
                s.t, s.beta.re, s.beta.im, s.trace_defect, s.hermiticity_defect
            )?;
        }
        Ok(())
    }
}

/// Integrates `initial_state(n, θ)` over `grid`, extracting `β` at every
/// grid point and checking positivity at `checkpoints` evenly spaced points.
pub fn run_equatorial(
    p: &ModelParams,
    theta: f64,
    grid: &TimeGrid,
    tol: f64,
    checkpoints: usize,
) -> Result<OracleRun> {
    let g = build_star_generator(p)?;
    let rho0 = initial_state(p.n, theta);
    let diag0 = rho0.diagonal();
    let every = (grid.samples / checkpoints.max(1)).max(1);
    let mut samples = Vec::with_capacity(grid.samples);
    let mut min_eigenvalue = f64::INFINITY;
    let mut max_diagonal_drift = 0.0f64;
    let mut final_state = rho0.clone();
    evolve_observe(&g, &rho0, grid, tol, |k, t, rho| {
        let reduced = partial_trace_env(rho, p.n)?;
        samples.push(OracleSample {
            t,
            beta: extract_beta(&reduced, theta),
            trace_defect: (rho.trace() - 1.0).norm(),
            hermiticity_defect: rho.hermiticity_defect(),
        });
        let drift = rho
            .diagonal()
            .iter()
            .zip(&diag0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_diagonal_drift = max_diagonal_drift.max(drift);
        if k % every == 0 || k + 1 == grid.samples {
            min_eigenvalue = min_eigenvalue.min(rho.min_eigenvalue());
        }
        if k + 1 == grid.samples {
            final_state = rho.clone();
        }
        Ok(())
    })?;
    Ok(OracleRun {
        theta,
        samples,
        min_eigenvalue,
        max_diagonal_drift,
        final_state,
    })
}
