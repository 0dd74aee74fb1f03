//! Domain value types shared by every module: physical parameters, uniform
//! time grids and sampled complex signals.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::C64;

/// Largest satellite count the dense oracle accepts (2¹³-dimensional state).
pub const ORACLE_MAX_SATELLITES: usize = 12;

/// Physical rates of the star model. All angular quantities are in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Flip-flop rate of the central qubit.
    pub gamma_i: f64,
    /// Flip-flop rate shared by every satellite qubit.
    pub gamma_ii: f64,
    /// Central-satellite `σ_z σ_z` coupling.
    pub j: f64,
    /// Transverse drive amplitude on the satellites.
    pub omega1: f64,
    /// Number of satellite qubits.
    pub n: usize,
}

impl ModelParams {
    pub fn new(gamma_i: f64, gamma_ii: f64, j: f64, omega1: f64, n: usize) -> Result<Self> {
        Self {
            gamma_i,
            gamma_ii,
            j,
            omega1,
            n,
        }
        .validate()
    }

    /// Rates measured for tetramethylsilane (²⁹Si centre, twelve ¹H
    /// satellites): `(γ_I, γ_II, J) = (0.41, 0.20, 2π·6.6)` rad/s.
    pub fn tms(omega1: f64, n: usize) -> Result<Self> {
        Self::new(0.41, 0.20, TAU * 6.6, omega1, n)
    }

    /// Checks every invariant and returns the parameters unchanged.
    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("gamma_I", self.gamma_i, true),
            ("gamma_II", self.gamma_ii, true),
            ("J", self.j, false),
            ("omega1", self.omega1, true),
        ];
        for (name, value, non_negative) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be finite, got {value}")));
            }
            if non_negative && value < 0.0 {
                return Err(Error::InvalidParam(format!("{name} must be ≥ 0, got {value}")));
            }
        }
        if self.n < 1 {
            return Err(Error::InvalidParam("n must be ≥ 1".into()));
        }
        Ok(self)
    }

    pub fn with_omega1(self, omega1: f64) -> Result<Self> {
        Self { omega1, ..self }.validate()
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        Self { n, ..self }.validate()
    }

    pub fn with_j(self, j: f64) -> Result<Self> {
        Self { j, ..self }.validate()
    }

    /// Fastest rate in the model, floored at 1 rad/s.
    pub fn max_rate(&self) -> f64 {
        [self.j.abs(), self.omega1, self.gamma_i, self.gamma_ii, 1.0]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Uniform sampling of `[t_start, t_end]` with `samples` points, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::InvalidParam("time grid bounds must be finite".into()));
        }
        if t_start < 0.0 {
            return Err(Error::InvalidParam(format!("t_start must be ≥ 0, got {t_start}")));
        }
        if t_end <= t_start {
            return Err(Error::InvalidParam(format!(
                "t_end must exceed t_start, got [{t_start}, {t_end}]"
            )));
        }
        if samples < 2 {
            return Err(Error::InvalidParam(format!("samples must be ≥ 2, got {samples}")));
        }
        Ok(Self {
            t_start,
            t_end,
            samples,
        })
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.samples - 1) as f64
    }

    /// Time of sample `k`; the last sample is exactly `t_end`.
    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.samples {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples).map(|k| self.time(k)).collect()
    }
}

/// A sampled complex signal on a strictly increasing time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<C64>,
    pub label: String,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if let Some(k) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidTrajectory(format!("non-finite time at index {k}")));
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTrajectory(format!(
                "times not strictly increasing at index {}: {} then {}",
                k + 1,
                times[k],
                times[k + 1]
            )));
        }
        Ok(Self {
            times,
            values,
            label: label.into(),
        })
    }

    /// Samples `f` on every point of `grid`.
    pub fn from_grid(grid: &TimeGrid, label: impl Into<String>, f: impl Fn(f64) -> C64) -> Self {
        let times = grid.times();
        let values = times.iter().map(|&t| f(t)).collect();
        Self {
            times,
            values,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn with_values(&self, values: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        Self::new(self.times.clone(), values, label)
    }
}
