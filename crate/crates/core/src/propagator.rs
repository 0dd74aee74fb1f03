//! Closed-form reduced dynamics of the central qubit.
//!
//! Each satellite contributes the same factor `b₀(t)`, so the coherence of
//! the central qubit is `β_n(t) = e^{−γ_I t/2} b₀(t)ⁿ` and its reduced state
//! starting from an equatorial state with phase `θ` is
//! `½[[1, e^{iθ}β_n], [e^{−iθ}β_n*, 1]]`.

use crate::density::DensityMatrix2;
use crate::error::Result;
use crate::linalg::Vec3;
use crate::params::{ModelParams, TimeGrid, Trajectory};
use crate::spectrum::{cubic_spectrum, SpectralData};
use crate::C64;

/// Spectral data cached for one parameter set; every evaluation is a pure
/// function of `t`.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectral: SpectralData,
}

impl Propagator {
    pub fn new(p: &ModelParams) -> Result<Self> {
        Ok(Self {
            spectral: cubic_spectrum(p)?,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.spectral.params
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    pub fn bvec(&self, t: f64) -> Vec3 {
        self.spectral.bvec(t)
    }

    pub fn b0(&self, t: f64) -> C64 {
        self.spectral.b0(t)
    }

    fn markov_factor(&self, t: f64) -> f64 {
        (-0.5 * self.params().gamma_i * t).exp()
    }

    /// `β_n(t) = e^{−γ_I t/2} b₀(t)ⁿ`.
    pub fn beta(&self, t: f64) -> C64 {
        self.markov_factor(t) * self.b0(t).powu(self.params().n as u32)
    }

    pub fn beta_rate(&self, t: f64) -> C64 {
        let p = self.params();
        let n = p.n as u32;
        let b0 = self.b0(t);
        let b0_rate = self.spectral.b0_rate(t);
        let power = b0.powu(n);
        let power_rate = b0.powu(n - 1) * b0_rate * n as f64;
        self.markov_factor(t) * (power_rate - 0.5 * p.gamma_i * power)
    }

    /// `d|β_n|/dt`; zero where `β_n` vanishes.
    pub fn abs_beta_rate(&self, t: f64) -> f64 {
        let beta = self.beta(t);
        let norm = beta.norm();
        if norm == 0.0 {
            0.0
        } else {
            (beta.conj() * self.beta_rate(t)).re / norm
        }
    }

    pub fn rho_i(&self, theta: f64, t: f64) -> DensityMatrix2 {
        DensityMatrix2::equatorial(theta, self.beta(t))
    }

    /// `β_n` sampled on `grid`.
    pub fn beta_trajectory(&self, grid: &TimeGrid) -> Trajectory {
        Trajectory::from_grid(grid, format!("beta_{}", self.params().n), |t| self.beta(t))
    }

    pub fn b0_trajectory(&self, grid: &TimeGrid) -> Trajectory {
        Trajectory::from_grid(grid, "b0", |t| self.b0(t))
    }
}

pub fn b0(p: &ModelParams, t: f64) -> Result<C64> {
    Ok(Propagator::new(p)?.b0(t))
}

pub fn beta_n(p: &ModelParams, t: f64) -> Result<C64> {
    Ok(Propagator::new(p)?.beta(t))
}

pub fn bvec(p: &ModelParams, t: f64) -> Result<Vec3> {
    Ok(Propagator::new(p)?.bvec(t))
}

pub fn rho_i(p: &ModelParams, theta: f64, t: f64) -> Result<DensityMatrix2> {
    Ok(Propagator::new(p)?.rho_i(theta, t))
}
