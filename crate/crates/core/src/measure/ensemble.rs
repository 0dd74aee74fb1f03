//! Coherence averaged over a Gaussian spread of drive amplitudes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeGrid, Trajectory};
use crate::propagator::Propagator;
use crate::C64;

pub const DEFAULT_QUAD_POINTS: usize = 21;

/// Nodes and weights of `n`-point Gauss–Hermite quadrature for the weight
/// `e^{−x²}`, by Newton iteration on the normalized Hermite recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `⟨β_n(t)⟩` over `ω₁' ~ N(ω₁, (spread·ω₁)²)`, folded to `|ω₁'|` since the
/// dynamics depend only on the drive magnitude.
///
/// Returns the unaveraged trajectory when `spread` or `ω₁` is zero.
pub fn ensemble_beta(
    p: &ModelParams,
    spread: f64,
    quad_points: usize,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    if !spread.is_finite() || spread < 0.0 {
        return Err(Error::InvalidParam(format!(
            "ensemble spread must be ≥ 0, got {spread}"
        )));
    }
    if quad_points == 0 {
        return Err(Error::InvalidParam("quadrature needs at least one point".into()));
    }
    let base = Propagator::new(p)?;
    if spread == 0.0 || p.omega1 == 0.0 {
        return Ok(base.beta_trajectory(grid));
    }
    let sigma = spread * p.omega1;
    let (nodes, weights) = gauss_hermite(quad_points);
    let total: f64 = weights.iter().sum();
    let members = nodes
        .iter()
        .map(|&x| {
            let omega = (p.omega1 + std::f64::consts::SQRT_2 * sigma * x).abs();
            p.with_omega1(omega).and_then(|q| Propagator::new(&q))
        })
        .collect::<Result<Vec<_>>>()?;
    let times = grid.times();
    let values = times
        .par_iter()
        .map(|&t| {
            members
                .iter()
                .zip(&weights)
                .map(|(m, &w)| m.beta(t) * w)
                .sum::<C64>()
                / total
        })
        .collect();
    Trajectory::new(times, values, "beta_ensemble")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn hermite_rule_integrates_moments() {
        for n in [1, 2, 5, 10, 21, 40] {
            let (x, w) = gauss_hermite(n);
            let sum: f64 = w.iter().sum();
            assert!((sum - PI.sqrt()).abs() < 1e-12, "n={n}");
            if n >= 2 {
                let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
                assert!((m2 - 0.5 * PI.sqrt()).abs() < 1e-12, "n={n}");
            }
            if n >= 3 {
                let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
                assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-11, "n={n}");
            }
            let m1: f64 = x.iter().zip(&w).map(|(x, w)| w * x).sum();
            assert!(m1.abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_expectation_of_cosine() {
        // E[cos(σ ξ)] = e^{−σ²/2} for ξ ~ N(0, 1)
        let (x, w) = gauss_hermite(21);
        let s = 1.3;
        let e: f64 = x
            .iter()
            .zip(&w)
            .map(|(x, w)| w * (std::f64::consts::SQRT_2 * s * x).cos())
            .sum::<f64>()
            / PI.sqrt();
        assert!((e - (-0.5 * s * s).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_spread_is_exact_passthrough() {
        let p = ModelParams::tms(TAU * 17.0, 12).unwrap();
        let grid = TimeGrid::new(0.0, 0.5, 501).unwrap();
        let plain = Propagator::new(&p).unwrap().beta_trajectory(&grid);
        let avg = ensemble_beta(&p, 0.0, DEFAULT_QUAD_POINTS, &grid).unwrap();
        assert_eq!(plain.values(), avg.values());
        let undriven = ModelParams::tms(0.0, 12).unwrap();
        let avg = ensemble_beta(&undriven, 3.0, DEFAULT_QUAD_POINTS, &grid).unwrap();
        assert_eq!(
            avg.values(),
            Propagator::new(&undriven).unwrap().beta_trajectory(&grid).values()
        );
    }

    #[test]
    fn ensemble_starts_fully_coherent_and_stays_bounded() {
        let p = ModelParams::tms(TAU * 17.0, 12).unwrap();
        let grid = TimeGrid::new(0.0, 2.0, 2001).unwrap();
        let avg = ensemble_beta(&p, 0.1, DEFAULT_QUAD_POINTS, &grid).unwrap();
        assert!((avg.values()[0] - 1.0).norm() < 1e-14);
        assert!(avg.magnitudes().iter().all(|&m| m <= 1.0 + 1e-12));
    }

    #[test]
    fn spread_washes_out_the_envelope() {
        let p = ModelParams::tms(TAU * 21.0, 12).unwrap();
        let grid = TimeGrid::new(0.0, 0.2, 2001).unwrap();
        let plain = Propagator::new(&p).unwrap().beta_trajectory(&grid);
        let avg = ensemble_beta(&p, 0.05, DEFAULT_QUAD_POINTS, &grid).unwrap();
        let tail = |m: &[f64]| m[1900..].iter().cloned().fold(0.0, f64::max);
        assert!(tail(&avg.magnitudes()) < tail(&plain.magnitudes()));
    }

    #[test]
    fn bad_arguments_rejected() {
        let p = ModelParams::tms(1.0, 1).unwrap();
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        assert!(ensemble_beta(&p, -1.0, 5, &grid).is_err());
        assert!(ensemble_beta(&p, 1.0, 0, &grid).is_err());
    }
}
