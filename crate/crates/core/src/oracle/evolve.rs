//! Fixed-step classical Runge–Kutta integration of the full GKLS equation.
//!
//! The step never exceeds the grid spacing, `1/(50·ω_max)` with
//! `ω_max = max(|J|, ω₁, γ_I, γ_II, 1)`, or `tol^{1/4}/Ω` where `Ω` bounds
//! the generator's spectrum, so the RK4 truncation error per unit time
//! stays near `tol`. The trace is never renormalized.

use crate::error::{Error, Result};
use crate::params::TimeGrid;
use crate::C64;

use super::generator::Generator;
use super::state::DensityMatrixN;

pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-4;
const MAX_SUBSTEPS: f64 = 1e9;

/// Largest admissible RK4 step for this generator and tolerance.
pub fn step_cap(g: &Generator, tol: f64) -> f64 {
    let by_rate = 1.0 / (50.0 * g.params.max_rate());
    let bound = g.frequency_bound();
    let by_tol = if bound > 0.0 {
        tol.powf(0.25) / bound
    } else {
        f64::INFINITY
    };
    by_rate.min(by_tol)
}

struct Workspace {
    k1: DensityMatrixN,
    k2: DensityMatrixN,
    k3: DensityMatrixN,
    k4: DensityMatrixN,
    stage: DensityMatrixN,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Self {
            k1: DensityMatrixN::zeros(dim),
            k2: DensityMatrixN::zeros(dim),
            k3: DensityMatrixN::zeros(dim),
            k4: DensityMatrixN::zeros(dim),
            stage: DensityMatrixN::zeros(dim),
        }
    }
}

fn axpy_into(out: &mut DensityMatrixN, y: &DensityMatrixN, a: f64, k: &DensityMatrixN) {
    for ((o, y), k) in out.as_mut_slice().iter_mut().zip(y.as_slice()).zip(k.as_slice()) {
        *o = y + k * a;
    }
}

fn rk4_step(g: &Generator, rho: &mut DensityMatrixN, h: f64, ws: &mut Workspace) {
    g.apply(rho, &mut ws.k1);
    axpy_into(&mut ws.stage, rho, 0.5 * h, &ws.k1);
    g.apply(&ws.stage, &mut ws.k2);
    axpy_into(&mut ws.stage, rho, 0.5 * h, &ws.k2);
    g.apply(&ws.stage, &mut ws.k3);
    axpy_into(&mut ws.stage, rho, h, &ws.k3);
    g.apply(&ws.stage, &mut ws.k4);
    let w = h / 6.0;
    let data = rho.as_mut_slice();
    let (k1, k2, k3, k4) = (ws.k1.as_slice(), ws.k2.as_slice(), ws.k3.as_slice(), ws.k4.as_slice());
    for i in 0..data.len() {
        data[i] += (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * w;
    }
}

fn all_finite(rho: &DensityMatrixN) -> bool {
    rho.as_slice().iter().all(|x: &C64| x.re.is_finite() && x.im.is_finite())
}

/// Integrates from `rho0` at `grid.t_start`, calling `observe(k, t_k, ρ(t_k))`
/// at every grid point, including the first.
pub fn evolve_observe<F>(
    g: &Generator,
    rho0: &DensityMatrixN,
    grid: &TimeGrid,
    tol: f64,
    mut observe: F,
) -> Result<()>
where
    F: FnMut(usize, f64, &DensityMatrixN) -> Result<()>,
{
    if rho0.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: g.dim(),
            got: rho0.dim(),
        });
    }
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::InvalidParam(format!(
            "tol must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}"
        )));
    }
    let grid_dt = grid.dt();
    let substeps = (grid_dt / step_cap(g, tol)).ceil().max(1.0);
    let h = grid_dt / substeps;
    if substeps > MAX_SUBSTEPS || h <= f64::EPSILON * grid.t_end.max(1.0) {
        return Err(Error::Integration {
            t: grid.t_start,
            msg: format!("step size underflow (h = {h:e})"),
        });
    }
    let substeps = substeps as u64;

    let mut rho = rho0.clone();
    let mut ws = Workspace::new(g.dim());
    observe(0, grid.t_start, &rho)?;
    for k in 1..grid.samples {
        for _ in 0..substeps {
            rk4_step(g, &mut rho, h, &mut ws);
        }
        let t = grid.time(k);
        if !all_finite(&rho) {
            return Err(Error::Integration {
                t,
                msg: "non-finite density-matrix entries".into(),
            });
        }
        observe(k, t, &rho)?;
    }
    Ok(())
}

/// States at every grid point.
pub fn evolve(
    g: &Generator,
    rho0: &DensityMatrixN,
    grid: &TimeGrid,
    tol: f64,
) -> Result<Vec<DensityMatrixN>> {
    let mut states = Vec::with_capacity(grid.samples);
    evolve_observe(g, rho0, grid, tol, |_, _, rho| {
        states.push(rho.clone());
        Ok(())
    })?;
    Ok(states)
}
