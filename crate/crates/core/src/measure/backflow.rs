//! Backflow intervals and the BLP measure restricted to equatorial pairs.
//!
//! For the antipodal pair `(θ, θ + π)` the trace distance equals `|β_n(t)|`,
//! so the measure is the total rise of `|β_n|`: the sum over the maximal
//! rising intervals of `|β_n(end)| − |β_n(start)|`. The sum telescopes
//! exactly over each monotone segment; nothing is integrated numerically.

use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeGrid, Trajectory};
use crate::propagator::Propagator;

use super::distance::trace_distance;

/// Bisection stops once the bracket is narrower than this (seconds).
pub const DEFAULT_REFINE_TOL: f64 = 1e-11;
/// Samples on `[0, 50] s`, the long window.
pub const LONG_WINDOW_SAMPLES: usize = 100_000;
/// Samples on `[0, 0.2] s`, the truncated window.
pub const SHORT_WINDOW_SAMPLES: usize = 20_000;
pub const LONG_WINDOW: (f64, f64) = (0.0, 50.0);
pub const SHORT_WINDOW: (f64, f64) = (0.0, 0.2);

/// A maximal interval on which the distance rises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackflowInterval {
    pub start: f64,
    pub end: f64,
    /// Increase of the distance across the interval.
    pub gain: f64,
}

/// Sorted, disjoint rising intervals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OmegaPlus {
    pub intervals: Vec<BackflowInterval>,
}

impl OmegaPlus {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_gain(&self) -> f64 {
        self.intervals.iter().fold(0.0, |acc, i| acc + i.gain)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    /// Value of the measure, `≥ 0`.
    pub value: f64,
    pub omega_plus: OmegaPlus,
    pub window: (f64, f64),
    pub grid_samples: usize,
}

/// A distance signal known in closed form, with its time derivative.
pub trait SmoothSignal {
    fn value(&self, t: f64) -> f64;
    fn rate(&self, t: f64) -> f64;
}

/// `|β_n(t)|` from the closed-form propagator.
impl SmoothSignal for Propagator {
    fn value(&self, t: f64) -> f64 {
        self.beta(t).norm()
    }

    fn rate(&self, t: f64) -> f64 {
        self.abs_beta_rate(t)
    }
}

/// Trace distance between the reduced states grown from `rho_I(0, θ₁)` and
/// `rho_I(0, θ₂)`, evaluated from the two density matrices.
pub struct PairDistance<'a> {
    pub propagator: &'a Propagator,
    pub theta1: f64,
    pub theta2: f64,
}

impl SmoothSignal for PairDistance<'_> {
    fn value(&self, t: f64) -> f64 {
        trace_distance(
            &self.propagator.rho_i(self.theta1, t),
            &self.propagator.rho_i(self.theta2, t),
        )
    }

    fn rate(&self, t: f64) -> f64 {
        (0.5 * (self.theta1 - self.theta2)).sin().abs() * self.propagator.abs_beta_rate(t)
    }
}

/// Boundary refinement by bisection on the sign of the analytic rate.
#[derive(Clone, Copy)]
pub struct Refinement<'a> {
    pub signal: &'a dyn SmoothSignal,
    pub tol: f64,
}

impl Refinement<'_> {
    /// Root of the rate in `[lo, hi]` where it goes from `sign(lo)` to the
    /// opposite sign, or `None` without a sign change.
    fn bisect(&self, mut lo: f64, mut hi: f64, rising_after: bool) -> Option<f64> {
        let wanted_left = |r: f64| if rising_after { r <= 0.0 } else { r >= 0.0 };
        let r_lo = self.signal.rate(lo);
        let r_hi = self.signal.rate(hi);
        if !(wanted_left(r_lo) && !wanted_left(r_hi)) {
            return None;
        }
        while hi - lo > self.tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if wanted_left(self.signal.rate(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Pick the better extremum of the two bracket ends.
        let (v_lo, v_hi) = (self.signal.value(lo), self.signal.value(hi));
        Some(match (rising_after, v_lo <= v_hi) {
            (true, true) | (false, false) => lo,
            _ => hi,
        })
    }
}

/// Maximal intervals on which the sampled distance strictly rises.
///
/// Boundaries sit on grid points unless `refine` is given, in which case each
/// interior boundary is moved to the extremum of the smooth signal within the
/// two neighbouring grid cells, and gains use the signal's values there.
pub fn omega_plus(times: &[f64], values: &[f64], refine: Option<Refinement<'_>>) -> Result<OmegaPlus> {
    if times.len() != values.len() {
        return Err(Error::Measure("times and values differ in length".into()));
    }
    if times.len() < 3 {
        return Err(Error::Measure(format!(
            "need at least 3 samples, got {}",
            times.len()
        )));
    }
    let last = times.len() - 1;
    let mut intervals: Vec<BackflowInterval> = Vec::new();
    let mut prev_end_value = 0.0;
    let mut k = 0;
    while k < last {
        if values[k + 1] <= values[k] {
            k += 1;
            continue;
        }
        let s = k;
        while k < last && values[k + 1] > values[k] {
            k += 1;
        }
        let e = k;

        let (mut start, mut start_value) = (times[s], values[s]);
        let (mut end, mut end_value) = (times[e], values[e]);
        if let Some(r) = refine {
            if s > 0 {
                if let Some(t) = r.bisect(times[s - 1], times[s + 1], true) {
                    start = t;
                    start_value = r.signal.value(t);
                }
            }
            if e < last {
                if let Some(t) = r.bisect(times[e - 1], times[e + 1], false) {
                    end = t;
                    end_value = r.signal.value(t);
                }
            }
        }
        if let Some(prev) = intervals.last() {
            if start < prev.end {
                start = prev.end;
                start_value = prev_end_value;
            }
        }
        if end > start {
            intervals.push(BackflowInterval {
                start,
                end,
                gain: (end_value - start_value).max(0.0),
            });
            prev_end_value = end_value;
        }
    }
    Ok(OmegaPlus { intervals })
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::Measure(format!("empty window [{lo}, {hi}]")));
    }
    Ok(())
}

fn lerp(t0: f64, v0: f64, t1: f64, v1: f64, t: f64) -> f64 {
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Measure of sampled data at grid resolution. Window edges that fall
/// between samples are linearly interpolated.
pub fn blp_measure(traj: &Trajectory, window: (f64, f64)) -> Result<MeasureResult> {
    check_window(window)?;
    let times = traj.times();
    let mags = traj.magnitudes();
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return Err(Error::Measure("empty trajectory".into()));
    };
    let slack = 1e-12 * (last - first).abs().max(1.0);
    let (lo, hi) = window;
    if lo < first - slack || hi > last + slack {
        return Err(Error::Measure(format!(
            "window [{lo}, {hi}] outside data support [{first}, {last}]"
        )));
    }
    let lo = lo.max(first);
    let hi = hi.min(last);

    let mut ts = Vec::new();
    let mut vs = Vec::new();
    let inside = times.partition_point(|&t| t < lo);
    if inside > 0 && times[inside] > lo {
        ts.push(lo);
        vs.push(lerp(times[inside - 1], mags[inside - 1], times[inside], mags[inside], lo));
    }
    let mut k = inside;
    while k < times.len() && times[k] <= hi {
        ts.push(times[k]);
        vs.push(mags[k]);
        k += 1;
    }
    if k < times.len() && ts.last().is_some_and(|&t| t < hi) {
        ts.push(hi);
        vs.push(lerp(times[k - 1], mags[k - 1], times[k], mags[k], hi));
    }
    let omega_plus = omega_plus(&ts, &vs, None)?;
    Ok(MeasureResult {
        value: omega_plus.total_gain(),
        omega_plus,
        window: (lo, hi),
        grid_samples: ts.len(),
    })
}

/// Measure of a smooth signal sampled on `samples` points of `window`, with
/// bisection-refined interval boundaries.
pub fn blp_measure_smooth(
    signal: &dyn SmoothSignal,
    window: (f64, f64),
    samples: usize,
    refine_tol: f64,
) -> Result<MeasureResult> {
    check_window(window)?;
    let grid = TimeGrid::new(window.0, window.1, samples).map_err(|e| Error::Measure(e.to_string()))?;
    let times = grid.times();
    let values: Vec<f64> = times.iter().map(|&t| signal.value(t)).collect();
    let omega_plus = omega_plus(
        &times,
        &values,
        Some(Refinement {
            signal,
            tol: refine_tol,
        }),
    )?;
    Ok(MeasureResult {
        value: omega_plus.total_gain(),
        omega_plus,
        window,
        grid_samples: samples,
    })
}

/// Measure of `|β_n|` from the closed-form propagator.
pub fn blp_measure_analytic(p: &ModelParams, window: (f64, f64), samples: usize) -> Result<MeasureResult> {
    let prop = Propagator::new(p)?;
    blp_measure_smooth(&prop, window, samples, DEFAULT_REFINE_TOL)
}

/// Same measure, evaluated from the trace distance of the antipodal pair
/// `(θ, θ + π)` of reduced density matrices.
pub fn blp_measure_antipodal(
    p: &ModelParams,
    theta: f64,
    window: (f64, f64),
    samples: usize,
) -> Result<MeasureResult> {
    let prop = Propagator::new(p)?;
    let pair = PairDistance {
        propagator: &prop,
        theta1: theta,
        theta2: theta + std::f64::consts::PI,
    };
    blp_measure_smooth(&pair, window, samples, DEFAULT_REFINE_TOL)
}
