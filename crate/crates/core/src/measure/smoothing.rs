use crate::error::{Error, Result};
use crate::params::Trajectory;
use crate::C64;

/// Centered moving average over a time window of length `window_len`.
///
/// Each output sample averages every input sample within `window_len / 2`
/// of it; near the ends the window is truncated. A window shorter than the
/// smallest sample spacing leaves the data unchanged.
pub fn moving_average(traj: &Trajectory, window_len: f64) -> Result<Trajectory> {
    if !window_len.is_finite() || window_len <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "smoothing window must be positive, got {window_len}"
        )));
    }
    let times = traj.times();
    let values = traj.values();
    let label = format!("{}_smoothed", traj.label);
    let min_spacing = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if window_len < min_spacing {
        log::warn!("smoothing window {window_len} s is below the sample spacing; data left unchanged");
        return traj.with_values(values.to_vec(), label);
    }

    let half = 0.5 * window_len * (1.0 + 1e-9);
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(C64::new(0.0, 0.0));
    for v in values {
        let last = *prefix.last().expect("non-empty");
        prefix.push(last + v);
    }
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut out = Vec::with_capacity(values.len());
    for &t in times {
        while times[lo] < t - half {
            lo += 1;
        }
        while hi < times.len() && times[hi] <= t + half {
            hi += 1;
        }
        out.push((prefix[hi] - prefix[lo]) / (hi - lo) as f64);
    }
    traj.with_values(out, label)
}
