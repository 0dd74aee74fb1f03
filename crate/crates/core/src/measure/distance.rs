use crate::density::{hermitian_eigenvalues, DensityMatrix2};

/// Trace distance `½ Tr|a − b|`.
pub fn trace_distance(a: &DensityMatrix2, b: &DensityMatrix2) -> f64 {
    let [lo, hi] = hermitian_eigenvalues(&a.sub(b));
    0.5 * (lo.abs() + hi.abs())
}
