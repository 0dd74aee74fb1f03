//! Single-qubit density matrices.

use crate::error::{Error, Result};
use crate::C64;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// A 2×2 density matrix in the `{|0⟩, |1⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    entries: [[C64; 2]; 2],
}

impl DensityMatrix2 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        let rho = Self { entries };
        if rho.hermiticity_defect() > HERMITIAN_TOL {
            return Err(Error::InvalidParam(format!(
                "state not Hermitian (defect {:e})",
                rho.hermiticity_defect()
            )));
        }
        if (rho.trace() - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidParam(format!("state trace {} ≠ 1", rho.trace())));
        }
        let [lo, _] = rho.eigenvalues();
        if lo < -POSITIVITY_TOL {
            return Err(Error::InvalidParam(format!("state has negative eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    /// Wraps entries without validation; used for reduced states whose
    /// defects are reported rather than rejected.
    pub fn from_entries_unchecked(entries: [[C64; 2]; 2]) -> Self {
        Self { entries }
    }

    /// `½·[[1, e^{iθ}β], [e^{−iθ}β*, 1]]`: equatorial state with coherence factor `β`.
    pub fn equatorial(theta: f64, beta: C64) -> Self {
        let off = C64::from_polar(1.0, theta) * beta * 0.5;
        Self {
            entries: [[C64::new(0.5, 0.0), off], [off.conj(), C64::new(0.5, 0.0)]],
        }
    }

    pub fn maximally_mixed() -> Self {
        Self::equatorial(0.0, C64::new(0.0, 0.0))
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r][c]
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let e = &self.entries;
        [
            e[0][0].im.abs(),
            e[1][1].im.abs(),
            (e[0][1] - e[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues(&self.entries)
    }

    /// Bloch vector `(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)`.
    pub fn bloch(&self) -> [f64; 3] {
        let e = &self.entries;
        let off = e[1][0];
        [2.0 * off.re, 2.0 * off.im, (e[0][0] - e[1][1]).re]
    }

    pub fn purity(&self) -> f64 {
        let e = &self.entries;
        (e[0][0] * e[0][0] + e[1][1] * e[1][1] + 2.0 * e[0][1] * e[1][0]).re
    }

    pub fn sub(&self, other: &Self) -> [[C64; 2]; 2] {
        let mut d = self.entries;
        for (r, row) in d.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x -= other.entries[r][c];
            }
        }
        d
    }
}

/// Eigenvalues of the Hermitian part of a 2×2 matrix, ascending.
pub(crate) fn hermitian_eigenvalues(m: &[[C64; 2]; 2]) -> [f64; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = 0.5 * (m[0][1] + m[1][0].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn equatorial_state_is_valid() {
        for &theta in &[0.0, 0.3, PI, -2.0] {
            let rho = DensityMatrix2::equatorial(theta, C64::new(1.0, 0.0));
            assert!(DensityMatrix2::new(*rho.entries()).is_ok());
            assert!((rho.purity() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn antipodal_bloch_vector() {
        let rho = DensityMatrix2::equatorial(PI, C64::new(1.0, 0.0));
        let [x, y, z] = rho.bloch();
        assert!((x + 1.0).abs() < 1e-15 && y.abs() < 1e-15 && z.abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_states() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        assert!(DensityMatrix2::new([[one, zero], [zero, one]]).is_err());
        assert!(DensityMatrix2::new([[C64::new(1.5, 0.0), zero], [zero, C64::new(-0.5, 0.0)]]).is_err());
        assert!(DensityMatrix2::new([[C64::new(0.5, 0.0), one], [zero, C64::new(0.5, 0.0)]]).is_err());
    }
}
