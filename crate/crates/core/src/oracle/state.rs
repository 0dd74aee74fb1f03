use nalgebra::DMatrix;

use crate::density::DensityMatrix2;
use crate::error::{Error, Result};
use crate::C64;

use super::generator::bit_mask;

pub const HERMITIAN_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Dense density matrix of `n + 1` qubits, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixN {
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrixN {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits, `log₂ dim`.
    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: C64) {
        self.data[r * self.dim + c] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|k| self.get(k, k)).collect()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ_{rc} ρ_rc ρ_cr
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += self.get(r, c) * self.get(c, r);
            }
        }
        acc.re
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_dmatrix();
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the unit-trace, Hermiticity and positivity invariants.
    pub fn check(&self) -> Result<()> {
        let drift = (self.trace() - 1.0).norm();
        if drift > TRACE_TOL {
            return Err(Error::InvalidParam(format!("trace drift {drift:e}")));
        }
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidParam(format!("Hermiticity defect {defect:e}")));
        }
        let lo = self.min_eigenvalue();
        if lo < -POSITIVITY_TOL {
            return Err(Error::InvalidParam(format!("negative eigenvalue {lo:e}")));
        }
        Ok(())
    }

    /// Tensor product `a ⊗ b` with `a` on the most significant qubits.
    pub fn kron(a: &Self, b: &Self) -> Self {
        let dim = a.dim * b.dim;
        let mut out = Self::zeros(dim);
        for ar in 0..a.dim {
            for ac in 0..a.dim {
                let x = a.get(ar, ac);
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for br in 0..b.dim {
                    for bc in 0..b.dim {
                        out.set(ar * b.dim + br, ac * b.dim + bc, x * b.get(br, bc));
                    }
                }
            }
        }
        out
    }

    pub fn from_qubit(rho: &DensityMatrix2) -> Self {
        let mut out = Self::zeros(2);
        for r in 0..2 {
            for c in 0..2 {
                out.set(r, c, rho.get(r, c));
            }
        }
        out
    }

    /// Exchanges two qubits.
    pub fn swap_qubits(&self, a: usize, b: usize) -> Self {
        let qubits = self.qubits();
        let (ma, mb) = (bit_mask(qubits, a), bit_mask(qubits, b));
        let permute = |k: usize| {
            let (ba, bb) = (k & ma != 0, k & mb != 0);
            if ba == bb {
                k
            } else {
                k ^ ma ^ mb
            }
        };
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(permute(r), permute(c), self.get(r, c));
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `ρ_sys ⊗ (½·I)^{⊗n}` for an arbitrary central-qubit state.
pub fn initial_state_from(n: usize, rho_system: &DensityMatrix2) -> DensityMatrixN {
    let env_dim = 1usize << n;
    let weight = 1.0 / env_dim as f64;
    let dim = 2 * env_dim;
    let mut out = DensityMatrixN::zeros(dim);
    for a in 0..2 {
        for b in 0..2 {
            let x = rho_system.get(a, b) * weight;
            for e in 0..env_dim {
                out.set(a * env_dim + e, b * env_dim + e, x);
            }
        }
    }
    out
}

/// `½[[1, e^{iθ}], [e^{−iθ}, 1]] ⊗ (½·I)^{⊗n}`.
pub fn initial_state(n: usize, theta: f64) -> DensityMatrixN {
    initial_state_from(n, &DensityMatrix2::equatorial(theta, C64::new(1.0, 0.0)))
}

/// Reduced state of the central qubit, tracing out all `n` satellites.
pub fn partial_trace_env(rho: &DensityMatrixN, n: usize) -> Result<DensityMatrix2> {
    let expected = 2usize << n;
    if rho.dim() != expected {
        return Err(Error::Dimension {
            expected,
            got: rho.dim(),
        });
    }
    let env_dim = 1usize << n;
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = (0..env_dim)
                .map(|e| rho.get(a * env_dim + e, b * env_dim + e))
                .sum();
        }
    }
    Ok(DensityMatrix2::from_entries_unchecked(out))
}

/// Coherence factor `β` of `½[[1, e^{iθ}β], [·, 1]]`: `2e^{−iθ}(ρ_I)₀₁`.
pub fn extract_beta(rho_i: &DensityMatrix2, theta: f64) -> C64 {
    2.0 * C64::from_polar(1.0, -theta) * rho_i.get(0, 1)
}
