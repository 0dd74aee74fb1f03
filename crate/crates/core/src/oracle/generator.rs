//! GKLS generator of the star model on `n + 1` qubits.
//!
//! Qubit 0 is the central qubit and the most significant bit of the basis
//! index; satellite `i` (1 ≤ i ≤ n) sits at bit `n − i`. Spin up `|0⟩` has
//! `σ_z = +1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::{ModelParams, ORACLE_MAX_SATELLITES};
use crate::C64;

use super::state::DensityMatrixN;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flip {
    /// `σ₊ = |0⟩⟨1|`
    Raise,
    /// `σ₋ = |1⟩⟨0|`
    Lower,
}

/// Jump operator `σ±/2` on one qubit with rate `γ`, entering the
/// dissipator as `γ(2LρL† − {L†L, ρ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub qubit: usize,
    pub flip: Flip,
    pub rate: f64,
}

/// Hamiltonian `Σᵢ J σ_z⁽⁰⁾σ_z⁽ⁱ⁾/4 + ω₁σ_x⁽ⁱ⁾/2`, stored as its diagonal
/// (the `σ_z σ_z` part) and a list of single-qubit `σ_x` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub qubits: usize,
    pub diagonal: Vec<f64>,
    pub transverse: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub params: ModelParams,
    pub hamiltonian: Hamiltonian,
    pub jumps: Vec<Jump>,
}

pub(crate) fn bit_mask(qubits: usize, qubit: usize) -> usize {
    1 << (qubits - 1 - qubit)
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Dense matrix; intended for small systems.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut h = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (k, &e) in self.diagonal.iter().enumerate() {
            h[(k, k)] += e;
        }
        for &(q, amp) in &self.transverse {
            let m = bit_mask(self.qubits, q);
            for k in 0..dim {
                h[(k ^ m, k)] += amp;
            }
        }
        h
    }
}

/// Coupling part `J σ_z⁽⁰⁾σ_z⁽ⁱ⁾/4` and drive part `ω₁σ_x⁽ⁱ⁾/2` for one
/// satellite, as dense matrices on `n + 1` qubits.
pub fn satellite_terms(p: &ModelParams, satellite: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let qubits = p.n + 1;
    let coupling = Hamiltonian {
        qubits,
        diagonal: (0..1usize << qubits)
            .map(|k| 0.25 * p.j * zz_sign(qubits, k, satellite))
            .collect(),
        transverse: vec![],
    };
    let drive = Hamiltonian {
        qubits,
        diagonal: vec![0.0; 1 << qubits],
        transverse: vec![(satellite, 0.5 * p.omega1)],
    };
    (coupling.to_dense(), drive.to_dense())
}

fn zz_sign(qubits: usize, index: usize, satellite: usize) -> f64 {
    let centre = index & bit_mask(qubits, 0) != 0;
    let other = index & bit_mask(qubits, satellite) != 0;
    if centre == other {
        1.0
    } else {
        -1.0
    }
}

/// Generator of the full `(1+n)` dynamics.
pub fn build_star_generator(p: &ModelParams) -> Result<Generator> {
    let p = p.validate()?;
    if p.n > ORACLE_MAX_SATELLITES {
        return Err(Error::Capacity {
            n: p.n,
            max: ORACLE_MAX_SATELLITES,
        });
    }
    let qubits = p.n + 1;
    let diagonal = (0..1usize << qubits)
        .map(|k| (1..=p.n).map(|i| 0.25 * p.j * zz_sign(qubits, k, i)).sum())
        .collect();
    let transverse = if p.omega1 != 0.0 {
        (1..=p.n).map(|i| (i, 0.5 * p.omega1)).collect()
    } else {
        vec![]
    };
    let mut jumps = Vec::with_capacity(2 * qubits);
    for qubit in 0..qubits {
        let rate = if qubit == 0 { p.gamma_i } else { p.gamma_ii };
        for flip in [Flip::Raise, Flip::Lower] {
            jumps.push(Jump { qubit, flip, rate });
        }
    }
    Ok(Generator {
        params: p,
        hamiltonian: Hamiltonian {
            qubits,
            diagonal,
            transverse,
        },
        jumps,
    })
}

impl Generator {
    pub fn qubits(&self) -> usize {
        self.hamiltonian.qubits
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Upper bound on the magnitude of any eigenvalue of the generator:
    /// spread of the diagonal energies, twice the summed transverse
    /// amplitudes, plus every jump rate.
    pub fn frequency_bound(&self) -> f64 {
        let h = &self.hamiltonian;
        let (lo, hi) = h
            .diagonal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        let transverse: f64 = h.transverse.iter().map(|(_, a)| 2.0 * a.abs()).sum();
        let rates: f64 = self.jumps.iter().map(|j| j.rate).sum();
        (hi - lo) + transverse + rates
    }

    /// Writes `−i[H, ρ] + Σ_k γ_k(2L_kρL_k† − {L_k†L_k, ρ})` into `out`.
    pub fn apply(&self, rho: &DensityMatrixN, out: &mut DensityMatrixN) {
        let dim = self.dim();
        let qubits = self.qubits();
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        let minus_i = C64::new(0.0, -1.0);
        let diag = &self.hamiltonian.diagonal;

        for r in 0..dim {
            let row = r * dim;
            for c in 0..dim {
                dst[row + c] = minus_i * (diag[r] - diag[c]) * src[row + c];
            }
        }
        for &(q, amp) in &self.hamiltonian.transverse {
            let m = bit_mask(qubits, q);
            let coef = minus_i * amp;
            for r in 0..dim {
                let row = r * dim;
                let flipped_row = (r ^ m) * dim;
                for c in 0..dim {
                    // (Hρ − ρH)_{rc} restricted to the σ_x term
                    dst[row + c] += coef * (src[flipped_row + c] - src[row + (c ^ m)]);
                }
            }
        }
        for jump in &self.jumps {
            if jump.rate == 0.0 {
                continue;
            }
            let m = bit_mask(qubits, jump.qubit);
            // L = σ/2: 2LρL† = ½σρσ†, L†L = ¼P where P projects on the source level
            let source_set = matches!(jump.flip, Flip::Raise);
            let half = 0.5 * jump.rate;
            let quarter = 0.25 * jump.rate;
            for r in 0..dim {
                let row = r * dim;
                let r_src = (r & m != 0) == source_set;
                for c in 0..dim {
                    let c_src = (c & m != 0) == source_set;
                    let mut acc = C64::new(0.0, 0.0);
                    if !r_src && !c_src {
                        acc += half * src[(r ^ m) * dim + (c ^ m)];
                    }
                    let projected = (r_src as u8 + c_src as u8) as f64;
                    if projected != 0.0 {
                        acc -= quarter * projected * src[row + c];
                    }
                    dst[row + c] += acc;
                }
            }
        }
    }
}
