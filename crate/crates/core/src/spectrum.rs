//! Spectral decomposition of the reduced satellite generator
//!
//! ```text
//!        ⎡  0     0     −iJ  ⎤
//! M′ =   ⎢  0    −γ    −2ω₁  ⎥ ,     d(b₀, b_y, b_z)ᵀ/dt = ½ M′ (b₀, b_y, b_z)ᵀ
//!        ⎣ −iJ   2ω₁   −2γ   ⎦
//! ```
//!
//! with `γ = γ_II`. The characteristic polynomial is
//! `λ³ + 3γλ² + (2γ² + 4ω₁² + J²)λ + J²γ`; after the shift `λ = x − γ` it
//! becomes the depressed cubic `x³ + D x − 4γω₁² = 0` with
//! `D = J² − γ² + 4ω₁²`, solved by Cardano's formula when its discriminant
//! `108γ²ω₁⁴ + D³` is positive (one real root and a conjugate pair).
//!
//! Where the closed form is ill-conditioned (vanishing drive, coupling or
//! damping, or nearly coincident roots) the roots come from the companion
//! matrix instead, and coincident roots switch propagation to a matrix
//! exponential.

use nalgebra::Matrix3;

use crate::error::Result;
use crate::linalg::{self, Mat3, Vec3};
use crate::params::ModelParams;
use crate::C64;

/// Relative threshold for closed-form eligibility.
pub const CLOSED_FORM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    NumericFallback,
}

/// How `(b₀, b_y, b_z)(t)` is evaluated from the spectral data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// `Σ uᵢ vᵢ e^{λᵢ t/2}`.
    Modal,
    /// `exp(M′ t/2)·(1, 0, 0)ᵀ` by scaling and squaring.
    MatrixExponential,
    /// `J = 0`: the central qubit never sees the satellites, `b₀ ≡ 1`.
    Decoupled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub params: ModelParams,
    /// `M′ = 2Mᵀ`.
    pub generator: Mat3,
    pub lambda: [C64; 3],
    /// Expansion coefficients of the initial condition `(1, 0, 0)` in `vectors`.
    pub u: [C64; 3],
    pub vectors: [Vec3; 3],
    /// Cardano auxiliary `C`; complex when the discriminant is negative.
    pub c: C64,
    pub d: f64,
    pub method: Method,
    pub propagation: Propagation,
}

/// `M′ = 2Mᵀ` for the given parameters.
pub fn generator(p: &ModelParams) -> Mat3 {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let ij = C64::new(0.0, -p.j);
    let (g, w) = (p.gamma_ii, p.omega1);
    Mat3::new(
        z, z, ij,
        z, r(-g), r(-2.0 * w),
        ij, r(2.0 * w), r(-2.0 * g),
    )
}

/// `[a₂, a₁, a₀]` of the monic characteristic polynomial `λ³ + a₂λ² + a₁λ + a₀`.
pub fn characteristic_coefficients(p: &ModelParams) -> [f64; 3] {
    let (g, w, j) = (p.gamma_ii, p.omega1, p.j);
    [3.0 * g, 2.0 * g * g + 4.0 * w * w + j * j, j * j * g]
}

fn eval_cubic(a: &[f64; 3], x: C64) -> (C64, C64) {
    let value = ((x + a[0]) * x + a[1]) * x + a[2];
    let slope = (3.0 * x + 2.0 * a[0]) * x + a[1];
    (value, slope)
}

/// Roots of the characteristic polynomial from the eigenvalues of its real
/// companion matrix, polished by Newton steps. Ordered real-most first; a
/// conjugate pair is returned exactly conjugate with positive imaginary part
/// second.
pub fn companion_roots(p: &ModelParams) -> [C64; 3] {
    let a = characteristic_coefficients(p);
    let companion = Matrix3::new(
        -a[0], -a[1], -a[2],
        1.0, 0.0, 0.0,
        0.0, 1.0, 0.0,
    );
    let eig = companion.complex_eigenvalues();
    let mut roots = [eig[0], eig[1], eig[2]];
    for root in roots.iter_mut() {
        for _ in 0..4 {
            let (value, slope) = eval_cubic(&a, *root);
            if slope.norm() == 0.0 {
                break;
            }
            let next = *root - value / slope;
            if eval_cubic(&a, next).0.norm() < value.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(|x, y| x.im.abs().total_cmp(&y.im.abs()));
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let (r1, r2) = (roots[1], roots[2]);
    let paired = (r1.im + r2.im).abs() <= 1e-10 * scale
        && (r1.re - r2.re).abs() <= 1e-10 * scale
        && r1.im.abs() > 1e-10 * scale;
    if paired {
        let re = 0.5 * (r1.re + r2.re);
        let im = 0.5 * (r1.im.abs() + r2.im.abs());
        roots[0].im = 0.0;
        roots[1] = C64::new(re, im);
        roots[2] = C64::new(re, -im);
    }
    // The smallest real root loses relative accuracy to cancellation; Vieta
    // recovers it from the other two.
    let smallest = (0..3)
        .filter(|&k| roots[k].im == 0.0)
        .min_by(|&x, &y| roots[x].norm().total_cmp(&roots[y].norm()));
    if let Some(k) = smallest {
        let others = roots[(k + 1) % 3] * roots[(k + 2) % 3];
        if others.norm() > 0.0 && others.norm() >= roots[k].norm() {
            roots[k] = C64::new((-a[2] / others).re, 0.0);
        }
    }
    roots
}

fn min_separation(lambda: &[C64; 3]) -> f64 {
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| (lambda[a] - lambda[b]).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Spectral data of `M′`. Never fails for validated parameters.
pub fn cubic_spectrum(p: &ModelParams) -> Result<SpectralData> {
    let p = p.validate()?;
    let (g, w, j) = (p.gamma_ii, p.omega1, p.j);
    let d = j * j - g * g + 4.0 * w * w;
    let radicand = 108.0 * g * g * w.powi(4) + d.powi(3);
    let scale = [j.abs(), g, w, 1.0].into_iter().fold(0.0, f64::max);
    let eps = CLOSED_FORM_EPS * scale;

    if j != 0.0 && g > eps && w > eps && j.abs() > eps && radicand > CLOSED_FORM_EPS * scale.powi(6) {
        let closed = closed_form(&p, d, radicand);
        if min_separation(&closed.lambda) > eps {
            return Ok(closed);
        }
    }
    Ok(fallback(&p, d, radicand, eps))
}

fn closed_form(p: &ModelParams, d: f64, radicand: f64) -> SpectralData {
    let (g, w, j) = (p.gamma_ii, p.omega1, p.j);
    let sqrt3 = 3f64.sqrt();
    let c = (54.0 * g * w * w + 3.0 * sqrt3 * radicand.sqrt()).cbrt();
    // Cardano pair: U = C/3, V = −D/C, with UV = −D/3 and U³ + V³ = 4γω₁².
    let (big_u, big_v) = (c / 3.0, -d / c);
    let x1 = if d > 0.0 {
        4.0 * g * w * w / (big_u * big_u + d / 3.0 + big_v * big_v)
    } else {
        big_u + big_v
    };
    let l2 = C64::new(-g - 0.5 * x1, 0.5 * sqrt3 * (big_u - big_v));
    let l3 = l2.conj();
    // λ₁λ₂λ₃ = −J²γ avoids the cancellation in x₁ − γ when |λ₁| ≪ γ.
    let l1 = C64::new(-j * j * g / l2.norm_sqr(), 0.0);
    let shifted = [C64::new(x1, 0.0), l2 + g, l3 + g];
    let lambda = [l1, l2, l3];

    let vectors = [0, 1, 2].map(|k| {
        let l = lambda[k];
        Vec3::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, -2.0 * w / j) * l / shifted[k],
            C64::new(0.0, 1.0 / j) * l,
        )
    });

    let l1 = l1.re;
    let (l2r, l2i) = (l2.re, l2.im);
    let mod2 = l2.norm_sqr();
    let den = (l1 - l2r).powi(2) + l2i * l2i;
    let u1 = mod2 * x1 / (g * den);
    let u2 = C64::new(
        (l1 * l1 * g - l1 * (mod2 + 2.0 * l2r * g)) / (2.0 * g * den),
        (l1 * (l1 - l2r) * (mod2 + l2r * g) + l1 * l2i * l2i * g) / (2.0 * l2i * g * den),
    );

    SpectralData {
        params: *p,
        generator: generator(p),
        lambda,
        u: [C64::new(u1, 0.0), u2, u2.conj()],
        vectors,
        c: C64::new(c, 0.0),
        d,
        method: Method::ClosedForm,
        propagation: Propagation::Modal,
    }
}

fn fallback(p: &ModelParams, d: f64, radicand: f64, eps: f64) -> SpectralData {
    let m = generator(p);
    let mut lambda = companion_roots(p);
    let sqrt3 = 3f64.sqrt();
    let c = (C64::new(54.0 * p.gamma_ii * p.omega1 * p.omega1, 0.0)
        + 3.0 * sqrt3 * C64::new(radicand, 0.0).sqrt())
    .cbrt();

    let e1 = Vec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    if p.j == 0.0 {
        // e₁ spans the λ = 0 eigenspace; put it first.
        if let Some(k) = (0..3).min_by(|&a, &b| lambda[a].norm().total_cmp(&lambda[b].norm())) {
            lambda.swap(0, k);
        }
        lambda[0] = C64::new(0.0, 0.0);
        let vectors = [e1, eigenvector(&m, lambda[1]), eigenvector(&m, lambda[2])];
        let zero = C64::new(0.0, 0.0);
        return SpectralData {
            params: *p,
            generator: m,
            lambda,
            u: [C64::new(1.0, 0.0), zero, zero],
            vectors,
            c,
            d,
            method: Method::NumericFallback,
            propagation: Propagation::Decoupled,
        };
    }

    let vectors = lambda.map(|l| eigenvector(&m, l));
    let basis = Mat3::from_columns(&vectors);
    let solved = basis.lu().solve(&e1);
    let degenerate = p.gamma_ii == 0.0 || min_separation(&lambda) <= eps;
    let (u, propagation) = match solved {
        Some(u) if !degenerate && u.iter().all(|x| x.re.is_finite() && x.im.is_finite()) => {
            ([u[0], u[1], u[2]], Propagation::Modal)
        }
        Some(u) if u.iter().all(|x| x.re.is_finite() && x.im.is_finite()) => {
            ([u[0], u[1], u[2]], Propagation::MatrixExponential)
        }
        _ => ([C64::new(0.0, 0.0); 3], Propagation::MatrixExponential),
    };
    SpectralData {
        params: *p,
        generator: m,
        lambda,
        u,
        vectors,
        c,
        d,
        method: Method::NumericFallback,
        propagation,
    }
}

fn eigenvector(m: &Mat3, lambda: C64) -> Vec3 {
    linalg::null_vector(&(m - Mat3::identity() * lambda))
}

impl SpectralData {
    /// `‖M′vᵢ − λᵢvᵢ‖ / ‖vᵢ‖`.
    pub fn eigen_residual(&self, i: usize) -> f64 {
        let v = &self.vectors[i];
        let r = self.generator * v - v * self.lambda[i];
        linalg::norm2(&r) / linalg::norm2(v)
    }

    pub fn generator_norm(&self) -> f64 {
        linalg::norm_inf(&self.generator)
    }

    pub fn trace(&self) -> C64 {
        self.lambda.iter().sum()
    }

    pub fn determinant(&self) -> C64 {
        self.lambda.iter().product()
    }

    /// `(b₀, b_y, b_z)(t)` starting from `(1, 0, 0)`.
    pub fn bvec(&self, t: f64) -> Vec3 {
        match self.propagation {
            Propagation::Decoupled => {
                Vec3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0))
            }
            Propagation::MatrixExponential => {
                let e = linalg::expm(&self.generator.scale(0.5 * t));
                e.column(0).into_owned()
            }
            Propagation::Modal => (0..3)
                .map(|i| self.vectors[i] * (self.u[i] * (self.lambda[i] * (0.5 * t)).exp()))
                .fold(Vec3::zeros(), |acc, x| acc + x),
        }
    }

    /// `b₀(t)`. Exactly real in the closed-form regime.
    pub fn b0(&self, t: f64) -> C64 {
        match (self.method, self.propagation) {
            (_, Propagation::Decoupled) => C64::new(1.0, 0.0),
            (Method::ClosedForm, _) => {
                let (l1, l2) = (self.lambda[0].re, self.lambda[1]);
                let u2 = self.u[1];
                let phase = 0.5 * l2.im * t;
                let value = self.u[0].re * (0.5 * l1 * t).exp()
                    + 2.0 * (0.5 * l2.re * t).exp() * (u2.re * phase.cos() - u2.im * phase.sin());
                C64::new(value, 0.0)
            }
            (Method::NumericFallback, Propagation::Modal) => (0..3)
                .map(|i| self.vectors[i][0] * self.u[i] * (self.lambda[i] * (0.5 * t)).exp())
                .sum(),
            (Method::NumericFallback, Propagation::MatrixExponential) => self.bvec(t)[0],
        }
    }

    /// `db₀/dt`.
    pub fn b0_rate(&self, t: f64) -> C64 {
        match self.propagation {
            Propagation::Decoupled => C64::new(0.0, 0.0),
            Propagation::Modal => {
                let rate: C64 = (0..3)
                    .map(|i| {
                        let half = self.lambda[i] * 0.5;
                        self.vectors[i][0] * self.u[i] * half * (half * t).exp()
                    })
                    .sum();
                if self.method == Method::ClosedForm {
                    C64::new(rate.re, 0.0)
                } else {
                    rate
                }
            }
            Propagation::MatrixExponential => {
                let b = self.bvec(t);
                // first row of ½M′ is (0, 0, −iJ/2)
                self.generator[(0, 2)] * b[2] * 0.5
            }
        }
    }
}
