//! Small dense complex linear algebra on 3×3 matrices.

use nalgebra::{Matrix3, Vector3};

use crate::C64;

pub type Mat3 = Matrix3<C64>;
pub type Vec3 = Vector3<C64>;

const TAYLOR_DEGREE: usize = 18;

/// Max-row-sum (induced ∞) norm.
pub fn norm_inf(m: &Mat3) -> f64 {
    (0..3)
        .map(|r| (0..3).map(|c| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Euclidean norm of a complex 3-vector.
pub fn norm2(v: &Vec3) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix exponential by scaling and squaring: `exp(A) = exp(A/2^s)^(2^s)`
/// with `‖A/2^s‖∞ ≤ 1/2` and a degree-18 Taylor polynomial, whose
/// truncation error is below `0.5¹⁹/19! ≈ 1.6e-23` in relative terms.
pub fn expm(a: &Mat3) -> Mat3 {
    let norm = norm_inf(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));

    // Horner: I + X(I + X/2 (I + X/3 (...)))
    let eye = Mat3::identity();
    let mut acc = eye;
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = eye + (scaled * acc).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = acc * acc;
    }
    acc
}

/// Unit vector spanning the null space of a rank-2 matrix, taken as the
/// largest cross product of two of its rows (bilinear, no conjugation).
pub fn null_vector(a: &Mat3) -> Vec3 {
    let rows: [Vec3; 3] = [0, 1, 2].map(|r| Vec3::new(a[(r, 0)], a[(r, 1)], a[(r, 2)]));
    let cross = |x: &Vec3, y: &Vec3| {
        Vec3::new(
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        )
    };
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let best = candidates
        .iter()
        .max_by(|x, y| norm2(x).total_cmp(&norm2(y)))
        .copied()
        .unwrap_or_else(Vec3::zeros);
    let n = norm2(&best);
    if n > 0.0 {
        best.unscale(n)
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn expm_of_zero_is_identity() {
        assert_eq!(expm(&Mat3::zeros()), Mat3::identity());
    }

    #[test]
    fn expm_of_diagonal() {
        let a = Mat3::from_diagonal(&Vec3::new(c(1.0, 0.0), c(-3.0, 2.0), c(0.0, 40.0)));
        let e = expm(&a);
        for k in 0..3 {
            let want = a[(k, k)].exp();
            assert!((e[(k, k)] - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(θ[[0,-1],[1,0]]) embedded in 3×3
        let theta = 7.3;
        let mut a = Mat3::zeros();
        a[(0, 1)] = c(-theta, 0.0);
        a[(1, 0)] = c(theta, 0.0);
        let e = expm(&a);
        assert!((e[(0, 0)] - c(theta.cos(), 0.0)).norm() < 1e-13);
        assert!((e[(1, 0)] - c(theta.sin(), 0.0)).norm() < 1e-13);
        assert!((e[(2, 2)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expm_satisfies_group_property() {
        let a = Mat3::new(
            c(0.1, 0.0), c(0.0, -2.0), c(0.5, 0.0),
            c(0.0, 0.0), c(-1.0, 0.0), c(3.0, 0.0),
            c(0.0, -2.0), c(-3.0, 0.0), c(-2.0, 0.0),
        );
        let full = expm(&a);
        let half = expm(&a.scale(0.5));
        assert!(norm_inf(&(full - half * half)) < 1e-12 * norm_inf(&full));
    }

    #[test]
    fn null_vector_of_rank_two() {
        let a = Mat3::new(
            c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0),
            c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0),
            c(1.0, 1.0), c(3.0, 0.0), c(3.0, 0.0),
        );
        let v = null_vector(&a);
        assert!((norm2(&v) - 1.0).abs() < 1e-14);
        assert!(norm2(&(a * v)) < 1e-14);
    }
}
