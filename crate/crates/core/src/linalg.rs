//! Dense linear algebra for matrices of order at most three.

use crate::space::{Point, MAX_DIM};

pub type Matrix = [[f64; MAX_DIM]; MAX_DIM];

pub(crate) fn mat_vec(dim: usize, a: &Matrix, x: &Point) -> Point {
    let mut out = [0.0; MAX_DIM];
    for i in 0..dim {
        out[i] = (0..dim).map(|j| a[i][j] * x[j]).sum();
    }
    out
}

/// `A^T A`, symmetric.
pub(crate) fn gram(dim: usize, a: &Matrix) -> Matrix {
    let mut g = [[0.0; MAX_DIM]; MAX_DIM];
    for i in 0..dim {
        for j in 0..dim {
            g[i][j] = (0..dim).map(|k| a[k][i] * a[k][j]).sum();
        }
    }
    g
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix, closed form.
fn largest_symmetric_eigenvalue(dim: usize, s: &Matrix) -> f64 {
    match dim {
        1 => s[0][0],
        2 => {
            let tr = s[0][0] + s[1][1];
            let half_gap = 0.5 * (s[0][0] - s[1][1]);
            0.5 * tr + half_gap.hypot(s[0][1])
        }
        3 => {
            // Trigonometric solution of the characteristic cubic.
            let p1 = s[0][1].powi(2) + s[0][2].powi(2) + s[1][2].powi(2);
            let q = (s[0][0] + s[1][1] + s[2][2]) / 3.0;
            if p1 == 0.0 {
                return s[0][0].max(s[1][1]).max(s[2][2]);
            }
            let p2 = (s[0][0] - q).powi(2) + (s[1][1] - q).powi(2) + (s[2][2] - q).powi(2)
                + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let mut b = [[0.0; MAX_DIM]; MAX_DIM];
            for i in 0..3 {
                for j in 0..3 {
                    b[i][j] = (s[i][j] - if i == j { q } else { 0.0 }) / p;
                }
            }
            let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            q + 2.0 * p * phi.cos()
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

pub(crate) fn det3(m: &Matrix) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn det(dim: usize, m: &Matrix) -> f64 {
    match dim {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => det3(m),
    }
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(dim: usize, a: &Matrix) -> f64 {
    if dim == 1 {
        return a[0][0].abs();
    }
    largest_symmetric_eigenvalue(dim, &gram(dim, a)).max(0.0).sqrt()
}

/// Inverse by the adjugate; `None` when singular.
pub(crate) fn inverse(dim: usize, m: &Matrix) -> Option<Matrix> {
    let d = det(dim, m);
    let scale = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .map(|(i, j)| m[i][j].abs())
        .fold(0.0, f64::max);
    if d == 0.0 || d.abs() <= 1e-14 * scale.powi(dim as i32) {
        return None;
    }
    let mut inv = [[0.0; MAX_DIM]; MAX_DIM];
    match dim {
        1 => inv[0][0] = 1.0 / d,
        2 => {
            inv[0][0] = m[1][1] / d;
            inv[0][1] = -m[0][1] / d;
            inv[1][0] = -m[1][0] / d;
            inv[1][1] = m[0][0] / d;
        }
        _ => {
            for i in 0..3 {
                for j in 0..3 {
                    let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                    let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                    inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
                }
            }
        }
    }
    Some(inv)
}

/// Solves `(I - A) x = b`; the fixed point of `x -> Ax + b`.
pub(crate) fn fixed_point(dim: usize, a: &Matrix, b: &Point) -> Option<Point> {
    let mut m = [[0.0; MAX_DIM]; MAX_DIM];
    for i in 0..dim {
        for j in 0..dim {
            m[i][j] = if i == j { 1.0 } else { 0.0 } - a[i][j];
        }
    }
    inverse(dim, &m).map(|inv| mat_vec(dim, &inv, b))
}

pub(crate) fn norm(dim: usize, v: &Point) -> f64 {
    v[..dim].iter().map(|x| x * x).sum::<f64>().sqrt()
}
