//! The uniform metric on contractions and its bounded companion.

use crate::contraction::AffineContraction;
use crate::error::{Error, Result};
use crate::linalg;
use crate::space::MAX_DIM;

/// `sup_{x in X} |f(x) - g(x)|`.
///
/// `x -> |(A_f - A_g)x + (b_f - b_g)|` is convex, so the supremum over the
/// box is attained at a corner and this is exact up to rounding.
pub fn sup_distance(f: &AffineContraction, g: &AffineContraction) -> Result<f64> {
    if f.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    let dim = f.dim();
    let (af, ag) = (f.raw_matrix(), g.raw_matrix());
    let (bf, bg) = (f.raw_offset(), g.raw_offset());
    let mut worst: f64 = 0.0;
    for v in f.space().vertices() {
        let mut diff = [0.0; MAX_DIM];
        for i in 0..dim {
            let fx: f64 = (0..dim).map(|j| af[i][j] * v[j]).sum::<f64>() + bf[i];
            let gx: f64 = (0..dim).map(|j| ag[i][j] * v[j]).sum::<f64>() + bg[i];
            diff[i] = fx - gx;
        }
        worst = worst.max(linalg::norm(dim, &diff));
    }
    Ok(worst)
}

/// `d / (1 + d)` for `d = sup_distance(f, g)`; always in `[0, 1)`.
pub fn bounded_distance(f: &AffineContraction, g: &AffineContraction) -> Result<f64> {
    sup_distance(f, g).map(bound)
}

#[inline]
pub fn bound(d: f64) -> f64 {
    d / (1.0 + d)
}
