//! Random validated contractions, alphabets and sequences for property
//! checks and benchmarks.

use std::sync::Arc;

use rand::Rng;

use crate::alphabet::{ContractionAlphabet, Symbol};
use crate::contraction::{validate_contraction, AffineContraction};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::sequence::IfsSequence;
use crate::space::{SpaceBox, MAX_DIM};

/// Keeps random images strictly inside the box despite rounding.
const FIT_MARGIN: f64 = 0.999;
const MAX_ATTEMPTS: usize = 64;

fn rows(dim: usize, a: &Matrix) -> Vec<Vec<f64>> {
    a[..dim].iter().map(|r| r[..dim].to_vec()).collect()
}

/// Per-axis half extent of the image of `space` under `a`.
fn image_half_extent(space: &SpaceBox, a: &Matrix) -> [f64; MAX_DIM] {
    let dim = space.dim();
    let mut e = [0.0; MAX_DIM];
    for (i, slot) in e.iter_mut().enumerate().take(dim) {
        *slot = (0..dim)
            .map(|j| a[i][j].abs() * 0.5 * space.extent(j))
            .sum();
    }
    e
}

/// Picks an offset that places the image of `space` under `a` at a random
/// position inside `space`, or `None` if it does not fit.
fn random_offset<R: Rng>(rng: &mut R, space: &SpaceBox, a: &Matrix) -> Option<Vec<f64>> {
    let dim = space.dim();
    let half = image_half_extent(space, a);
    let c = space.center();
    let ac = linalg::mat_vec(space.dim(), a, &c);
    let mut b = Vec::with_capacity(dim);
    for i in 0..dim {
        let lo = space.lower()[i] + half[i];
        let hi = space.upper()[i] - half[i];
        if lo > hi {
            return None;
        }
        let target = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        b.push(target - ac[i]);
    }
    Some(b)
}

/// A random affine contraction of `space` with ratio at most `max_ratio`.
pub fn random_contraction<R: Rng>(
    rng: &mut R,
    space: &SpaceBox,
    max_ratio: f64,
) -> Result<AffineContraction> {
    check_max_ratio(max_ratio)?;
    let dim = space.dim();
    for _ in 0..MAX_ATTEMPTS {
        let mut a = [[0.0; MAX_DIM]; MAX_DIM];
        for row in a.iter_mut().take(dim) {
            for x in row.iter_mut().take(dim) {
                *x = rng.gen_range(-1.0..1.0);
            }
        }
        let norm = linalg::spectral_norm(dim, &a);
        if norm < 1e-6 {
            continue;
        }
        let target = rng.gen_range(0.05 * max_ratio..max_ratio);
        let mut scale = target / norm;
        // shrink until the image box fits
        let half = image_half_extent(space, &a);
        for i in 0..dim {
            let need = 2.0 * half[i] * scale;
            if need > FIT_MARGIN * space.extent(i) {
                scale *= FIT_MARGIN * space.extent(i) / need;
            }
        }
        for row in a.iter_mut().take(dim) {
            for x in row.iter_mut().take(dim) {
                *x *= scale;
            }
        }
        if let Some(b) = random_offset(rng, space, &a) {
            if let Ok(f) = validate_contraction(space, &rows(dim, &a), &b) {
                return Ok(f);
            }
        }
    }
    Err(Error::InvalidParameter("could not draw a contraction".into()))
}

fn check_max_ratio(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRatio(r))
    }
}

/// Random orthogonal matrix (rotation, possibly composed with a reflection).
fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let mut q = [[0.0; MAX_DIM]; MAX_DIM];
    match dim {
        1 => q[0][0] = 1.0,
        2 => {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = t.sin_cos();
            q[0] = [c, -s, 0.0];
            q[1] = [s, c, 0.0];
        }
        _ => {
            // unit quaternion from four normals
            let mut v = [0.0f64; 4];
            let mut n = 0.0;
            while n < 1e-6 {
                for x in v.iter_mut() {
                    *x = rng.gen_range(-1.0..1.0);
                }
                n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            }
            let [w, x, y, z] = v.map(|c| c / n);
            q[0] = [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)];
            q[1] = [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)];
            q[2] = [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)];
        }
    }
    if rng.gen_bool(0.5) {
        for x in q[0].iter_mut() {
            *x = -*x;
        }
    }
    q
}

/// A random similarity of `space` with exactly the given ratio. Orientations
/// whose image does not fit are redrawn; the axis-aligned orientation always
/// fits.
pub fn random_similarity<R: Rng>(
    rng: &mut R,
    space: &SpaceBox,
    ratio: f64,
) -> Result<AffineContraction> {
    check_max_ratio(ratio)?;
    let dim = space.dim();
    for attempt in 0..=MAX_ATTEMPTS {
        let mut a = if attempt < MAX_ATTEMPTS {
            random_orthogonal(rng, dim)
        } else {
            let mut id = [[0.0; MAX_DIM]; MAX_DIM];
            for (i, row) in id.iter_mut().enumerate().take(dim) {
                row[i] = 1.0;
            }
            id
        };
        for row in a.iter_mut().take(dim) {
            for x in row.iter_mut().take(dim) {
                *x *= ratio;
            }
        }
        if let Some(b) = random_offset(rng, space, &a) {
            if let Ok(f) = validate_contraction(space, &rows(dim, &a), &b) {
                return Ok(f);
            }
        }
    }
    Err(Error::InvalidParameter("could not draw a similarity".into()))
}

/// What kind of maps a random alphabet holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    /// General affine contractions with ratio below the bound.
    General { max_ratio: f64 },
    /// Similarities sharing one ratio.
    UniformSimilarity { ratio: f64 },
}

/// `m` pairwise distinct random maps named `f1..fm`.
pub fn random_alphabet<R: Rng>(
    rng: &mut R,
    space: &SpaceBox,
    m: usize,
    kind: MapKind,
) -> Result<ContractionAlphabet> {
    if m == 0 {
        return Err(Error::EmptySystem);
    }
    let mut maps: Vec<AffineContraction> = Vec::with_capacity(m);
    let mut attempts = 0;
    while maps.len() < m {
        attempts += 1;
        if attempts > m * MAX_ATTEMPTS {
            return Err(Error::InvalidParameter("could not draw distinct maps".into()));
        }
        let f = match kind {
            MapKind::General { max_ratio } => random_contraction(rng, space, max_ratio)?,
            MapKind::UniformSimilarity { ratio } => random_similarity(rng, space, ratio)?,
        };
        if !maps.iter().any(|g| g.same_map(&f)) {
            maps.push(f);
        }
    }
    let entries = maps
        .into_iter()
        .enumerate()
        .map(|(i, f)| (format!("f{}", i + 1), f))
        .collect();
    ContractionAlphabet::new(*space, entries)
}

fn random_word<R: Rng>(rng: &mut R, alphabet: &ContractionAlphabet, len: usize) -> Vec<Symbol> {
    let symbols: Vec<Symbol> = alphabet.symbols().collect();
    (0..len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect()
}

/// A random eventually periodic sequence (not normalized).
pub fn random_periodic_sequence<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<ContractionAlphabet>,
    max_preperiod: usize,
    max_period: usize,
) -> IfsSequence {
    let pre_len = rng.gen_range(0..=max_preperiod);
    let per_len = rng.gen_range(1..=max_period.max(1));
    let pre = random_word(rng, alphabet, pre_len);
    let per = random_word(rng, alphabet, per_len);
    IfsSequence::eventually_periodic(alphabet.clone(), pre, per)
        .expect("symbols drawn from the alphabet")
}

/// A random sequence: mostly eventually periodic, sometimes a shifted block
/// enumeration when the alphabet has at least two maps.
pub fn random_sequence<R: Rng>(rng: &mut R, alphabet: &Arc<ContractionAlphabet>) -> IfsSequence {
    if alphabet.len() >= 2 && rng.gen_bool(0.25) {
        let mut order: Vec<Symbol> = alphabet.symbols().collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let keep = rng.gen_range(2..=order.len());
        order.truncate(keep);
        let seq = IfsSequence::block_enumeration(alphabet.clone(), order)
            .expect("distinct symbols");
        crate::dynamics::shift_n(&seq, rng.gen_range(0..1000))
    } else {
        random_periodic_sequence(rng, alphabet, 6, 6)
    }
}

/// A copy of `seq` whose first `n` symbols are kept and the rest redrawn.
pub fn agreeing_prefix<R: Rng>(rng: &mut R, seq: &IfsSequence, n: usize) -> IfsSequence {
    let pre = seq.prefix(n);
    let len = rng.gen_range(1..=6);
    let per = random_word(rng, seq.alphabet(), len);
    IfsSequence::eventually_periodic(seq.alphabet().clone(), pre, per)
        .expect("symbols drawn from the alphabet")
}
