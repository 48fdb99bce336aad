//! Open set condition checks for finite systems and an open box `V`.
//!
//! Containment `f_i(V) ⊆ V` is decided on closures through corner images.
//! Pairwise disjointness of the open images is decided exactly: by interval
//! overlap when both linear parts are diagonal, and otherwise by a
//! separating-axis test on the image parallelotopes (invertible maps only).

use crate::contraction::AffineContraction;
use crate::dynamics::EvolutionOperator;
use crate::dynamics::Time;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::sequence::{distinct_system, FiniteIfs, IfsSequence};
use crate::space::{box_vertices, OpenBox, Point, MAX_DIM};

#[derive(Debug, Clone, PartialEq)]
pub enum OscViolation {
    /// Open images of maps `i` and `j` (0-based, first-appearance order)
    /// intersect; `witness` lies in both.
    Overlap {
        i: usize,
        j: usize,
        witness: Vec<f64>,
    },
    /// The closure of `f_i(V)` leaves the closure of `V` at `image`.
    NotContained { i: usize, image: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum OscVerdict {
    Satisfied,
    Violated(OscViolation),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscResult {
    pub verdict: OscVerdict,
    pub open_set: OpenBox,
}

impl OscResult {
    pub fn is_satisfied(&self) -> bool {
        self.verdict == OscVerdict::Satisfied
    }
}

/// Image of the open box under an affine map, as `center + span * u` with
/// `u` in the open unit cube.
struct Parallelotope {
    dim: usize,
    center: Point,
    /// Column `k` is the image of the `k`-th half-edge of `V`.
    span: Matrix,
}

impl Parallelotope {
    fn image(map: &AffineContraction, v: &OpenBox) -> Self {
        let dim = v.dim();
        let mut c = [0.0; MAX_DIM];
        let mut half = [0.0; MAX_DIM];
        for a in 0..dim {
            c[a] = 0.5 * (v.lower()[a] + v.upper()[a]);
            half[a] = 0.5 * (v.upper()[a] - v.lower()[a]);
        }
        let a = map.raw_matrix();
        let mut span = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..dim {
            for k in 0..dim {
                span[i][k] = a[i][k] * half[k];
            }
        }
        Self {
            dim,
            center: map.apply_point(&c),
            span,
        }
    }

    fn vertices(&self) -> Vec<Point> {
        let lo = [-1.0; MAX_DIM];
        let hi = [1.0; MAX_DIM];
        box_vertices(self.dim, &lo, &hi)
            .into_iter()
            .map(|u| self.at(&u))
            .collect()
    }

    fn at(&self, u: &Point) -> Point {
        let mut p = linalg::mat_vec(self.dim, &self.span, u);
        for i in 0..self.dim {
            p[i] += self.center[i];
        }
        p
    }

    fn edge_directions(&self) -> Vec<Point> {
        (0..self.dim)
            .map(|k| {
                let mut d = [0.0; MAX_DIM];
                for (i, slot) in d.iter_mut().enumerate().take(self.dim) {
                    *slot = self.span[i][k];
                }
                d
            })
            .collect()
    }

    /// Edges as (start, end) segments.
    fn edges(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        let lo = [-1.0; MAX_DIM];
        let hi = [1.0; MAX_DIM];
        for u in box_vertices(self.dim, &lo, &hi) {
            for k in 0..self.dim {
                if u[k] < 0.0 {
                    let mut w = u;
                    w[k] = 1.0;
                    out.push((self.at(&u), self.at(&w)));
                }
            }
        }
        out
    }

    /// Local coordinates `u` of `p`, given the inverse of `span`.
    fn local(&self, p: &Point, inv: &Matrix) -> Point {
        let mut d = [0.0; MAX_DIM];
        for i in 0..self.dim {
            d[i] = p[i] - self.center[i];
        }
        linalg::mat_vec(self.dim, inv, &d)
    }
}

fn dot(dim: usize, a: &Point, b: &Point) -> f64 {
    (0..dim).map(|i| a[i] * b[i]).sum()
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn face_normals(p: &Parallelotope) -> Vec<Point> {
    let e = p.edge_directions();
    match p.dim {
        1 => vec![[1.0, 0.0, 0.0]],
        2 => e.iter().map(|d| [-d[1], d[0], 0.0]).collect(),
        _ => vec![cross(&e[1], &e[2]), cross(&e[2], &e[0]), cross(&e[0], &e[1])],
    }
}

/// Separating-axis test. True when the open parallelotopes are disjoint
/// (closures may touch).
fn separated(p: &Parallelotope, q: &Parallelotope) -> bool {
    let dim = p.dim;
    let mut axes = face_normals(p);
    axes.extend(face_normals(q));
    if dim == 3 {
        for a in p.edge_directions() {
            for b in q.edge_directions() {
                axes.push(cross(&a, &b));
            }
        }
    }
    let (pv, qv) = (p.vertices(), q.vertices());
    axes.iter().any(|axis| {
        let len = dot(dim, axis, axis).sqrt();
        if len == 0.0 {
            return false;
        }
        let project = |vs: &[Point]| {
            vs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let t = dot(dim, axis, v) / len;
                (lo.min(t), hi.max(t))
            })
        };
        let (plo, phi) = project(&pv);
        let (qlo, qhi) = project(&qv);
        let eps = 1e-12 * (1.0 + phi.abs().max(plo.abs()).max(qhi.abs()).max(qlo.abs()));
        phi <= qlo + eps || qhi <= plo + eps
    })
}

/// Clips segment `a -> b` to the closed unit cube in `q`'s local coordinates.
fn clip_segment(a: &Point, b: &Point, q: &Parallelotope, inv: &Matrix) -> Option<(Point, Point)> {
    let (ua, ub) = (q.local(a, inv), q.local(b, inv));
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..q.dim {
        let d = ub[k] - ua[k];
        if d == 0.0 {
            if ua[k].abs() > 1.0 {
                return None;
            }
            continue;
        }
        let (mut lo, mut hi) = ((-1.0 - ua[k]) / d, (1.0 - ua[k]) / d);
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        t0 = t0.max(lo);
        t1 = t1.min(hi);
        if t0 > t1 {
            return None;
        }
    }
    let lerp = |t: f64| {
        let mut p = [0.0; MAX_DIM];
        for i in 0..q.dim {
            p[i] = a[i] + t * (b[i] - a[i]);
        }
        p
    };
    Some((lerp(t0), lerp(t1)))
}

/// A point in the interior of both parallelotopes, assuming they overlap
/// with nonempty interior: the mean of all points where an edge of one
/// enters or leaves the other. These include every vertex of the
/// intersection polytope.
fn overlap_witness(p: &Parallelotope, q: &Parallelotope) -> Option<Point> {
    let pinv = linalg::inverse(p.dim, &p.span)?;
    let qinv = linalg::inverse(q.dim, &q.span)?;
    let mut sum = [0.0; MAX_DIM];
    let mut count = 0usize;
    for (shape, other, inv) in [(p, q, &qinv), (q, p, &pinv)] {
        for (a, b) in shape.edges() {
            if let Some((s, e)) = clip_segment(&a, &b, other, inv) {
                for x in [s, e] {
                    for i in 0..p.dim {
                        sum[i] += x[i];
                    }
                    count += 1;
                }
            }
        }
    }
    if count == 0 {
        return None;
    }
    for s in sum.iter_mut() {
        *s /= count as f64;
    }
    let inside = |shape: &Parallelotope, inv: &Matrix| {
        let u = shape.local(&sum, inv);
        (0..shape.dim).all(|k| u[k].abs() < 1.0)
    };
    (inside(p, &pinv) && inside(q, &qinv)).then_some(sum)
}

/// Open interval image of `V` along one axis under a diagonal map.
fn diagonal_interval(map: &AffineContraction, v: &OpenBox, axis: usize) -> (f64, f64) {
    let a = map.raw_matrix()[axis][axis];
    let b = map.raw_offset()[axis];
    let (x, y) = (a * v.lower()[axis] + b, a * v.upper()[axis] + b);
    (x.min(y), x.max(y))
}

/// Intersection of two possibly degenerate open intervals: a zero-width
/// interval stands for the single point it contains.
fn interval_overlap(p: (f64, f64), q: (f64, f64)) -> Option<f64> {
    let point = |i: (f64, f64)| i.0 == i.1;
    match (point(p), point(q)) {
        (true, true) => (p.0 == q.0).then_some(p.0),
        (true, false) => (q.0 < p.0 && p.0 < q.1).then_some(p.0),
        (false, true) => (p.0 < q.0 && q.0 < p.1).then_some(q.0),
        (false, false) => {
            let lo = p.0.max(q.0);
            let hi = p.1.min(q.1);
            (lo < hi).then_some(0.5 * (lo + hi))
        }
    }
}

enum PairOutcome {
    Disjoint,
    Overlap(Vec<f64>),
    Unknown(String),
}

fn check_pair(f: &AffineContraction, g: &AffineContraction, v: &OpenBox) -> PairOutcome {
    let dim = v.dim();
    if f.is_diagonal() && g.is_diagonal() {
        let mut witness = Vec::with_capacity(dim);
        for axis in 0..dim {
            match interval_overlap(diagonal_interval(f, v, axis), diagonal_interval(g, v, axis)) {
                Some(x) => witness.push(x),
                None => return PairOutcome::Disjoint,
            }
        }
        return PairOutcome::Overlap(witness);
    }
    let (p, q) = (Parallelotope::image(f, v), Parallelotope::image(g, v));
    if linalg::inverse(dim, &p.span).is_none() || linalg::inverse(dim, &q.span).is_none() {
        return PairOutcome::Unknown("singular non-diagonal map".into());
    }
    if separated(&p, &q) {
        return PairOutcome::Disjoint;
    }
    match overlap_witness(&p, &q) {
        Some(w) => PairOutcome::Overlap(w[..dim].to_vec()),
        None => PairOutcome::Unknown("overlap detected but no interior witness found".into()),
    }
}

/// Checks the open set condition for `ifs` with the open box `v`.
pub fn osc_check(ifs: &FiniteIfs, v: &OpenBox) -> Result<OscResult> {
    let space = ifs.as_alphabet().space();
    if v.dim() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    if !space.contains(v.lower()) || !space.contains(v.upper()) {
        return Err(Error::OpenSetOutsideSpace);
    }
    let maps: Vec<&AffineContraction> = ifs.maps().collect();
    let closure = v.closure();
    let done = |verdict| Ok(OscResult { verdict, open_set: *v });
    for (i, map) in maps.iter().enumerate() {
        for corner in closure.vertices() {
            let image = map.apply_point(&corner);
            if !closure.contains(&image[..v.dim()]) {
                return done(OscVerdict::Violated(OscViolation::NotContained {
                    i,
                    image: image[..v.dim()].to_vec(),
                }));
            }
        }
    }
    let mut unknown = None;
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            match check_pair(maps[i], maps[j], v) {
                PairOutcome::Disjoint => {}
                PairOutcome::Overlap(witness) => {
                    return done(OscVerdict::Violated(OscViolation::Overlap { i, j, witness }))
                }
                PairOutcome::Unknown(why) => {
                    unknown.get_or_insert(format!("pair ({i},{j}): {why}"));
                }
            }
        }
    }
    done(match unknown {
        Some(why) => OscVerdict::Unknown(why),
        None => OscVerdict::Satisfied,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscShiftReport {
    pub steps: u64,
    pub original: FiniteIfs,
    pub shifted: FiniteIfs,
    pub is_subsystem: bool,
    pub shifted_result: OscResult,
}

impl OscShiftReport {
    pub fn passed(&self) -> bool {
        self.is_subsystem && self.shifted_result.is_satisfied()
    }
}

/// Shifting never adds maps, so the condition survives `n` shifts with the same `V`.
pub fn osc_preserved_under_shift(seq: &IfsSequence, v: &OpenBox, n: u64) -> Result<OscShiftReport> {
    let original = distinct_system(seq);
    let before = osc_check(&original, v)?;
    if !before.is_satisfied() {
        return Err(Error::PrerequisiteFailed(format!(
            "open set condition does not hold before shifting: {:?}",
            before.verdict
        )));
    }
    let shifted_seq = EvolutionOperator::SHIFT.evolve(seq, Time::Steps(n))?;
    let shifted = distinct_system(&shifted_seq);
    let shifted_result = osc_check(&shifted, v)?;
    Ok(OscShiftReport {
        steps: n,
        is_subsystem: shifted.is_subsystem_of(&original),
        original,
        shifted,
        shifted_result,
    })
}
