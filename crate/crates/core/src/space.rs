//! Compact axis-aligned boxes in up to three dimensions.

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// Fixed-capacity point; only the first `dim` coordinates are meaningful.
pub type Point = [f64; MAX_DIM];

/// The compact metric space `C_1 x ... x C_N` with the Euclidean metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceBox {
    dim: usize,
    lower: Point,
    upper: Point,
}

impl SpaceBox {
    pub fn new(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let dim = lower.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidSpace(format!(
                "dimension {dim} not in 1..={MAX_DIM}"
            )));
        }
        if upper.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: upper.len(),
            });
        }
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for axis in 0..dim {
            let (l, u) = (lower[axis], upper[axis]);
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidSpace(format!(
                    "axis {axis}: need finite lower < upper, got [{l}, {u}]"
                )));
            }
            lo[axis] = l;
            hi[axis] = u;
        }
        Ok(Self {
            dim,
            lower: lo,
            upper: hi,
        })
    }

    /// The unit cube `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(&vec![0.0; dim], &vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper[..self.dim]
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn diagonal(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.extent(a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; MAX_DIM];
        for (a, slot) in c.iter_mut().enumerate().take(self.dim) {
            *slot = 0.5 * (self.lower[a] + self.upper[a]);
        }
        c
    }

    /// Absolute slack used when deciding membership of computed points.
    pub(crate) fn slack(&self) -> f64 {
        let scale = (0..self.dim)
            .map(|a| self.lower[a].abs().max(self.upper[a].abs()))
            .fold(1.0, f64::max);
        1e-12 * scale
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        let eps = self.slack();
        p.len() == self.dim
            && (0..self.dim).all(|a| p[a] >= self.lower[a] - eps && p[a] <= self.upper[a] + eps)
    }

    pub fn contains_origin(&self) -> bool {
        (0..self.dim).all(|a| self.lower[a] <= 0.0 && self.upper[a] >= 0.0)
    }

    /// The `2^dim` corners, in binary counting order over the axes.
    pub fn vertices(&self) -> Vec<Point> {
        box_vertices(self.dim, &self.lower, &self.upper)
    }

    pub(crate) fn to_point(&self, p: &[f64]) -> Result<Point> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        let mut out = [0.0; MAX_DIM];
        out[..self.dim].copy_from_slice(p);
        Ok(out)
    }
}

pub(crate) fn box_vertices(dim: usize, lower: &Point, upper: &Point) -> Vec<Point> {
    (0..1usize << dim)
        .map(|mask| {
            let mut v = [0.0; MAX_DIM];
            for (a, slot) in v.iter_mut().enumerate().take(dim) {
                *slot = if mask >> a & 1 == 1 { upper[a] } else { lower[a] };
            }
            v
        })
        .collect()
}

/// An open axis-aligned box, given by its closure's bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenBox(SpaceBox);

impl OpenBox {
    pub fn new(lower: &[f64], upper: &[f64]) -> Result<Self> {
        SpaceBox::new(lower, upper).map(OpenBox)
    }

    /// The interior of `space`.
    pub fn interior(space: &SpaceBox) -> Self {
        OpenBox(*space)
    }

    pub fn closure(&self) -> &SpaceBox {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn lower(&self) -> &[f64] {
        self.0.lower()
    }

    pub fn upper(&self) -> &[f64] {
        self.0.upper()
    }
}
