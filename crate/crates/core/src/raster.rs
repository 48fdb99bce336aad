//! Occupancy grids over a box, with cell-centre semantics.

use crate::error::{Error, Result};
use crate::space::{Point, SpaceBox, MAX_DIM};

/// A 1D or 2D occupancy grid with `resolution` cells per axis.
///
/// Cell `i` on an axis covers `[lo + i h, lo + (i + 1) h)` and is represented
/// by its centre. 2D cells are stored row-major with row 0 at the lowest
/// second coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorRaster {
    space: SpaceBox,
    resolution: usize,
    bits: Vec<bool>,
}

impl AttractorRaster {
    pub fn empty(space: &SpaceBox, resolution: usize) -> Result<Self> {
        if space.dim() > 2 {
            return Err(Error::UnsupportedRaster(format!(
                "{}-dimensional spaces cannot be rasterised",
                space.dim()
            )));
        }
        if resolution == 0 {
            return Err(Error::InvalidParameter("resolution must be positive".into()));
        }
        let cells = resolution
            .checked_pow(space.dim() as u32)
            .ok_or_else(|| Error::InvalidParameter("resolution too large".into()))?;
        Ok(Self {
            space: *space,
            resolution,
            bits: vec![false; cells],
        })
    }

    pub fn full(space: &SpaceBox, resolution: usize) -> Result<Self> {
        let mut r = Self::empty(space, resolution)?;
        r.bits.fill(true);
        Ok(r)
    }

    pub fn space(&self) -> &SpaceBox {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cell_count(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        self.space.extent(axis) / self.resolution as f64
    }

    /// Box diagonal divided by the resolution (the diagonal of one cell).
    pub fn pixel_diameter(&self) -> f64 {
        self.space.diagonal() / self.resolution as f64
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize) {
        self.bits[index] = true;
    }

    /// Per-axis cell coordinates of a flat index.
    pub fn coords(&self, index: usize) -> [usize; 2] {
        if self.dim() == 1 {
            [index, 0]
        } else {
            [index % self.resolution, index / self.resolution]
        }
    }

    pub fn index_of(&self, coords: [usize; 2]) -> usize {
        if self.dim() == 1 {
            coords[0]
        } else {
            coords[1] * self.resolution + coords[0]
        }
    }

    pub fn cell_center(&self, index: usize) -> Point {
        let c = self.coords(index);
        let mut p = [0.0; MAX_DIM];
        for (axis, slot) in p.iter_mut().enumerate().take(self.dim()) {
            *slot = self.space.lower()[axis] + (c[axis] as f64 + 0.5) * self.cell_size(axis);
        }
        p
    }

    /// Cell coordinates containing `p`, clamped to the grid.
    pub fn cell_coords_of(&self, p: &Point) -> [usize; 2] {
        let mut c = [0usize; 2];
        for (axis, slot) in c.iter_mut().enumerate().take(self.dim()) {
            let t = (p[axis] - self.space.lower()[axis]) / self.cell_size(axis);
            *slot = if t.is_nan() || t < 0.0 {
                0
            } else {
                (t.floor() as usize).min(self.resolution - 1)
            };
        }
        c
    }

    pub fn cell_of(&self, p: &Point) -> usize {
        self.index_of(self.cell_coords_of(p))
    }

    /// Sets every cell within `radius[axis]` cells of `center` along each axis.
    pub(crate) fn stamp(&mut self, center: [usize; 2], radius: [usize; 2]) {
        let res = self.resolution;
        let span = |c: usize, r: usize| c.saturating_sub(r)..=(c + r).min(res - 1);
        if self.dim() == 1 {
            for x in span(center[0], radius[0]) {
                self.bits[x] = true;
            }
        } else {
            for y in span(center[1], radius[1]) {
                for x in span(center[0], radius[0]) {
                    self.bits[y * res + x] = true;
                }
            }
        }
    }

    /// Morphological dilation by `cells` along every axis (square neighbourhood).
    pub fn dilate(&self, cells: usize) -> Self {
        let mut out = Self {
            bits: vec![false; self.bits.len()],
            ..self.clone()
        };
        for i in self.occupied() {
            out.stamp(self.coords(i), [cells, cells]);
        }
        out
    }

    pub fn union_with(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, &b) in self.bits.iter_mut().zip(other.bits.iter()) {
            *a |= b;
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.bits.iter().zip(other.bits.iter()).all(|(&a, &b)| !a || b))
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch);
        }
        Ok(())
    }

    /// Bits of row `y` (row 0 = lowest second coordinate); 1D rasters have one row.
    pub fn row(&self, y: usize) -> &[bool] {
        let w = self.resolution;
        &self.bits[y * w..(y + 1) * w]
    }

    pub fn height(&self) -> usize {
        if self.dim() == 1 {
            1
        } else {
            self.resolution
        }
    }
}
