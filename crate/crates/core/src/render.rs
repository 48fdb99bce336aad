//! Attractor rendering: deterministic Hutchinson iteration and the chaos game.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::AttractorRaster;
use crate::sequence::FiniteIfs;
use crate::space::{Point, MAX_DIM};

/// Points plotted per independently seeded chaos-game chunk.
pub const CHAOS_CHUNK: usize = 1 << 16;

/// Stamp radius per axis so that the stamp covers the image of a whole cell,
/// not just of its centre. One cell for square boxes.
fn stamp_radius(raster: &AttractorRaster, ratio: f64) -> [usize; 2] {
    let half_diag = 0.5 * raster.pixel_diameter();
    let mut r = [1usize; 2];
    for (axis, slot) in r.iter_mut().enumerate().take(raster.dim()) {
        let need = (ratio * half_diag / raster.cell_size(axis)).ceil() as usize;
        *slot = need.max(1);
    }
    r
}

/// One application of the Hutchinson operator `W(S) = U_i f_i(S)` at raster
/// level: every occupied cell centre is mapped by every map and the target
/// cell is stamped with its neighbours.
pub fn hutchinson_step(raster: &AttractorRaster, ifs: &FiniteIfs) -> Result<AttractorRaster> {
    if ifs.as_alphabet().space() != raster.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut out = AttractorRaster::empty(raster.space(), raster.resolution())?;
    let maps: Vec<_> = ifs
        .maps()
        .map(|m| (m, stamp_radius(raster, m.ratio())))
        .collect();
    for cell in raster.occupied() {
        let c = raster.cell_center(cell);
        for (map, radius) in &maps {
            let img = map.apply_point(&c);
            out.stamp(raster.cell_coords_of(&img), *radius);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicRender {
    pub raster: AttractorRaster,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterates [`hutchinson_step`] from the full raster until the occupied set
/// changes by at most `stop_tol` of all cells (0 means "unchanged") or
/// `max_iters` steps have run.
///
/// Each cell stamp covers the image of the whole cell, so every iterate
/// contains the attractor.
pub fn attractor_deterministic(
    ifs: &FiniteIfs,
    resolution: usize,
    max_iters: usize,
    stop_tol: f64,
) -> Result<DeterministicRender> {
    if resolution < 16 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} below 16"
        )));
    }
    let mut raster = AttractorRaster::full(ifs.as_alphabet().space(), resolution)?;
    let threshold = (stop_tol.max(0.0) * raster.cell_count() as f64) as usize;
    for iteration in 1..=max_iters {
        let next = hutchinson_step(&raster, ifs)?;
        let changed = next
            .bits()
            .iter()
            .zip(raster.bits())
            .filter(|(a, b)| a != b)
            .count();
        raster = next;
        if changed <= threshold {
            return Ok(DeterministicRender {
                raster,
                iterations: iteration,
                converged: true,
            });
        }
    }
    Ok(DeterministicRender {
        raster,
        iterations: max_iters,
        converged: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosGameConfig {
    pub resolution: usize,
    pub n_points: usize,
    pub seed: u64,
    pub burn_in: usize,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl ChaosGameConfig {
    pub fn new(resolution: usize, n_points: usize, seed: u64) -> Self {
        Self {
            resolution,
            n_points,
            seed,
            burn_in: 100,
            workers: None,
        }
    }
}

/// Chaos-game rendering with uniform map selection.
///
/// The point budget is split into chunks of [`CHAOS_CHUNK`] points. Chunk `c`
/// runs its own ChaCha8 stream seeded with `seed + c`, starts from the fixed
/// point of the first map (a point of the attractor), discards `burn_in`
/// iterates and plots the rest. Chunks are merged by union, so the raster is
/// bit-identical for any worker count.
pub fn attractor_chaos_game(ifs: &FiniteIfs, config: &ChaosGameConfig) -> Result<AttractorRaster> {
    if config.n_points < 1000 {
        return Err(Error::InvalidParameter(format!(
            "chaos game needs at least 1000 points, got {}",
            config.n_points
        )));
    }
    let space = ifs.as_alphabet().space();
    let template = AttractorRaster::empty(space, config.resolution)?;
    let maps: Vec<_> = ifs.maps().collect();
    let mut start = [0.0; MAX_DIM];
    start[..space.dim()].copy_from_slice(&maps[0].fixed_point());
    let chunks = config.n_points.div_ceil(CHAOS_CHUNK);

    let run_chunk = |c: usize| -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(c as u64));
        let count = CHAOS_CHUNK.min(config.n_points - c * CHAOS_CHUNK);
        let mut x: Point = start;
        for _ in 0..config.burn_in {
            x = maps[rng.gen_range(0..maps.len())].apply_point(&x);
        }
        let mut cells = Vec::with_capacity(count);
        for _ in 0..count {
            x = maps[rng.gen_range(0..maps.len())].apply_point(&x);
            cells.push(template.cell_of(&x));
        }
        cells
    };

    let collect = || -> Vec<Vec<usize>> { (0..chunks).into_par_iter().map(run_chunk).collect() };
    let per_chunk = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(collect),
        None => collect(),
    };

    let mut raster = template;
    for cell in per_chunk.into_iter().flatten() {
        raster.set(cell);
    }
    Ok(raster)
}
