//! Hausdorff distance between the occupied cell-centre sets of two rasters.

use crate::error::{Error, Result};
use crate::raster::AttractorRaster;

/// Exact squared Euclidean distance transform of a 1D sampled function with
/// sample spacing `h` (lower envelope of parabolas). Infinite samples are
/// ignored; an all-infinite input stays infinite.
fn edt_1d(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let mut sites: Vec<usize> = Vec::with_capacity(n);
    let mut bounds: Vec<f64> = Vec::with_capacity(n + 1);
    let key = |q: usize| f[q] + (q as f64 * h).powi(2);
    for q in 0..n {
        if f[q].is_infinite() {
            continue;
        }
        loop {
            match sites.last() {
                None => {
                    sites.push(q);
                    bounds.clear();
                    bounds.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&v) => {
                    let s = (key(q) - key(v)) / (2.0 * h * h * (q - v) as f64);
                    if s <= *bounds.last().unwrap() {
                        sites.pop();
                        bounds.pop();
                        if sites.is_empty() {
                            continue;
                        }
                    } else {
                        sites.push(q);
                        bounds.push(s);
                        break;
                    }
                }
            }
        }
    }
    if sites.is_empty() {
        out.fill(f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (q, slot) in out.iter_mut().enumerate() {
        let x = q as f64;
        while k + 1 < sites.len() && bounds[k + 1] < x {
            k += 1;
        }
        let v = sites[k];
        *slot = ((q as f64 - v as f64) * h).powi(2) + f[v];
    }
}

/// Squared distance from every cell centre to the nearest occupied centre.
pub fn squared_distance_field(raster: &AttractorRaster) -> Vec<f64> {
    let res = raster.resolution();
    let init: Vec<f64> = raster
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { f64::INFINITY })
        .collect();
    let mut field = vec![0.0; init.len()];
    let hx = raster.cell_size(0);
    if raster.dim() == 1 {
        edt_1d(&init, hx, &mut field);
        return field;
    }
    // rows, then columns
    let mut pass = vec![0.0; init.len()];
    for y in 0..res {
        edt_1d(&init[y * res..(y + 1) * res], hx, &mut pass[y * res..(y + 1) * res]);
    }
    let hy = raster.cell_size(1);
    let mut column = vec![0.0; res];
    let mut column_out = vec![0.0; res];
    for x in 0..res {
        for y in 0..res {
            column[y] = pass[y * res + x];
        }
        edt_1d(&column, hy, &mut column_out);
        for y in 0..res {
            field[y * res + x] = column_out[y];
        }
    }
    field
}

/// `sup_{a in A} inf_{b in B} |a - b|` over occupied cell centres.
pub fn directed_hausdorff(a: &AttractorRaster, b: &AttractorRaster) -> Result<f64> {
    a.check_compatible(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRaster);
    }
    let field = squared_distance_field(b);
    Ok(a.occupied().map(|i| field[i]).fold(0.0, f64::max).sqrt())
}

/// Symmetric Hausdorff distance between occupied cell-centre sets.
pub fn hausdorff_distance(a: &AttractorRaster, b: &AttractorRaster) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceBox;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(a: &AttractorRaster, b: &AttractorRaster) -> f64 {
        let d = a.dim();
        let directed = |x: &AttractorRaster, y: &AttractorRaster| {
            x.occupied()
                .map(|i| {
                    let p = x.cell_center(i);
                    y.occupied()
                        .map(|j| {
                            let q = y.cell_center(j);
                            (0..d).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>().sqrt()
                        })
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        directed(a, b).max(directed(b, a))
    }

    fn random_raster(space: &SpaceBox, res: usize, density: f64, rng: &mut ChaCha8Rng) -> AttractorRaster {
        let mut r = AttractorRaster::empty(space, res).unwrap();
        for i in 0..r.cell_count() {
            if rng.gen_bool(density) {
                r.set(i);
            }
        }
        if r.is_empty() {
            r.set(0);
        }
        r
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spaces = [
            SpaceBox::unit(2).unwrap(),
            SpaceBox::new(&[0.0, -1.0], &[3.0, 1.0]).unwrap(),
            SpaceBox::unit(1).unwrap(),
        ];
        for space in &spaces {
            for density in [0.01, 0.05, 0.3] {
                let a = random_raster(space, 24, density, &mut rng);
                let b = random_raster(space, 24, density, &mut rng);
                let fast = hausdorff_distance(&a, &b).unwrap();
                let slow = brute_force(&a, &b);
                assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn identical_rasters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_raster(&SpaceBox::unit(2).unwrap(), 32, 0.1, &mut rng);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn two_single_cells() {
        let space = SpaceBox::unit(1).unwrap();
        let mut a = AttractorRaster::empty(&space, 4).unwrap();
        let mut b = AttractorRaster::empty(&space, 4).unwrap();
        a.set(0);
        b.set(2);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn dilation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_raster(&SpaceBox::unit(2).unwrap(), 64, 0.02, &mut rng);
        let d = hausdorff_distance(&a, &a.dilate(1)).unwrap();
        assert!(d <= a.pixel_diameter() + 1e-15);
    }

    #[test]
    fn errors() {
        let space = SpaceBox::unit(1).unwrap();
        let a = AttractorRaster::full(&space, 8).unwrap();
        let b = AttractorRaster::full(&space, 16).unwrap();
        assert_eq!(hausdorff_distance(&a, &b), Err(Error::ResolutionMismatch));
        let e = AttractorRaster::empty(&space, 8).unwrap();
        assert_eq!(hausdorff_distance(&a, &e), Err(Error::EmptyRaster));
    }
}
