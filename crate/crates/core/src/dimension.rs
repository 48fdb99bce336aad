//! Similarity dimension (Moran equation), its evolution under ratio maps,
//! and box counting on rasters.

use std::fmt;

use crate::error::{Error, Result};
use crate::raster::AttractorRaster;
use crate::sequence::FiniteIfs;

const MORAN_RESIDUAL: f64 = 1e-12;
const MORAN_MAX_ITERS: usize = 200;
/// Relative spread under which a system counts as uniform-ratio.
const UNIFORM_RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionMethod {
    UniformFormula,
    MoranBisection,
    EvolutionFormula,
    BoxCounting,
}

impl fmt::Display for DimensionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimensionMethod::UniformFormula => "uniform_formula",
            DimensionMethod::MoranBisection => "moran_bisection",
            DimensionMethod::EvolutionFormula => "evolution_formula",
            DimensionMethod::BoxCounting => "box_counting",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionReport {
    pub s: f64,
    pub method: DimensionMethod,
    /// `|sum r_i^s - 1|` for solver methods; fit residual (RMS) for box counting.
    pub residual: f64,
}

fn check_ratio(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRatio(r))
    }
}

fn moran_sum(ratios: &[f64], s: f64) -> f64 {
    ratios.iter().map(|r| r.powf(s)).sum()
}

/// Unique `s >= 0` with `sum r_i^s = 1`, by bisection on the strictly
/// decreasing map `s -> sum r_i^s`.
pub fn moran_dimension(ratios: &[f64]) -> Result<DimensionReport> {
    if ratios.is_empty() {
        return Err(Error::EmptySystem);
    }
    for &r in ratios {
        check_ratio(r)?;
    }
    let report = |s: f64| DimensionReport {
        s,
        method: DimensionMethod::MoranBisection,
        residual: (moran_sum(ratios, s) - 1.0).abs(),
    };
    if ratios.len() == 1 {
        return Ok(report(0.0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while moran_sum(ratios, hi) >= 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut best = 0.5 * (lo + hi);
    for _ in 0..MORAN_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let excess = moran_sum(ratios, mid) - 1.0;
        best = mid;
        if excess.abs() < MORAN_RESIDUAL * 1e-3 {
            break;
        }
        if excess > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(report(best))
}

/// Closed form `s = -log m / log r` for `m` maps of common ratio `r`.
pub fn uniform_dimension(m: usize, r: f64) -> Result<DimensionReport> {
    if m == 0 {
        return Err(Error::EmptySystem);
    }
    check_ratio(r)?;
    let s = (m as f64).ln() / -r.ln();
    Ok(DimensionReport {
        s,
        method: DimensionMethod::UniformFormula,
        residual: (m as f64 * r.powf(s) - 1.0).abs(),
    })
}

/// `s' = s / log_r(r')`: dimension after the common ratio `r` evolves to `r'`.
pub fn evolved_dimension(s: f64, r: f64, evolved_ratio: f64) -> Result<DimensionReport> {
    check_ratio(r)?;
    check_ratio(evolved_ratio)?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("dimension {s} must be >= 0")));
    }
    Ok(DimensionReport {
        s: s * r.ln() / evolved_ratio.ln(),
        method: DimensionMethod::EvolutionFormula,
        residual: 0.0,
    })
}

/// Common ratio of a system of similarities, if all ratios agree.
pub fn common_ratio(ifs: &FiniteIfs) -> Option<f64> {
    let ratios = ifs.ratios();
    let first = ratios[0];
    ratios
        .iter()
        .all(|r| (r - first).abs() <= UNIFORM_RATIO_TOL * first)
        .then_some(first)
}

/// Similarity dimension of a system of similarities: closed form when the
/// ratios agree, Moran bisection otherwise.
pub fn similarity_dimension(ifs: &FiniteIfs) -> Result<DimensionReport> {
    for (name, map) in ifs.as_alphabet().entries() {
        if !map.is_similarity() {
            return Err(Error::NotSimilarity(name.clone()));
        }
    }
    match common_ratio(ifs) {
        Some(r) => uniform_dimension(ifs.len(), r),
        None => moran_dimension(&ifs.ratios()),
    }
}

/// Least-squares slope of `log N(eps)` against `log(1/eps)` over box sides of
/// 4, 8, ..., resolution/4 cells.
pub fn box_counting_dimension(raster: &AttractorRaster) -> Result<DimensionReport> {
    let res = raster.resolution();
    if !res.is_power_of_two() || res < 32 {
        return Err(Error::InvalidParameter(format!(
            "box counting needs a power-of-two resolution >= 32, got {res}"
        )));
    }
    if raster.is_empty() {
        return Err(Error::EmptyRaster);
    }
    let mut samples = Vec::new();
    let mut side = 4;
    while side <= res / 4 {
        let blocks = res / side;
        let mut hit = vec![false; blocks.pow(raster.dim() as u32)];
        for cell in raster.occupied() {
            let [x, y] = raster.coords(cell);
            hit[(y / side) * blocks + x / side] = true;
        }
        let count = hit.iter().filter(|&&b| b).count() as f64;
        let inv_eps = blocks as f64;
        samples.push((inv_eps.ln(), count.ln()));
        side *= 2;
    }
    let (slope, rms) = least_squares(&samples);
    Ok(DimensionReport {
        s: slope,
        method: DimensionMethod::BoxCounting,
        residual: rms,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let rms = (points
        .iter()
        .map(|p| (p.1 - (my + slope * (p.0 - mx))).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceBox;

    const LOG3_LOG2: f64 = 1.584962500721156;

    #[test]
    fn moran_examples() {
        assert_eq!(moran_dimension(&[0.5]).unwrap().s, 0.0);
        let two = moran_dimension(&[0.5, 0.5]).unwrap();
        assert!((two.s - 1.0).abs() < 1e-12);
        let three = moran_dimension(&[0.5, 0.5, 0.5]).unwrap();
        assert!((three.s - LOG3_LOG2).abs() < 1e-12);
        assert!(three.residual < 1e-12);
    }

    #[test]
    fn moran_rejects_bad_ratios() {
        assert_eq!(moran_dimension(&[0.5, 1.0]), Err(Error::InvalidRatio(1.0)));
        assert_eq!(moran_dimension(&[0.0]), Err(Error::InvalidRatio(0.0)));
        assert_eq!(moran_dimension(&[]), Err(Error::EmptySystem));
    }

    #[test]
    fn moran_handles_tiny_ratios() {
        // many small maps push the root well above 1
        let r = moran_dimension(&[0.01; 1000]).unwrap();
        assert!((r.s - 1.5).abs() < 1e-10);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform_dimension(2, 0.5).unwrap().s, 1.0);
        assert!((uniform_dimension(3, 0.5).unwrap().s - LOG3_LOG2).abs() < 1e-12);
        assert_eq!(uniform_dimension(1, 0.3).unwrap().s, 0.0);
        assert!(uniform_dimension(3, 1.5).is_err());
    }

    #[test]
    fn evolved_examples() {
        assert_eq!(evolved_dimension(1.3, 0.4, 0.4).unwrap().s, 1.3);
        let e = evolved_dimension(LOG3_LOG2, 0.5, 0.25).unwrap();
        assert!((e.s - 0.7924812503605781).abs() < 1e-12);
        let check = moran_dimension(&[0.25, 0.25, 0.25]).unwrap();
        assert!((e.s - check.s).abs() < 1e-10);
        assert!(evolved_dimension(1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn full_rasters_have_integer_dimension() {
        let sq = AttractorRaster::full(&SpaceBox::unit(2).unwrap(), 512).unwrap();
        assert!((box_counting_dimension(&sq).unwrap().s - 2.0).abs() < 0.05);
        let line = AttractorRaster::full(&SpaceBox::unit(1).unwrap(), 512).unwrap();
        assert!((box_counting_dimension(&line).unwrap().s - 1.0).abs() < 0.05);
    }

    #[test]
    fn box_counting_errors() {
        let empty = AttractorRaster::empty(&SpaceBox::unit(2).unwrap(), 64).unwrap();
        assert_eq!(box_counting_dimension(&empty), Err(Error::EmptyRaster));
        let odd = AttractorRaster::full(&SpaceBox::unit(1).unwrap(), 100).unwrap();
        assert!(box_counting_dimension(&odd).is_err());
    }
}
