//! Certified affine contractions `f(x) = Ax + b` of a box into itself.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::space::{Point, SpaceBox, MAX_DIM};

/// Relative tolerance for recognising `A^T A = r^2 I`.
const SIMILARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineContraction {
    space: SpaceBox,
    matrix: Matrix,
    offset: Point,
    ratio: f64,
    is_similarity: bool,
}

/// Validates `x -> Ax + b` as a contraction of `space` into itself.
///
/// The ratio is the spectral norm of `A`, computed in closed form. The
/// self-map check evaluates the box corners only: the image of a box under
/// an affine map is the convex hull of the corner images.
pub fn validate_contraction(
    space: &SpaceBox,
    matrix: &[Vec<f64>],
    offset: &[f64],
) -> Result<AffineContraction> {
    let dim = space.dim();
    if matrix.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: matrix.len(),
        });
    }
    let mut a = [[0.0; MAX_DIM]; MAX_DIM];
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
        a[i][..dim].copy_from_slice(row);
    }
    let b = space.to_point(offset)?;
    AffineContraction::from_parts(*space, a, b)
}

impl AffineContraction {
    pub(crate) fn from_parts(space: SpaceBox, matrix: Matrix, offset: Point) -> Result<Self> {
        let dim = space.dim();
        let finite = matrix[..dim].iter().all(|r| r[..dim].iter().all(|x| x.is_finite()))
            && offset[..dim].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidSpace("non-finite coefficient".into()));
        }
        let ratio = linalg::spectral_norm(dim, &matrix);
        if ratio.is_nan() || ratio >= 1.0 {
            return Err(Error::NotContractive { norm: ratio });
        }
        let map = Self {
            space,
            matrix,
            offset,
            ratio,
            is_similarity: false,
        };
        for vertex in space.vertices() {
            let image = map.apply_point(&vertex);
            if !space.contains(&image[..dim]) {
                return Err(Error::EscapesSpace {
                    vertex: vertex[..dim].to_vec(),
                    image: image[..dim].to_vec(),
                });
            }
        }
        Ok(Self {
            is_similarity: detect_similarity(dim, &matrix, ratio),
            ..map
        })
    }

    pub fn space(&self) -> &SpaceBox {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Certified contraction ratio (spectral norm of the linear part).
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn is_similarity(&self) -> bool {
        self.is_similarity
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        self.matrix[..d].iter().map(|r| r[..d].to_vec()).collect()
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset[..self.dim()]
    }

    pub(crate) fn raw_matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub(crate) fn raw_offset(&self) -> &Point {
        &self.offset
    }

    /// `Ax + b` for a point of the space.
    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        let p = self.space.to_point(point)?;
        if !self.space.contains(point) {
            return Err(Error::PointOutsideSpace(point.to_vec()));
        }
        Ok(self.apply_point(&p)[..self.dim()].to_vec())
    }

    #[inline]
    pub(crate) fn apply_point(&self, x: &Point) -> Point {
        let mut y = linalg::mat_vec(self.dim(), &self.matrix, x);
        for (yi, bi) in y.iter_mut().zip(self.offset.iter()) {
            *yi += bi;
        }
        y
    }

    /// `e^{-t}`-style uniform scaling of both the linear part and the offset.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let dim = self.dim();
        let mut a = self.matrix;
        let mut b = self.offset;
        for i in 0..dim {
            for j in 0..dim {
                a[i][j] *= factor;
            }
            b[i] *= factor;
        }
        Self::from_parts(self.space, a, b)
    }

    /// Coefficient-wise equality of the maps (the symbol-level equality).
    pub fn same_map(&self, other: &Self) -> bool {
        self.space == other.space && self.matrix == other.matrix && self.offset == other.offset
    }

    /// Largest absolute coefficient difference.
    pub fn coefficient_distance(&self, other: &Self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((self.matrix[i][j] - other.matrix[i][j]).abs());
            }
            worst = worst.max((self.offset[i] - other.offset[i]).abs());
        }
        worst
    }

    /// The unique fixed point.
    pub fn fixed_point(&self) -> Vec<f64> {
        let dim = self.dim();
        linalg::fixed_point(dim, &self.matrix, &self.offset)
            .expect("I - A is invertible for a contraction")[..dim]
            .to_vec()
    }

    pub(crate) fn is_diagonal(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (0..dim).all(|j| i == j || self.matrix[i][j] == 0.0))
    }
}

fn detect_similarity(dim: usize, a: &Matrix, ratio: f64) -> bool {
    let g = linalg::gram(dim, a);
    let r2 = ratio * ratio;
    let tol = SIMILARITY_TOL * r2.max(f64::MIN_POSITIVE);
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            let target = if i == j { r2 } else { 0.0 };
            (g[i][j] - target).abs() <= tol
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(dim: usize) -> SpaceBox {
        SpaceBox::unit(dim).unwrap()
    }

    #[test]
    fn halving_map_is_valid() {
        let f = validate_contraction(&unit(1), &[vec![0.5]], &[0.0]).unwrap();
        assert_eq!(f.ratio(), 0.5);
        assert!(f.is_similarity());
        assert_eq!(f.fixed_point(), vec![0.0]);
    }

    #[test]
    fn escaping_map_reports_vertex() {
        let err = validate_contraction(&unit(1), &[vec![0.6]], &[0.5]).unwrap_err();
        match err {
            Error::EscapesSpace { vertex, image } => {
                assert_eq!(vertex, vec![1.0]);
                assert!((image[0] - 1.1).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_is_not_contractive() {
        assert!(matches!(
            validate_contraction(&unit(1), &[vec![1.0]], &[0.0]),
            Err(Error::NotContractive { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            validate_contraction(&unit(2), &[vec![0.5]], &[0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            validate_contraction(&unit(2), &[vec![0.5, 0.0], vec![0.0, 0.5]], &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let f = validate_contraction(&unit(1), &[vec![0.5]], &[0.25]).unwrap();
        assert_eq!(f.apply(&[0.0]).unwrap(), vec![0.25]);
        assert_eq!(f.apply(&[1.0]).unwrap(), vec![0.75]);
        assert!(matches!(f.apply(&[1.5]), Err(Error::PointOutsideSpace(_))));

        let g = validate_contraction(&unit(2), &[vec![0.5, 0.0], vec![0.0, 0.5]], &[0.25, 0.5])
            .unwrap();
        assert_eq!(g.apply(&[1.0, 1.0]).unwrap(), vec![0.75, 1.0]);
    }

    #[test]
    fn shear_is_not_similarity() {
        let f = validate_contraction(&unit(2), &[vec![0.3, 0.2], vec![0.0, 0.3]], &[0.0, 0.0])
            .unwrap();
        assert!(!f.is_similarity());
        let rot = validate_contraction(
            &unit(2),
            &[vec![0.0, -0.4], vec![0.4, 0.0]],
            &[0.5, 0.0],
        )
        .unwrap();
        assert!(rot.is_similarity());
        assert!((rot.ratio() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn scaling_recertifies() {
        let f = validate_contraction(&unit(1), &[vec![0.5]], &[0.0]).unwrap();
        let g = f.scaled((-(2f64).ln()).exp()).unwrap();
        assert!((g.ratio() - 0.25).abs() < 1e-15);
        assert!(g.is_similarity());
    }
}
