//! Oriented Grassmannian kernels: overlap matrices, principal cosines, the
//! canonical distance d_c, the spherical distance d_s and the Plücker embedding.
//!
//! Principal angles are recovered from cosines (singular values of the overlap
//! matrix) when they are large and from sines (singular values of the
//! component of Q orthogonal to P) when they are small, so that both distances
//! stay accurate near coincident planes.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GeometryError, Result};
use crate::linalg::{gram_schmidt, singular_values_desc};
use crate::multivector::{wedge_columns, MultiVector};

/// Orthonormality tolerance for plane bases.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// An oriented m-plane in R^k, represented by an ordered orthonormal basis
/// stored as the columns of a k×m matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPlane {
    basis: DMatrix<f64>,
}

impl OrientedPlane {
    /// Wraps an orthonormal basis (columns). Rejects bases that are not
    /// orthonormal to [`ORTHONORMAL_TOL`].
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (k, m) = basis.shape();
        if m == 0 || m > k {
            return Err(GeometryError::InvalidPlane(format!(
                "plane dimension {m} not in 1..={k}"
            )));
        }
        let gram = basis.transpose() * &basis;
        let dev = (gram - DMatrix::<f64>::identity(m, m)).abs().max();
        if !(dev <= ORTHONORMAL_TOL) {
            return Err(GeometryError::InvalidPlane(format!(
                "basis is not orthonormal (max |<b_i,b_j> - δ_ij| = {dev:e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormalizes a spanning set (columns) by Gram–Schmidt in column
    /// order. The orientation of the spanning set is kept.
    pub fn orthonormalized(spanning: &DMatrix<f64>) -> Result<Self> {
        let (k, m) = spanning.shape();
        if m == 0 || m > k {
            return Err(GeometryError::InvalidPlane(format!(
                "plane dimension {m} not in 1..={k}"
            )));
        }
        let (q, _) = gram_schmidt(spanning)
            .ok_or_else(|| GeometryError::InvalidPlane("spanning vectors are dependent".into()))?;
        Self::new(q)
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let cols = vectors
            .iter()
            .map(|v| DVector::from_column_slice(v))
            .collect::<Vec<_>>();
        let Some(first) = cols.first() else {
            return Err(GeometryError::InvalidPlane("empty basis".into()));
        };
        if cols.iter().any(|c| c.len() != first.len()) {
            return Err(GeometryError::InvalidPlane("basis vectors differ in length".into()));
        }
        Self::new(DMatrix::from_columns(&cols))
    }

    /// Like `from_vectors`, but orthonormalizes the vectors first.
    pub fn from_spanning_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(GeometryError::InvalidPlane("empty basis".into()));
        };
        if vectors.iter().any(|c| c.len() != first.len()) {
            return Err(GeometryError::InvalidPlane("basis vectors differ in length".into()));
        }
        let cols: Vec<DVector<f64>> = vectors.iter().map(|v| DVector::from_column_slice(v)).collect();
        Self::orthonormalized(&DMatrix::from_columns(&cols))
    }

    /// Haar-distributed random plane: orthonormalized standard-normal matrix.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, plane_dim: usize, ambient_dim: usize) -> Self {
        loop {
            let a = DMatrix::<f64>::from_fn(ambient_dim, plane_dim, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            });
            if let Ok(plane) = Self::orthonormalized(&a) {
                return plane;
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn plane_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Same subspace, basis vectors `i` and `j` exchanged (opposite orientation).
    pub fn with_swapped(&self, i: usize, j: usize) -> Self {
        let mut basis = self.basis.clone();
        basis.swap_columns(i, j);
        Self { basis }
    }

    /// Same oriented plane expressed in the rotated basis `basis * rotation`.
    /// `rotation` must be special orthogonal for the orientation to be kept.
    pub fn rebased(&self, rotation: &DMatrix<f64>) -> Result<Self> {
        Self::new(&self.basis * rotation)
    }
}

fn check_compatible(p: &OrientedPlane, q: &OrientedPlane) -> Result<()> {
    if p.ambient_dim() != q.ambient_dim() || p.plane_dim() != q.plane_dim() {
        return Err(GeometryError::IncompatiblePlanes(format!(
            "{}-plane in R^{} vs {}-plane in R^{}",
            p.plane_dim(),
            p.ambient_dim(),
            q.plane_dim(),
            q.ambient_dim()
        )));
    }
    Ok(())
}

/// α_ij = ⟨P.basis_i, Q.basis_j⟩.
pub fn overlap_matrix(p: &OrientedPlane, q: &OrientedPlane) -> Result<DMatrix<f64>> {
    check_compatible(p, q)?;
    Ok(p.basis.transpose() * &q.basis)
}

/// Cosines of the principal angles, sorted descending and clamped to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCosines {
    values: Vec<f64>,
}

impl PrincipalCosines {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}

/// Singular values of the overlap matrix (square roots of the eigenvalues of αα^T).
pub fn principal_cosines(p: &OrientedPlane, q: &OrientedPlane) -> Result<PrincipalCosines> {
    let alpha = overlap_matrix(p, q)?;
    let values = singular_values_desc(&alpha)
        .into_iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    Ok(PrincipalCosines { values })
}

/// Principal angles in [0, π/2], ascending.
pub fn principal_angles(p: &OrientedPlane, q: &OrientedPlane) -> Result<Vec<f64>> {
    let cosines = principal_cosines(p, q)?;
    let residual = &q.basis - &p.basis * overlap_matrix(p, q)?;
    let mut sines: Vec<f64> = singular_values_desc(&residual)
        .into_iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    sines.reverse();
    Ok(cosines
        .values
        .iter()
        .zip(&sines)
        .map(|(&c, &s)| if c * c < 0.5 { c.acos() } else { s.asin() })
        .collect())
}

/// d_c(P, Q) = √(Σ arccos² λ_i). Orientation-blind: opposite orientations of
/// one subspace are at distance 0.
pub fn canonical_distance(p: &OrientedPlane, q: &OrientedPlane) -> Result<f64> {
    Ok(principal_angles(p, q)?
        .iter()
        .map(|t| t * t)
        .sum::<f64>()
        .sqrt())
}

/// d_s(P, Q) = arccos(Π λ_i), in [0, π/2].
pub fn spherical_distance(p: &OrientedPlane, q: &OrientedPlane) -> Result<f64> {
    Ok(spherical_distance_from_angles(&principal_angles(p, q)?))
}

/// arccos(Π cos θ_i), computed as atan2(√(1 − c²), c) with 1 − c² formed
/// from the sines so that small distances keep full precision.
pub fn spherical_distance_from_angles(angles: &[f64]) -> f64 {
    let c: f64 = angles.iter().map(|t| t.cos()).product();
    let log_c2: f64 = angles.iter().map(|t| (-t.sin().powi(2)).ln_1p()).sum();
    let one_minus_c2 = (-log_c2.exp_m1()).max(0.0);
    one_minus_c2.sqrt().atan2(c.max(0.0))
}

/// Plücker embedding ρ⁻¹: the unit multivector basis_1 ∧ … ∧ basis_m.
pub fn pluecker_embed(p: &OrientedPlane) -> MultiVector {
    wedge_columns(&p.basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn e(k: usize, i: usize) -> Vec<f64> {
        (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()
    }

    fn plane(vs: &[Vec<f64>]) -> OrientedPlane {
        OrientedPlane::from_vectors(vs).unwrap()
    }

    fn tilted() -> Vec<f64> {
        vec![0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]
    }

    #[test]
    fn overlap_examples() {
        let p = plane(&[e(4, 0), e(4, 1)]);
        assert_eq!(overlap_matrix(&p, &p).unwrap(), DMatrix::identity(2, 2));
        let q = plane(&[e(4, 2), e(4, 3)]);
        assert_eq!(overlap_matrix(&p, &q).unwrap(), DMatrix::zeros(2, 2));
        let q = plane(&[e(4, 0), tilted()]);
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, FRAC_1_SQRT_2]);
        assert_abs_diff_eq!(overlap_matrix(&p, &q).unwrap(), expected, epsilon = 1e-16);
    }

    #[test]
    fn incompatible_planes_are_rejected() {
        let p = plane(&[e(4, 0), e(4, 1)]);
        let q = plane(&[e(4, 0)]);
        let r = plane(&[e(3, 0), e(3, 1)]);
        for other in [&q, &r] {
            assert!(matches!(
                overlap_matrix(&p, other),
                Err(GeometryError::IncompatiblePlanes(_))
            ));
            assert!(canonical_distance(&p, other).is_err());
            assert!(spherical_distance(&p, other).is_err());
        }
    }

    #[test]
    fn cosine_examples() {
        let p = plane(&[e(4, 0), e(4, 1)]);
        assert_eq!(principal_cosines(&p, &p).unwrap().values(), &[1.0, 1.0]);
        let q = plane(&[e(4, 2), e(4, 3)]);
        assert_eq!(principal_cosines(&p, &q).unwrap().values(), &[0.0, 0.0]);
        let q = plane(&[e(4, 0), tilted()]);
        let c = principal_cosines(&p, &q).unwrap();
        assert_abs_diff_eq!(c.values()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.values()[1], FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = plane(&[e(4, 0), e(4, 1)]);
        assert_eq!(canonical_distance(&p, &p.with_swapped(0, 1)).unwrap(), 0.0);
        assert_eq!(spherical_distance(&p, &p).unwrap(), 0.0);

        let q = plane(&[e(4, 2), e(4, 3)]);
        assert_abs_diff_eq!(canonical_distance(&p, &q).unwrap(), PI / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(spherical_distance(&p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-15);

        let q = plane(&[e(4, 0), tilted()]);
        assert_abs_diff_eq!(canonical_distance(&p, &q).unwrap(), FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(spherical_distance(&p, &q).unwrap(), FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn pluecker_examples() {
        let p = plane(&[e(3, 0), e(3, 1)]);
        assert_eq!(pluecker_embed(&p).coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(pluecker_embed(&p.with_swapped(0, 1)).coords(), &[-1.0, 0.0, 0.0]);
        let q = plane(&[e(3, 0), vec![0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]]);
        let coords = pluecker_embed(&q).coords().to_vec();
        assert_abs_diff_eq!(coords[0], FRAC_1_SQRT_2, epsilon = 1e-16);
        assert_abs_diff_eq!(coords[1], FRAC_1_SQRT_2, epsilon = 1e-16);
        assert_abs_diff_eq!(coords[2], 0.0);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        assert!(OrientedPlane::from_vectors(&[vec![1.0, 0.0, 0.0], vec![0.5, 1.0, 0.0]]).is_err());
        assert!(OrientedPlane::orthonormalized(&DMatrix::from_row_slice(
            3,
            2,
            &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0]
        ))
        .is_err());
    }

    #[test]
    fn multivector_serializes_as_array() {
        let p = plane(&[e(3, 0), e(3, 2)]);
        let json = serde_json::to_string(&pluecker_embed(&p)).unwrap();
        assert_eq!(json, "[0.0,1.0,0.0]");
    }
}
