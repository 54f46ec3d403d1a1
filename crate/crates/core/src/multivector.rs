//! Grade-m multivectors in Λ^m R^k, stored in the lexicographic basis
//! e_{i_1}∧…∧e_{i_m} with i_1 < … < i_m.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::error::{GeometryError, Result};

/// Allowed deviation of ‖u‖ from 1 for inputs that must live on the unit sphere.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// Number of strictly increasing m-tuples drawn from 0..k.
pub fn binomial(k: usize, m: usize) -> usize {
    if m > k {
        return 0;
    }
    let m = m.min(k - m);
    (0..m).fold(1usize, |acc, i| acc * (k - i) / (i + 1))
}

/// Strictly increasing multi-indices of length `m` over `0..k`, in lexicographic order.
pub fn multi_indices(k: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..k).combinations(m)
}

/// Position of a strictly increasing multi-index in the lexicographic basis.
pub fn multi_index_position(k: usize, index: &[usize]) -> usize {
    // Count the tuples that precede `index` lexicographically.
    let m = index.len();
    let mut pos = 0;
    let mut start = 0;
    for (slot, &i) in index.iter().enumerate() {
        for skipped in start..i {
            pos += binomial(k - skipped - 1, m - slot - 1);
        }
        start = i + 1;
    }
    pos
}

/// Sign of the permutation that sorts `seq` (entries distinct).
fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// An element of Λ^grade R^ambient_dim.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector {
    ambient_dim: usize,
    grade: usize,
    coords: Vec<f64>,
}

impl Serialize for MultiVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl MultiVector {
    pub fn new(ambient_dim: usize, grade: usize, coords: Vec<f64>) -> Result<Self> {
        if grade == 0 || grade > ambient_dim {
            return Err(GeometryError::Dimension(format!(
                "grade {grade} is not in 1..={ambient_dim}"
            )));
        }
        let expected = binomial(ambient_dim, grade);
        if coords.len() != expected {
            return Err(GeometryError::Dimension(format!(
                "expected {expected} coordinates for grade {grade} in R^{ambient_dim}, got {}",
                coords.len()
            )));
        }
        Ok(Self {
            ambient_dim,
            grade,
            coords,
        })
    }

    pub fn zeros(ambient_dim: usize, grade: usize) -> Self {
        Self {
            ambient_dim,
            grade,
            coords: vec![0.0; binomial(ambient_dim, grade)],
        }
    }

    /// The basis element e_{i_1}∧…∧e_{i_m} (indices zero-based, strictly increasing).
    pub fn basis(ambient_dim: usize, index: &[usize]) -> Result<Self> {
        if index.windows(2).any(|w| w[0] >= w[1]) || index.iter().any(|&i| i >= ambient_dim) {
            return Err(GeometryError::Dimension(format!(
                "{index:?} is not a strictly increasing multi-index below {ambient_dim}"
            )));
        }
        let mut mv = Self::zeros(ambient_dim, index.len());
        mv.coords[multi_index_position(ambient_dim, index)] = 1.0;
        Ok(mv)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim || self.grade != other.grade {
            return Err(GeometryError::IncompatibleMultiVectors(format!(
                "Λ^{} R^{} vs Λ^{} R^{}",
                self.grade, self.ambient_dim, other.grade, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Canonical inner product on Λ^m R^k. On decomposable elements this is
    /// det⟨ξ_i, ζ_j⟩.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + factor * b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.add_scaled(other, -1.0)?.norm())
    }

    /// Sup-norm of the coordinate difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_unit(&self) -> Result<()> {
        let deviation = (self.norm() - 1.0).abs();
        if deviation > UNIT_NORM_TOL {
            return Err(GeometryError::NotOnSphere { deviation });
        }
        Ok(())
    }

    /// Oriented orthogonal complement of a unit decomposable multivector,
    /// signed so that `self ∧ complement = +e_1∧…∧e_k`.
    pub fn hodge_complement(&self) -> Result<Self> {
        self.check_unit()?;
        let k = self.ambient_dim;
        let g = self.grade;
        if g >= k {
            return Err(GeometryError::Dimension(format!(
                "complement of grade {g} in R^{k} is empty"
            )));
        }
        let mut out = Self::zeros(k, k - g);
        for (pos, index) in multi_indices(k, g).enumerate() {
            let complement: Vec<usize> = (0..k).filter(|i| !index.contains(i)).collect();
            let joined: Vec<usize> = index.iter().chain(&complement).copied().collect();
            let target = multi_index_position(k, &complement);
            out.coords[target] = permutation_sign(&joined) * self.coords[pos];
        }
        Ok(out)
    }
}

/// Exterior product v_1∧…∧v_m of the columns of a k×m matrix. Each coordinate
/// is the determinant of the m×m minor on the corresponding rows.
pub fn wedge_columns(vectors: &DMatrix<f64>) -> MultiVector {
    let (k, m) = vectors.shape();
    let coords = multi_indices(k, m)
        .map(|rows| {
            let minor = DMatrix::from_fn(m, m, |i, j| vectors[(rows[i], j)]);
            minor.determinant()
        })
        .collect();
    MultiVector {
        ambient_dim: k,
        grade: m,
        coords,
    }
}

/// Exterior product of a list of vectors in R^k.
pub fn wedge(vectors: &[DVector<f64>]) -> Result<MultiVector> {
    let Some(first) = vectors.first() else {
        return Err(GeometryError::Dimension("empty wedge".into()));
    };
    let k = first.len();
    if vectors.iter().any(|v| v.len() != k) || vectors.len() > k {
        return Err(GeometryError::Dimension(format!(
            "cannot wedge {} vectors of mixed or excessive length in R^{k}",
            vectors.len()
        )));
    }
    Ok(wedge_columns(&DMatrix::from_columns(vectors)))
}

/// Great-circle distance between unit multivectors on S^μ ⊂ Λ^m R^k.
///
/// Evaluated as 2·atan2(‖u − v‖, ‖u + v‖), which equals arccos⟨u, v⟩ on the
/// sphere but keeps full precision near 0 and π.
pub fn sphere_distance_embedded(u: &MultiVector, v: &MultiVector) -> Result<f64> {
    u.check_shape(v)?;
    u.check_unit()?;
    v.check_unit()?;
    let diff = u.add_scaled(v, -1.0)?.norm();
    let sum = u.add_scaled(v, 1.0)?.norm();
    Ok(2.0 * diff.atan2(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn e(k: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(k, |j, _| if j == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn positions_follow_lexicographic_order() {
        for (k, m) in [(3, 1), (4, 2), (5, 3), (6, 3)] {
            for (pos, idx) in multi_indices(k, m).enumerate() {
                assert_eq!(multi_index_position(k, &idx), pos, "{idx:?}");
            }
        }
    }

    #[test]
    fn lambda_inner_examples() {
        let e12 = wedge(&[e(3, 0), e(3, 1)]).unwrap();
        let e21 = wedge(&[e(3, 1), e(3, 0)]).unwrap();
        assert_abs_diff_eq!(e12.inner(&e12).unwrap(), 1.0);
        assert_abs_diff_eq!(e12.inner(&e21).unwrap(), -1.0);
        let tilted = (e(3, 1) + e(3, 2)) * FRAC_1_SQRT_2;
        let u = wedge(&[e(3, 0), tilted]).unwrap();
        assert_abs_diff_eq!(e12.inner(&u).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn inner_rejects_mismatched_shapes() {
        let a = MultiVector::zeros(3, 2);
        let b = MultiVector::zeros(4, 2);
        assert!(matches!(
            a.inner(&b),
            Err(GeometryError::IncompatibleMultiVectors(_))
        ));
        assert!(MultiVector::new(3, 2, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn embedded_distance_examples() {
        let e12 = MultiVector::basis(3, &[0, 1]).unwrap();
        let e13 = MultiVector::basis(3, &[0, 2]).unwrap();
        assert_eq!(sphere_distance_embedded(&e12, &e12).unwrap(), 0.0);
        assert_abs_diff_eq!(
            sphere_distance_embedded(&e12, &e12.scaled(-1.0)).unwrap(),
            PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            sphere_distance_embedded(&e12, &e13).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        assert!(matches!(
            sphere_distance_embedded(&e12, &e13.scaled(1.1)),
            Err(GeometryError::NotOnSphere { .. })
        ));
    }

    #[test]
    fn hodge_examples() {
        let e12 = MultiVector::basis(3, &[0, 1]).unwrap();
        assert_eq!(e12.hodge_complement().unwrap().coords(), &[0.0, 0.0, 1.0]);
        let e13 = MultiVector::basis(3, &[0, 2]).unwrap();
        assert_eq!(e13.hodge_complement().unwrap().coords(), &[0.0, -1.0, 0.0]);
        let e12_r4 = MultiVector::basis(4, &[0, 1]).unwrap();
        assert_eq!(
            e12_r4.hodge_complement().unwrap(),
            MultiVector::basis(4, &[2, 3]).unwrap()
        );
        assert!(e12.scaled(2.0).hodge_complement().is_err());
    }

    #[test]
    fn wedge_with_complement_is_volume_form() {
        let k = 5;
        let a = DVector::from_vec(vec![0.3, -0.2, 0.5, 0.1, 0.7]);
        let b = DVector::from_vec(vec![-0.4, 0.9, 0.0, 0.3, 0.2]);
        let w = wedge(&[a, b]).unwrap();
        let w = w.scaled(1.0 / w.norm());
        let c = w.hodge_complement().unwrap();
        // Reassemble w ∧ c coordinate-wise on the top basis element.
        let mut top = 0.0;
        for (pi, i) in multi_indices(k, 2).enumerate() {
            for (pj, j) in multi_indices(k, 3).enumerate() {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let joined: Vec<usize> = i.iter().chain(&j).copied().collect();
                top += permutation_sign(&joined) * w.coords()[pi] * c.coords()[pj];
            }
        }
        assert_abs_diff_eq!(top, 1.0, epsilon = 1e-12);
    }
}
