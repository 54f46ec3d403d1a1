//! Submanifolds M^m of the unit sphere N = S^{k-1} ⊂ R^k: the split of the
//! second fundamental form, the second Gauss map ψ and its pullback metric.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::fd;
use crate::immersion::{fundamental_data, ricci_extrinsic, FundamentalData, ParametrizedImmersion};
use crate::linalg::gram_schmidt;
use crate::multivector::{wedge_columns, MultiVector};

/// Allowed ||x| − 1|.
pub const ON_SPHERE_TOL: f64 = 1e-10;
/// Allowed |⟨∂x/∂u_a, x⟩|.
pub const TANGENCY_TOL: f64 = 1e-8;

/// An immersion whose image lies on the unit sphere of its ambient space.
#[derive(Debug, Clone)]
pub struct NestedImmersion {
    inner: ParametrizedImmersion,
}

impl NestedImmersion {
    /// Requires a normal space of M inside T(S^{k-1}) of positive dimension.
    pub fn new(inner: ParametrizedImmersion) -> Result<Self> {
        if inner.domain_dim() + 2 > inner.ambient_dim() {
            return Err(GeometryError::Dimension(format!(
                "{}: need m + 2 <= k for a nontrivial normal space in the sphere",
                inner.name()
            )));
        }
        Ok(Self { inner })
    }

    pub fn inner(&self) -> &ParametrizedImmersion {
        &self.inner
    }

    pub fn m(&self) -> usize {
        self.inner.domain_dim()
    }

    pub fn k(&self) -> usize {
        self.inner.ambient_dim()
    }

    /// Codimension of M in N = S^{k-1}.
    pub fn n(&self) -> usize {
        self.k() - 1 - self.m()
    }

    /// r = k − n.
    pub fn r(&self) -> usize {
        self.k() - self.n()
    }

    /// Checks |x| = 1 and tangency of the coordinate tangents to the sphere.
    pub fn check_point(&self, u: &[f64]) -> Result<()> {
        let x = self.inner.position(u)?;
        let deviation = x.norm() - 1.0;
        if deviation.abs() > ON_SPHERE_TOL {
            return Err(GeometryError::NotOnUnitSphere {
                point: u.to_vec(),
                deviation,
            });
        }
        let j = self.inner.jacobian(u)?;
        let radial = (j.transpose() * &x).amax();
        if radial > TANGENCY_TOL {
            return Err(GeometryError::NotOnUnitSphere {
                point: u.to_vec(),
                deviation: radial,
            });
        }
        Ok(())
    }
}

/// B_{M⊆N} as data, B_{N⊆E} as the unit-sphere rule −⟨X, Y⟩ x.
#[derive(Debug, Clone)]
pub struct SecondFormPair {
    pub ambient: FundamentalData,
    /// B_{M⊆N}(Z_a, Z_b) at index `a * m + b`.
    pub b_mn: Vec<DVector<f64>>,
    /// max_ab ‖⟨B_ab, x⟩x + δ_ab x‖: deviation of the radial part from −⟨Z_a, Z_b⟩x.
    pub radial_residual: f64,
}

impl SecondFormPair {
    pub fn m(&self) -> usize {
        self.ambient.dim()
    }

    pub fn position(&self) -> &DVector<f64> {
        &self.ambient.position
    }

    pub fn b_mn(&self, a: usize, b: usize) -> &DVector<f64> {
        &self.b_mn[a * self.m() + b]
    }

    pub fn trace_mn(&self) -> DVector<f64> {
        let m = self.m();
        (0..m).fold(DVector::zeros(self.position().len()), |acc, a| {
            acc + self.b_mn(a, a)
        })
    }

    /// B_{N⊆E}(X, Y) = −⟨X, Y⟩ x.
    pub fn b_ne(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.position() * (-x.dot(y))
    }
}

/// Splits the ambient second fundamental form of M ⊂ R^k into the part
/// tangent to the sphere and the radial part.
pub fn split_second_form(nimm: &NestedImmersion, u: &[f64]) -> Result<SecondFormPair> {
    nimm.check_point(u)?;
    let ambient = fundamental_data(nimm.inner(), u)?;
    let m = ambient.dim();
    let x = &ambient.position;
    let mut radial_residual = 0.0_f64;
    let b_mn = (0..m * m)
        .map(|ab| {
            let (a, b) = (ab / m, ab % m);
            let bab = &ambient.second_form[ab];
            let radial = bab.dot(x);
            let expected = if a == b { -1.0 } else { 0.0 };
            radial_residual = radial_residual.max(((radial - expected) * x).amax());
            bab - x * radial
        })
        .collect();
    Ok(SecondFormPair {
        ambient,
        b_mn,
        radial_residual,
    })
}

/// Normal space of M inside T_x S^{k-1}: an orthonormal V_1..V_n with
/// (x, Z_1..Z_m, V_1..V_n) positively oriented.
pub fn normal_frame(fd: &FundamentalData) -> DMatrix<f64> {
    let k = fd.position.len();
    let m = fd.dim();
    let mut cols: Vec<DVector<f64>> = vec![fd.position.clone()];
    cols.extend(fd.frame.basis().column_iter().map(|c| c.clone_owned()));
    // Complete with the standard basis, most independent directions first.
    let spanned = DMatrix::from_columns(&cols);
    let projector = DMatrix::<f64>::identity(k, k) - &spanned * spanned.transpose();
    let mut candidates: Vec<usize> = (0..k).collect();
    candidates.sort_by(|&i, &j| projector[(j, j)].total_cmp(&projector[(i, i)]));
    for i in candidates {
        if cols.len() == k {
            break;
        }
        let mut trial = cols.clone();
        trial.push(DVector::from_fn(k, |r, _| if r == i { 1.0 } else { 0.0 }));
        if gram_schmidt(&DMatrix::from_columns(&trial)).is_some() {
            cols = trial;
        }
    }
    let (mut q, _) = gram_schmidt(&DMatrix::from_columns(&cols)).expect("completed basis");
    if q.determinant() < 0.0 {
        let flipped = -q.column(k - 1);
        q.set_column(k - 1, &flipped);
    }
    q.columns(m + 1, k - m - 1).clone_owned()
}

/// Second Gauss map ψ: the oriented normal space of M in T(S^{k-1}), as the
/// Hodge complement of x ∧ Z_1 ∧ … ∧ Z_m.
pub fn second_gauss_map(nimm: &NestedImmersion, u: &[f64]) -> Result<MultiVector> {
    nimm.check_point(u)?;
    let fd = fundamental_data(nimm.inner(), u)?;
    second_gauss_map_from(&fd)
}

fn second_gauss_map_from(fd: &FundamentalData) -> Result<MultiVector> {
    let mut cols: Vec<DVector<f64>> = vec![fd.position.clone()];
    cols.extend(fd.frame.basis().column_iter().map(|c| c.clone_owned()));
    let w = wedge_columns(&DMatrix::from_columns(&cols));
    // x ⟂ Z_a and |x| = 1 up to the on-sphere tolerance; remove the residue.
    w.scaled(1.0 / w.norm()).hodge_complement()
}

/// ⟨ψ_*(Z_a), ψ_*(Z_b)⟩ by central differences of ψ. Neighbouring values are
/// sign-aligned with ψ(u) before differencing.
pub fn pullback_metric_psi(nimm: &NestedImmersion, u: &[f64]) -> Result<DMatrix<f64>> {
    nimm.check_point(u)?;
    let imm = nimm.inner();
    let fd0 = fundamental_data(imm, u)?;
    let reference = DVector::from_column_slice(second_gauss_map_from(&fd0)?.coords());
    let psi = |v: &[f64]| -> Result<DVector<f64>> {
        let p = DVector::from_column_slice(second_gauss_map(nimm, v)?.coords());
        Ok(if p.dot(&reference) < 0.0 { -p } else { p })
    };
    let m = nimm.m();
    let partials: Vec<DVector<f64>> = (0..m)
        .map(|c| fd::partial(&psi, u, c, imm.chart_domain()))
        .collect::<Result<_>>()?;
    let along: Vec<DVector<f64>> = (0..m)
        .map(|a| {
            (0..m).fold(DVector::zeros(reference.len()), |acc, c| {
                acc + &partials[c] * fd0.coframe[(c, a)]
            })
        })
        .collect();
    Ok(DMatrix::from_fn(m, m, |a, b| along[a].dot(&along[b])))
}

/// Sign convention for the curvature tensor of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureConvention {
    /// R(X, Y)W = ⟨X, W⟩Y − ⟨Y, W⟩X, so that ⟨R(X, Y)X, Y⟩ = |X ∧ Y|².
    PositiveSectional,
    /// R(X, Y)W = ⟨Y, W⟩X − ⟨X, W⟩Y.
    NegativeSectional,
}

impl CurvatureConvention {
    pub fn apply(
        self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        w: &DVector<f64>,
    ) -> DVector<f64> {
        let v = y * x.dot(w) - x * y.dot(w);
        match self {
            CurvatureConvention::PositiveSectional => v,
            CurvatureConvention::NegativeSectional => -v,
        }
    }
}

/// Right-hand side of the pullback formula for ψ with N the unit sphere,
/// evaluated term by term with an explicit normal frame V_1..V_n:
///
/// ⟨B_MN(X,Y), trB_MN⟩ − Ric(X,Y) + Σ_i ⟨B_NE(X,Y), B_NE(V_i,V_i)⟩
///   + Σ_i ⟨R_N(X,Z_i)Y, Z_i⟩ − Σ_i ⟨R_N(X,V_i)Y, V_i⟩.
pub fn lemma_seclemma_rhs(nimm: &NestedImmersion, u: &[f64]) -> Result<DMatrix<f64>> {
    lemma_seclemma_rhs_with(nimm, u, CurvatureConvention::PositiveSectional)
}

pub fn lemma_seclemma_rhs_with(
    nimm: &NestedImmersion,
    u: &[f64],
    convention: CurvatureConvention,
) -> Result<DMatrix<f64>> {
    let pair = split_second_form(nimm, u)?;
    let ric = ricci_extrinsic(&pair.ambient);
    Ok(seclemma_rhs_from(&pair, ric.components(), convention))
}

pub(crate) fn seclemma_rhs_from(
    pair: &SecondFormPair,
    ric: &DMatrix<f64>,
    convention: CurvatureConvention,
) -> DMatrix<f64> {
    let m = pair.m();
    let z: Vec<DVector<f64>> = pair
        .ambient
        .frame
        .basis()
        .column_iter()
        .map(|c| c.clone_owned())
        .collect();
    let v: Vec<DVector<f64>> = normal_frame(&pair.ambient)
        .column_iter()
        .map(|c| c.clone_owned())
        .collect();
    let tr = pair.trace_mn();
    DMatrix::from_fn(m, m, |a, b| {
        let (xa, yb) = (&z[a], &z[b]);
        let mut total = pair.b_mn(a, b).dot(&tr) - ric[(a, b)];
        let b_xy = pair.b_ne(xa, yb);
        total += v.iter().map(|vi| b_xy.dot(&pair.b_ne(vi, vi))).sum::<f64>();
        total += z
            .iter()
            .map(|zi| convention.apply(xa, zi, yb).dot(zi))
            .sum::<f64>();
        total -= v
            .iter()
            .map(|vi| convention.apply(xa, vi, yb).dot(vi))
            .sum::<f64>();
        total
    })
}

/// (m − 1)·I − Ric in frame components.
pub fn corollary_sphere_rhs(m: usize, ric: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::<f64>::identity(m, m) * (m as f64 - 1.0) - ric
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::ChartBox;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn clifford_fd_only() -> NestedImmersion {
        NestedImmersion::new(ParametrizedImmersion::new(
            "clifford",
            2,
            4,
            ChartBox::unbounded(2),
            |u| {
                DVector::from_vec(vec![u[0].cos(), u[0].sin(), u[1].cos(), u[1].sin()])
                    * FRAC_1_SQRT_2
            },
        ))
        .unwrap()
    }

    #[test]
    fn clifford_torus_psi_at_origin() {
        let nimm = clifford_fd_only();
        let psi = second_gauss_map(&nimm, &[0.0, 0.0]).unwrap();
        assert_eq!(psi.grade(), 1);
        let v = [-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        let dot: f64 = psi.coords().iter().zip(v).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(dot.abs(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn normal_frame_matches_psi() {
        let nimm = clifford_fd_only();
        let u = [0.4, 1.3];
        let fd = fundamental_data(nimm.inner(), &u).unwrap();
        let v = normal_frame(&fd);
        let from_frame = wedge_columns(&v);
        let psi = second_gauss_map(&nimm, &u).unwrap();
        assert_abs_diff_eq!(from_frame.inner(&psi).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn off_sphere_points_are_rejected() {
        let nimm = NestedImmersion::new(ParametrizedImmersion::new(
            "scaled",
            1,
            3,
            ChartBox::unbounded(1),
            |u| DVector::from_vec(vec![2.0 * u[0].cos(), 2.0 * u[0].sin(), 0.0]),
        ))
        .unwrap();
        assert!(matches!(
            split_second_form(&nimm, &[0.1]),
            Err(GeometryError::NotOnUnitSphere { .. })
        ));
    }

    #[test]
    fn hypersphere_of_sphere_has_no_second_gauss_map() {
        let whole = ParametrizedImmersion::new("s2", 2, 3, ChartBox::unbounded(2), |u| {
            DVector::from_vec(vec![
                u[0].cos() * u[1].cos(),
                u[0].sin() * u[1].cos(),
                u[1].sin(),
            ])
        });
        assert!(NestedImmersion::new(whole).is_err());
    }
}
