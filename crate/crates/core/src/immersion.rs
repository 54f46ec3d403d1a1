//! Pointwise differential geometry of a chart immersion x: U ⊂ R^m → R^k.
//!
//! Everything is reported in the oriented orthonormal frame Z_1..Z_m obtained
//! by Gram–Schmidt of the coordinate tangents in index order.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::fd::{self, ChartBox};
use crate::grassmann::{pluecker_embed, OrientedPlane};
use crate::linalg::{gram_schmidt, max_abs, singular_values_desc, symmetric_eigenvalues};
use crate::multivector::{wedge_columns, MultiVector};

/// Smallest admissible singular value of the jacobian.
pub const REGULARITY_TOL: f64 = 1e-8;

/// Nesting depth of the deepest finite-difference stencil used at a point
/// (metric from a differenced jacobian, Christoffels, their derivatives).
pub const STENCIL_DEPTH: usize = 3;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
/// Returns the k×m matrix whose columns are ∂x/∂u_a.
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
/// Returns ∂²x/∂u_a∂u_b at index `a * m + b`.
pub type HessianFn = Arc<dyn Fn(&[f64]) -> Vec<DVector<f64>> + Send + Sync>;

/// Where an immersion is known to be minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimalIn {
    Euclidean,
    Sphere,
    None,
}

impl fmt::Display for MinimalIn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinimalIn::Euclidean => "euclidean",
            MinimalIn::Sphere => "sphere",
            MinimalIn::None => "none",
        })
    }
}

/// A chart immersion with optional analytic first and second derivatives.
/// Evaluators must be re-entrant; grid scans call them from several threads.
#[derive(Clone)]
pub struct ParametrizedImmersion {
    name: String,
    domain_dim: usize,
    ambient_dim: usize,
    evaluator: Evaluator,
    jacobian: Option<JacobianFn>,
    hessian: Option<HessianFn>,
    chart_domain: ChartBox,
}

impl fmt::Debug for ParametrizedImmersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametrizedImmersion")
            .field("name", &self.name)
            .field("domain_dim", &self.domain_dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .field("chart_domain", &self.chart_domain)
            .finish()
    }
}

impl ParametrizedImmersion {
    pub fn new<F>(
        name: impl Into<String>,
        domain_dim: usize,
        ambient_dim: usize,
        chart_domain: ChartBox,
        evaluator: F,
    ) -> Self
    where
        F: Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    {
        assert_eq!(chart_domain.dim(), domain_dim, "chart box dimension");
        assert!(domain_dim >= 1 && domain_dim <= ambient_dim, "need 1 <= m <= k");
        Self {
            name: name.into(),
            domain_dim,
            ambient_dim,
            evaluator: Arc::new(evaluator),
            jacobian: None,
            hessian: None,
            chart_domain,
        }
    }

    pub fn with_jacobian<F>(mut self, jacobian: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    pub fn with_hessian<F>(mut self, hessian: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<DVector<f64>> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn chart_domain(&self) -> &ChartBox {
        &self.chart_domain
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.jacobian.is_some() && self.hessian.is_some()
    }

    /// True when the deepest stencil at `u` would leave the chart, so one-sided
    /// differences are in use.
    pub fn is_edge(&self, u: &[f64]) -> bool {
        !self.chart_domain.interior(u, STENCIL_DEPTH)
    }

    fn check_point(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.domain_dim {
            return Err(GeometryError::Dimension(format!(
                "{} expects {} parameters, got {}",
                self.name,
                self.domain_dim,
                u.len()
            )));
        }
        if !self.chart_domain.contains(u) {
            return Err(GeometryError::OutsideChart { point: u.to_vec() });
        }
        Ok(())
    }

    pub fn position(&self, u: &[f64]) -> Result<DVector<f64>> {
        self.check_point(u)?;
        Ok((self.evaluator)(u))
    }

    /// Coordinate tangents by central differences of the position.
    pub fn jacobian_fd(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(u)?;
        let eval = |v: &[f64]| self.position(v);
        let cols = (0..self.domain_dim)
            .map(|a| fd::partial(&eval, u, a, &self.chart_domain))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_columns(&cols))
    }

    pub fn jacobian(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(u)?;
        match &self.jacobian {
            Some(j) => Ok(j(u)),
            None => self.jacobian_fd(u),
        }
    }

    /// Second coordinate derivatives by nested central differences.
    pub fn hessian_fd(&self, u: &[f64]) -> Result<Vec<DVector<f64>>> {
        self.check_point(u)?;
        let m = self.domain_dim;
        let jac = |v: &[f64]| -> Result<DVector<f64>> {
            let j = self.jacobian(v)?;
            Ok(DVector::from_column_slice(j.as_slice()))
        };
        let k = self.ambient_dim;
        let mut out = vec![DVector::zeros(k); m * m];
        for a in 0..m {
            let d = fd::partial(&jac, u, a, &self.chart_domain)?;
            for b in 0..m {
                out[a * m + b] = d.rows(b * k, k).clone_owned();
            }
        }
        // Symmetrize: the mixed partials of a smooth map agree.
        for a in 0..m {
            for b in a + 1..m {
                let avg = (&out[a * m + b] + &out[b * m + a]) * 0.5;
                out[a * m + b] = avg.clone();
                out[b * m + a] = avg;
            }
        }
        Ok(out)
    }

    pub fn hessian(&self, u: &[f64]) -> Result<Vec<DVector<f64>>> {
        self.check_point(u)?;
        match &self.hessian {
            Some(h) => Ok(h(u)),
            None => self.hessian_fd(u),
        }
    }

    /// Chart metric g_ab = ⟨∂_a x, ∂_b x⟩.
    pub fn metric(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        let j = self.jacobian(u)?;
        Ok(j.transpose() * j)
    }
}

/// Oriented orthonormal tangent frame together with the triangular factor of
/// the coordinate tangents: `jacobian = frame * r`.
struct FrameFactor {
    frame: DMatrix<f64>,
    r: DMatrix<f64>,
}

fn frame_factor(imm: &ParametrizedImmersion, u: &[f64]) -> Result<FrameFactor> {
    let j = imm.jacobian(u)?;
    let sigma_min = singular_values_desc(&j).last().copied().unwrap_or(0.0);
    if !(sigma_min > REGULARITY_TOL) {
        return Err(GeometryError::IrregularPoint {
            point: u.to_vec(),
            sigma_min,
        });
    }
    let (frame, r) = gram_schmidt(&j).ok_or_else(|| GeometryError::IrregularPoint {
        point: u.to_vec(),
        sigma_min,
    })?;
    Ok(FrameFactor { frame, r })
}

fn upper_inverse(r: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.nrows();
    r.clone()
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .expect("triangular factor with positive diagonal is invertible")
}

/// Gram–Schmidt of ∂x/∂u_1, …, ∂x/∂u_m in index order.
pub fn tangent_frame(imm: &ParametrizedImmersion, u: &[f64]) -> Result<OrientedPlane> {
    let ff = frame_factor(imm, u)?;
    OrientedPlane::new(ff.frame)
}

/// Per-point package of first and second order data, frame components.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub point: Vec<f64>,
    pub position: DVector<f64>,
    pub frame: OrientedPlane,
    /// Chart metric g_ab.
    pub metric: DMatrix<f64>,
    /// Change of basis from frame to coordinate tangents: Z_a = Σ_c coframe[(c, a)] ∂_c.
    pub coframe: DMatrix<f64>,
    /// B(Z_a, Z_b) at index `a * m + b`.
    pub second_form: Vec<DVector<f64>>,
    /// trB = Σ_a B(Z_a, Z_a).
    pub mean_curvature: DVector<f64>,
}

impl FundamentalData {
    pub fn dim(&self) -> usize {
        self.frame.plane_dim()
    }

    pub fn b(&self, a: usize, b: usize) -> &DVector<f64> {
        &self.second_form[a * self.dim() + b]
    }

    /// B(X, Z_i) for X = Σ_a x_a Z_a.
    pub fn b_along(&self, x: &[f64], i: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.position.len());
        for (a, xa) in x.iter().enumerate() {
            out.axpy(*xa, self.b(a, i), 1.0);
        }
        out
    }

    /// Largest |B_ab − B_ba| and |⟨B_ab, Z_c⟩| (symmetry and normality defects).
    pub fn defects(&self) -> (f64, f64) {
        let m = self.dim();
        let z = self.frame.basis();
        let mut sym = 0.0_f64;
        let mut normal = 0.0_f64;
        for a in 0..m {
            for b in 0..m {
                sym = sym.max((self.b(a, b) - self.b(b, a)).amax());
                for c in 0..m {
                    normal = normal.max(self.b(a, b).dot(&z.column(c)).abs());
                }
            }
        }
        (sym, normal)
    }
}

/// Second fundamental form from the coordinate hessian projected onto the
/// normal space, rewritten in the orthonormal frame.
pub fn fundamental_data(imm: &ParametrizedImmersion, u: &[f64]) -> Result<FundamentalData> {
    let FrameFactor { frame, r } = frame_factor(imm, u)?;
    let position = imm.position(u)?;
    let hess = imm.hessian(u)?;
    let m = imm.domain_dim();
    let k = imm.ambient_dim();
    let coframe = upper_inverse(&r);
    let normal_projector = DMatrix::<f64>::identity(k, k) - &frame * frame.transpose();
    let coord_b: Vec<DVector<f64>> = hess.iter().map(|h| &normal_projector * h).collect();

    let mut second_form = vec![DVector::zeros(k); m * m];
    for a in 0..m {
        for b in 0..m {
            let mut acc = DVector::zeros(k);
            for c in 0..m {
                for d in 0..m {
                    let w = coframe[(c, a)] * coframe[(d, b)];
                    if w != 0.0 {
                        acc.axpy(w, &coord_b[c * m + d], 1.0);
                    }
                }
            }
            second_form[a * m + b] = acc;
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let avg = (&second_form[a * m + b] + &second_form[b * m + a]) * 0.5;
            second_form[a * m + b] = avg.clone();
            second_form[b * m + a] = avg;
        }
    }
    let mut mean_curvature = DVector::zeros(k);
    for a in 0..m {
        mean_curvature += &second_form[a * m + a];
    }
    Ok(FundamentalData {
        point: u.to_vec(),
        position,
        metric: r.transpose() * &r,
        frame: OrientedPlane::new(frame)?,
        coframe,
        second_form,
        mean_curvature,
    })
}

/// Ricci tensor in orthonormal-frame components.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciTensor {
    components: DMatrix<f64>,
}

impl RicciTensor {
    pub fn new(components: DMatrix<f64>) -> Self {
        let sym = (&components + components.transpose()) * 0.5;
        Self { components: sym }
    }

    pub fn components(&self) -> &DMatrix<f64> {
        &self.components
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.components)
    }

    pub fn max_abs_diff(&self, other: &RicciTensor) -> f64 {
        max_abs(&(&self.components - &other.components))
    }
}

/// Gauss equation: Ric(Z_a, Z_b) = ⟨B_ab, trB⟩ − Σ_c ⟨B_ac, B_bc⟩.
pub fn ricci_extrinsic(fd: &FundamentalData) -> RicciTensor {
    let m = fd.dim();
    let ric = DMatrix::from_fn(m, m, |a, b| {
        let cross: f64 = (0..m).map(|c| fd.b(a, c).dot(fd.b(b, c))).sum();
        fd.b(a, b).dot(&fd.mean_curvature) - cross
    });
    RicciTensor::new(ric)
}

fn christoffel(imm: &ParametrizedImmersion, u: &[f64]) -> Result<DVector<f64>> {
    // Γ^i_jk at index (i * m + j) * m + k.
    let m = imm.domain_dim();
    let metric_flat = |v: &[f64]| -> Result<DVector<f64>> {
        let g = imm.metric(v)?;
        Ok(DVector::from_column_slice(g.as_slice()))
    };
    let g = imm.metric(u)?;
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeometryError::IrregularPoint {
            point: u.to_vec(),
            sigma_min: 0.0,
        })?;
    let dg: Vec<DMatrix<f64>> = (0..m)
        .map(|c| {
            fd::partial(&metric_flat, u, c, imm.chart_domain())
                .map(|d| DMatrix::from_column_slice(m, m, d.as_slice()))
        })
        .collect::<Result<_>>()?;
    let mut gamma = DVector::zeros(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut acc = 0.0;
                for l in 0..m {
                    acc += g_inv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                }
                gamma[(i * m + j) * m + k] = 0.5 * acc;
            }
        }
    }
    Ok(gamma)
}

/// Ricci tensor from the chart metric alone: Christoffel symbols from central
/// differences of g_ab, curvature from the coordinate formula
/// R_bd = ∂_a Γ^a_db − ∂_d Γ^a_ab + Γ^a_ae Γ^e_db − Γ^a_de Γ^e_ab,
/// then converted to the orthonormal frame through the Cholesky factor of g.
pub fn ricci_intrinsic(imm: &ParametrizedImmersion, u: &[f64]) -> Result<RicciTensor> {
    let m = imm.domain_dim();
    frame_factor(imm, u)?;
    let idx = |i: usize, j: usize, k: usize| (i * m + j) * m + k;
    let gamma = christoffel(imm, u)?;
    let chris = |v: &[f64]| christoffel(imm, v);
    let dgamma: Vec<DVector<f64>> = (0..m)
        .map(|c| fd::partial(&chris, u, c, imm.chart_domain()))
        .collect::<Result<_>>()?;

    let mut ric = DMatrix::zeros(m, m);
    for b in 0..m {
        for d in 0..m {
            let mut acc = 0.0;
            for a in 0..m {
                acc += dgamma[a][idx(a, d, b)] - dgamma[d][idx(a, a, b)];
                for e in 0..m {
                    acc += gamma[idx(a, a, e)] * gamma[idx(e, d, b)]
                        - gamma[idx(a, d, e)] * gamma[idx(e, a, b)];
                }
            }
            ric[(b, d)] = acc;
        }
    }
    let g = imm.metric(u)?;
    let chol = g.cholesky().ok_or_else(|| GeometryError::IrregularPoint {
        point: u.to_vec(),
        sigma_min: 0.0,
    })?;
    let coframe = upper_inverse(&chol.l().transpose());
    Ok(RicciTensor::new(coframe.transpose() * ric * coframe))
}

/// First Gauss map φ = Z_1 ∧ … ∧ Z_m.
pub fn gauss_map(imm: &ParametrizedImmersion, u: &[f64]) -> Result<MultiVector> {
    Ok(pluecker_embed(&tangent_frame(imm, u)?))
}

/// φ_*(X) = Σ_i Z_1 ∧ … ∧ B(X, Z_i) ∧ … ∧ Z_m, with X given in frame components.
pub fn gauss_map_differential_derivation(fd: &FundamentalData, x: &[f64]) -> MultiVector {
    let m = fd.dim();
    let z = fd.frame.basis();
    let mut out = MultiVector::zeros(z.nrows(), m);
    for i in 0..m {
        let mut cols = z.clone();
        cols.set_column(i, &fd.b_along(x, i));
        out = out
            .add_scaled(&wedge_columns(&cols), 1.0)
            .expect("same grade and ambient dimension");
    }
    out
}

/// dφ(Z_a) by central differences of φ along the coordinate curves,
/// recombined with the coframe.
pub fn gauss_map_differential_fd(
    imm: &ParametrizedImmersion,
    u: &[f64],
    x: &[f64],
) -> Result<MultiVector> {
    let ff = frame_factor(imm, u)?;
    let coframe = upper_inverse(&ff.r);
    let m = imm.domain_dim();
    let phi = |v: &[f64]| -> Result<DVector<f64>> {
        Ok(DVector::from_column_slice(gauss_map(imm, v)?.coords()))
    };
    let partials: Vec<DVector<f64>> = (0..m)
        .map(|c| fd::partial(&phi, u, c, imm.chart_domain()))
        .collect::<Result<_>>()?;
    let mut acc = DVector::zeros(partials[0].len());
    for c in 0..m {
        let weight: f64 = (0..m).map(|a| coframe[(c, a)] * x[a]).sum();
        acc.axpy(weight, &partials[c], 1.0);
    }
    MultiVector::new(imm.ambient_dim(), m, acc.as_slice().to_vec())
}

fn unit(m: usize, a: usize) -> Vec<f64> {
    (0..m).map(|i| if i == a { 1.0 } else { 0.0 }).collect()
}

/// ⟨φ_*(Z_a), φ_*(Z_b)⟩ from the derivation formula.
pub fn pullback_metric_phi_from(fd: &FundamentalData) -> DMatrix<f64> {
    let m = fd.dim();
    let diffs: Vec<MultiVector> = (0..m)
        .map(|a| gauss_map_differential_derivation(fd, &unit(m, a)))
        .collect();
    DMatrix::from_fn(m, m, |a, b| diffs[a].inner(&diffs[b]).expect("same shape"))
}

pub fn pullback_metric_phi(imm: &ParametrizedImmersion, u: &[f64]) -> Result<DMatrix<f64>> {
    Ok(pullback_metric_phi_from(&fundamental_data(imm, u)?))
}

/// ⟨B(Z_a, Z_b), trB⟩ − Ric(Z_a, Z_b).
pub fn lemma_phi_rhs(fd: &FundamentalData, ric: &RicciTensor) -> DMatrix<f64> {
    let m = fd.dim();
    DMatrix::from_fn(m, m, |a, b| {
        fd.b(a, b).dot(&fd.mean_curvature) - ric.components()[(a, b)]
    })
}

/// Largest deviation between the derivation formula and finite differences of
/// φ over the frame directions.
pub fn derivation_fd_residual(
    imm: &ParametrizedImmersion,
    fd: &FundamentalData,
) -> Result<f64> {
    let m = fd.dim();
    let mut worst = 0.0_f64;
    for a in 0..m {
        let x = unit(m, a);
        let formula = gauss_map_differential_derivation(fd, &x);
        let numeric = gauss_map_differential_fd(imm, &fd.point, &x)?;
        worst = worst.max(formula.max_abs_diff(&numeric)?);
    }
    Ok(worst)
}
