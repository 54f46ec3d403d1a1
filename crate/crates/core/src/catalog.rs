//! Built-in immersions with analytic derivatives and closed-form oracles.
//!
//! | name              | chart                                        | minimal in |
//! |-------------------|----------------------------------------------|------------|
//! | plane             | (u, v, 0)                                    | euclidean  |
//! | catenoid          | (cosh v cos u, cosh v sin u, v)              | euclidean  |
//! | helicoid          | (v cos u, v sin u, u)                        | euclidean  |
//! | enneper           | (u − u³/3 + uv², −v + v³/3 − vu², u² − v²)   | euclidean  |
//! | holo_z2           | z ↦ (z, z²) in R⁴                            | euclidean  |
//! | round_sphere      | unit S² ⊂ R³, longitude/latitude             | none       |
//! | great_sphere      | S² ⊂ S³ ⊂ R⁴ (totally geodesic)              | sphere     |
//! | clifford_torus    | (cos u, sin u, cos v, sin v)/√2 ⊂ S³         | sphere     |
//! | flat_torus(a)     | (a cos u, a sin u, b cos v, b sin v), a²+b²=1| sphere iff a = 1/√2 |
//! | great_circle      | equator of S²                                | sphere     |
//! | small_circle(θ)   | latitude θ circle of S²                      | none       |

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_6, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::fd::ChartBox;
use crate::grid::Grid;
use crate::immersion::{
    fundamental_data, ricci_extrinsic, ricci_intrinsic, MinimalIn, ParametrizedImmersion,
};
use crate::linalg::max_abs;
use crate::spherical::{split_second_form, NestedImmersion};

/// Residual bound for the registration self-test (analytic derivatives).
pub const SELF_TEST_TOL: f64 = 1e-6;
/// Bound for the intrinsic Ricci oracle in the self-test.
pub const SELF_TEST_ORACLE_TOL: f64 = 1e-5;
/// Minimality threshold used to validate the `minimal_in` flag.
pub const MINIMAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {name:?}; valid names: {}", valid.join(", "))]
    UnknownEntry { name: String, valid: Vec<String> },

    #[error("bad parameter for {name}: {detail}")]
    BadParameter { name: String, detail: String },

    #[error("self-test failed for {name}: {detail}")]
    SelfTest { name: String, detail: String },

    #[error("duplicate catalog entry {0}")]
    Duplicate(String),
}

type MatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Closed-form oracles attached to an entry.
#[derive(Clone, Default)]
pub struct ClosedForms {
    pub summary: String,
    /// Chart metric g_ab.
    pub metric: Option<MatrixFn>,
    /// Ricci tensor in orthonormal-frame components.
    pub frame_ricci: Option<MatrixFn>,
    /// ‖trB‖ for M ⊂ R^k.
    pub mean_curvature_norm: Option<ScalarFn>,
    /// ‖tr B_{M⊆N}‖ for M ⊂ S^{k-1}.
    pub sphere_mean_curvature_norm: Option<ScalarFn>,
}

impl fmt::Debug for ClosedForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub immersion: ParametrizedImmersion,
    pub minimal_in: MinimalIn,
    /// Image lies on the unit sphere with a nontrivial normal space there.
    pub on_unit_sphere: bool,
    pub closed_forms: ClosedForms,
    pub default_grid: Grid,
    /// Axes widened to [−V, V] by the Ricci scan.
    pub scan_axes: Vec<usize>,
}

/// Serializable metadata for listings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryInfo {
    pub name: String,
    pub domain_dim: usize,
    pub ambient_dim: usize,
    pub minimal_in: MinimalIn,
    pub on_unit_sphere: bool,
    pub closed_forms: String,
}

impl CatalogEntry {
    pub fn info(&self) -> EntryInfo {
        EntryInfo {
            name: self.name.clone(),
            domain_dim: self.immersion.domain_dim(),
            ambient_dim: self.immersion.ambient_dim(),
            minimal_in: self.minimal_in,
            on_unit_sphere: self.on_unit_sphere,
            closed_forms: self.closed_forms.summary.clone(),
        }
    }

    pub fn nested(&self) -> Option<NestedImmersion> {
        if self.on_unit_sphere {
            NestedImmersion::new(self.immersion.clone()).ok()
        } else {
            None
        }
    }

    /// Re-derives every closed form numerically on a coarse grid and checks
    /// the analytic derivatives against finite differences.
    pub fn self_test(&self) -> Result<(), CatalogError> {
        let fail = |detail: String| CatalogError::SelfTest {
            name: self.name.clone(),
            detail,
        };
        let imm = &self.immersion;
        let m = imm.domain_dim();
        let coarse = self
            .default_grid
            .with_resolution(vec![5; m])
            .map_err(|e| fail(e.to_string()))?;
        let nested = self.nested();
        if self.on_unit_sphere && nested.is_none() {
            return Err(fail("flagged on_unit_sphere without a normal space".into()));
        }
        let mut largest_trace = 0.0_f64;
        for u in coarse.points() {
            let err = |e: crate::error::GeometryError| fail(format!("at {u:?}: {e}"));
            if imm.has_analytic_derivatives() {
                let dj = max_abs(&(imm.jacobian(&u).map_err(err)? - imm.jacobian_fd(&u).map_err(err)?));
                if dj > SELF_TEST_TOL {
                    return Err(fail(format!("jacobian differs from finite differences by {dj:e} at {u:?}")));
                }
                let h = imm.hessian(&u).map_err(err)?;
                let hfd = imm.hessian_fd(&u).map_err(err)?;
                let dh = h.iter().zip(&hfd).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
                if dh > SELF_TEST_TOL {
                    return Err(fail(format!("hessian differs from finite differences by {dh:e} at {u:?}")));
                }
            }
            let fd = fundamental_data(imm, &u).map_err(err)?;
            let ric = ricci_extrinsic(&fd);
            if let Some(metric) = &self.closed_forms.metric {
                let d = max_abs(&(metric(&u) - &fd.metric));
                if d > SELF_TEST_TOL {
                    return Err(fail(format!("metric residual {d:e} at {u:?}")));
                }
            }
            if let Some(closed) = &self.closed_forms.frame_ricci {
                let d = max_abs(&(closed(&u) - ric.components()));
                if d > SELF_TEST_TOL {
                    return Err(fail(format!("Ricci residual {d:e} at {u:?}")));
                }
            }
            let intrinsic = ricci_intrinsic(imm, &u).map_err(err)?;
            let d = intrinsic.max_abs_diff(&ric);
            if d > SELF_TEST_ORACLE_TOL {
                return Err(fail(format!("Ricci oracles disagree by {d:e} at {u:?}")));
            }
            let tr = fd.mean_curvature.norm();
            if let Some(closed) = &self.closed_forms.mean_curvature_norm {
                let d = (closed(&u) - tr).abs();
                if d > SELF_TEST_TOL {
                    return Err(fail(format!("‖trB‖ residual {d:e} at {u:?}")));
                }
            }
            let measured = match &nested {
                Some(n) => {
                    let pair = split_second_form(n, &u).map_err(err)?;
                    let tr_mn = pair.trace_mn().norm();
                    if let Some(closed) = &self.closed_forms.sphere_mean_curvature_norm {
                        let d = (closed(&u) - tr_mn).abs();
                        if d > SELF_TEST_TOL {
                            return Err(fail(format!("‖tr B_MN‖ residual {d:e} at {u:?}")));
                        }
                    }
                    tr_mn
                }
                None => tr,
            };
            largest_trace = largest_trace.max(measured);
        }
        let consistent = match self.minimal_in {
            MinimalIn::Euclidean => !self.on_unit_sphere && largest_trace <= MINIMAL_TOL,
            MinimalIn::Sphere => self.on_unit_sphere && largest_trace <= MINIMAL_TOL,
            MinimalIn::None => largest_trace > SELF_TEST_TOL,
        };
        if !consistent {
            return Err(fail(format!(
                "minimal_in = {} inconsistent with measured trace {largest_trace:e}",
                self.minimal_in
            )));
        }
        Ok(())
    }
}

/// Ordered registry of catalog entries.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All built-in entries, each self-tested on registration.
    pub fn builtin() -> Self {
        let mut catalog = Self::empty();
        for entry in [
            plane(),
            catenoid(),
            helicoid(),
            enneper(),
            holo_z2(),
            round_sphere(),
            great_sphere(),
            clifford_torus(),
            flat_torus(0.6).expect("valid radius"),
            great_circle(),
            small_circle(FRAC_PI_6).expect("valid latitude"),
        ] {
            catalog
                .register(entry)
                .unwrap_or_else(|e| panic!("built-in catalog entry failed: {e}"));
        }
        catalog
    }

    pub fn register(&mut self, entry: CatalogEntry) -> Result<(), CatalogError> {
        if self.entries.iter().any(|e| e.name == entry.name) {
            return Err(CatalogError::Duplicate(entry.name));
        }
        entry.self_test()?;
        self.entries.push(entry);
        Ok(())
    }

    pub fn list_entries(&self) -> Vec<EntryInfo> {
        self.entries.iter().map(CatalogEntry::info).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// Looks up a registered entry. `small_circle(θ)` and `flat_torus(a)` also
    /// accept arbitrary parameters, constructed and self-tested on demand.
    pub fn get(&self, name: &str) -> Result<CatalogEntry, CatalogError> {
        if let Some(e) = self.entries.iter().find(|e| e.name == name) {
            return Ok(e.clone());
        }
        if let Some(arg) = parse_call(name, "small_circle") {
            let entry = small_circle(arg?)?;
            entry.self_test()?;
            return Ok(entry);
        }
        if let Some(arg) = parse_call(name, "flat_torus") {
            let entry = flat_torus(arg?)?;
            entry.self_test()?;
            return Ok(entry);
        }
        Err(CatalogError::UnknownEntry {
            name: name.to_string(),
            valid: self.names(),
        })
    }
}

fn parse_call(name: &str, family: &str) -> Option<Result<f64, CatalogError>> {
    let rest = name.strip_prefix(family)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(rest.trim().parse::<f64>().map_err(|e| CatalogError::BadParameter {
        name: name.to_string(),
        detail: e.to_string(),
    }))
}

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

fn cols(k: usize, columns: &[&[f64]]) -> DMatrix<f64> {
    DMatrix::from_fn(k, columns.len(), |r, c| columns[c][r])
}

fn grid(lower: &[f64], upper: &[f64], n: usize) -> Grid {
    Grid::new(lower.to_vec(), upper.to_vec(), vec![n; lower.len()]).expect("valid default grid")
}

fn diag2(a: f64, b: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b])
}

fn zero_ricci(m: usize) -> MatrixFn {
    Arc::new(move |_| DMatrix::zeros(m, m))
}

pub fn plane() -> CatalogEntry {
    let imm = ParametrizedImmersion::new("plane", 2, 3, ChartBox::unbounded(2), |u| {
        v(&[u[0], u[1], 0.0])
    })
    .with_jacobian(|_| cols(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]))
    .with_hessian(|_| vec![DVector::zeros(3); 4]);
    CatalogEntry {
        name: "plane".into(),
        immersion: imm,
        minimal_in: MinimalIn::Euclidean,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = du² + dv², Ric = 0, trB = 0".into(),
            metric: Some(Arc::new(|_| DMatrix::identity(2, 2))),
            frame_ricci: Some(zero_ricci(2)),
            mean_curvature_norm: Some(Arc::new(|_| 0.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[-1.0, -1.0], &[1.0, 1.0], 41),
        scan_axes: vec![0, 1],
    }
}

pub fn catenoid() -> CatalogEntry {
    let imm = ParametrizedImmersion::new("catenoid", 2, 3, ChartBox::unbounded(2), |u| {
        let (s, c) = u[0].sin_cos();
        v(&[u[1].cosh() * c, u[1].cosh() * s, u[1]])
    })
    .with_jacobian(|u| {
        let (s, c) = u[0].sin_cos();
        let (ch, sh) = (u[1].cosh(), u[1].sinh());
        cols(3, &[&[-ch * s, ch * c, 0.0], &[sh * c, sh * s, 1.0]])
    })
    .with_hessian(|u| {
        let (s, c) = u[0].sin_cos();
        let (ch, sh) = (u[1].cosh(), u[1].sinh());
        let uv = v(&[-sh * s, sh * c, 0.0]);
        vec![v(&[-ch * c, -ch * s, 0.0]), uv.clone(), uv, v(&[ch * c, ch * s, 0.0])]
    });
    CatalogEntry {
        name: "catenoid".into(),
        immersion: imm,
        minimal_in: MinimalIn::Euclidean,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = cosh²v (du² + dv²), K = −cosh⁻⁴v, trB = 0".into(),
            metric: Some(Arc::new(|u| DMatrix::identity(2, 2) * u[1].cosh().powi(2))),
            frame_ricci: Some(Arc::new(|u| DMatrix::identity(2, 2) * -u[1].cosh().powi(-4))),
            mean_curvature_norm: Some(Arc::new(|_| 0.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[0.0, -2.0], &[2.0 * PI, 2.0], 41),
        scan_axes: vec![1],
    }
}

pub fn helicoid() -> CatalogEntry {
    let imm = ParametrizedImmersion::new("helicoid", 2, 3, ChartBox::unbounded(2), |u| {
        let (s, c) = u[0].sin_cos();
        v(&[u[1] * c, u[1] * s, u[0]])
    })
    .with_jacobian(|u| {
        let (s, c) = u[0].sin_cos();
        cols(3, &[&[-u[1] * s, u[1] * c, 1.0], &[c, s, 0.0]])
    })
    .with_hessian(|u| {
        let (s, c) = u[0].sin_cos();
        let uv = v(&[-s, c, 0.0]);
        vec![v(&[-u[1] * c, -u[1] * s, 0.0]), uv.clone(), uv, DVector::zeros(3)]
    });
    CatalogEntry {
        name: "helicoid".into(),
        immersion: imm,
        minimal_in: MinimalIn::Euclidean,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = (1 + v²) du² + dv², K = −(1 + v²)⁻², trB = 0".into(),
            metric: Some(Arc::new(|u| diag2(1.0 + u[1] * u[1], 1.0))),
            frame_ricci: Some(Arc::new(|u| {
                DMatrix::identity(2, 2) * -(1.0 + u[1] * u[1]).powi(-2)
            })),
            mean_curvature_norm: Some(Arc::new(|_| 0.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[0.0, -2.0], &[2.0 * PI, 2.0], 41),
        scan_axes: vec![1],
    }
}

pub fn enneper() -> CatalogEntry {
    let imm = ParametrizedImmersion::new("enneper", 2, 3, ChartBox::unbounded(2), |p| {
        let (u, w) = (p[0], p[1]);
        v(&[
            u - u.powi(3) / 3.0 + u * w * w,
            -w + w.powi(3) / 3.0 - w * u * u,
            u * u - w * w,
        ])
    })
    .with_jacobian(|p| {
        let (u, w) = (p[0], p[1]);
        cols(
            3,
            &[
                &[1.0 - u * u + w * w, -2.0 * u * w, 2.0 * u],
                &[2.0 * u * w, -1.0 + w * w - u * u, -2.0 * w],
            ],
        )
    })
    .with_hessian(|p| {
        let (u, w) = (p[0], p[1]);
        let uv = v(&[2.0 * w, -2.0 * u, 0.0]);
        vec![
            v(&[-2.0 * u, -2.0 * w, 2.0]),
            uv.clone(),
            uv,
            v(&[2.0 * u, 2.0 * w, -2.0]),
        ]
    });
    let lam = |p: &[f64]| 1.0 + p[0] * p[0] + p[1] * p[1];
    CatalogEntry {
        name: "enneper".into(),
        immersion: imm,
        minimal_in: MinimalIn::Euclidean,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = (1 + u² + v²)² (du² + dv²), K = −4 (1 + u² + v²)⁻⁴, trB = 0".into(),
            metric: Some(Arc::new(move |p| DMatrix::identity(2, 2) * lam(p).powi(2))),
            frame_ricci: Some(Arc::new(move |p| {
                DMatrix::identity(2, 2) * (-4.0 * lam(p).powi(-4))
            })),
            mean_curvature_norm: Some(Arc::new(|_| 0.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[-1.0, -1.0], &[1.0, 1.0], 41),
        scan_axes: vec![0, 1],
    }
}

pub fn holo_z2() -> CatalogEntry {
    let imm = ParametrizedImmersion::new("holo_z2", 2, 4, ChartBox::unbounded(2), |p| {
        let (u, w) = (p[0], p[1]);
        v(&[u, w, u * u - w * w, 2.0 * u * w])
    })
    .with_jacobian(|p| {
        let (u, w) = (p[0], p[1]);
        cols(4, &[&[1.0, 0.0, 2.0 * u, 2.0 * w], &[0.0, 1.0, -2.0 * w, 2.0 * u]])
    })
    .with_hessian(|_| {
        let uv = v(&[0.0, 0.0, 0.0, 2.0]);
        vec![v(&[0.0, 0.0, 2.0, 0.0]), uv.clone(), uv, v(&[0.0, 0.0, -2.0, 0.0])]
    });
    let lam = |p: &[f64]| 1.0 + 4.0 * (p[0] * p[0] + p[1] * p[1]);
    CatalogEntry {
        name: "holo_z2".into(),
        immersion: imm,
        minimal_in: MinimalIn::Euclidean,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = (1 + 4|z|²) |dz|², K = −8 (1 + 4|z|²)⁻³, trB = 0".into(),
            metric: Some(Arc::new(move |p| DMatrix::identity(2, 2) * lam(p))),
            frame_ricci: Some(Arc::new(move |p| {
                DMatrix::identity(2, 2) * (-8.0 * lam(p).powi(-3))
            })),
            mean_curvature_norm: Some(Arc::new(|_| 0.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[-1.0, -1.0], &[1.0, 1.0], 41),
        scan_axes: vec![0, 1],
    }
}

/// Longitude/latitude chart of the unit 2-sphere in the first three
/// coordinates of R^k (k = 3 or 4).
fn sphere_chart(name: &str, k: usize) -> ParametrizedImmersion {
    let pad = move |xs: [f64; 3]| {
        let mut out = DVector::zeros(k);
        out.rows_mut(0, 3).copy_from_slice(&xs);
        out
    };
    let chart = ChartBox::new(
        vec![f64::NEG_INFINITY, -FRAC_PI_2],
        vec![f64::INFINITY, FRAC_PI_2],
    );
    ParametrizedImmersion::new(name, 2, k, chart, move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        pad([cu * cv, su * cv, sv])
    })
    .with_jacobian(move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        DMatrix::from_columns(&[pad([-su * cv, cu * cv, 0.0]), pad([-cu * sv, -su * sv, cv])])
    })
    .with_hessian(move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        let uv = pad([su * sv, -cu * sv, 0.0]);
        vec![pad([-cu * cv, -su * cv, 0.0]), uv.clone(), uv, pad([-cu * cv, -su * cv, -sv])]
    })
}

pub fn round_sphere() -> CatalogEntry {
    CatalogEntry {
        name: "round_sphere".into(),
        immersion: sphere_chart("round_sphere", 3),
        minimal_in: MinimalIn::None,
        on_unit_sphere: false,
        closed_forms: ClosedForms {
            summary: "g = cos²v du² + dv², Ric = g, B(X,Y) = −⟨X,Y⟩x, ‖trB‖ = 2".into(),
            metric: Some(Arc::new(|p| diag2(p[1].cos().powi(2), 1.0))),
            frame_ricci: Some(Arc::new(|_| DMatrix::identity(2, 2))),
            mean_curvature_norm: Some(Arc::new(|_| 2.0)),
            sphere_mean_curvature_norm: None,
        },
        default_grid: grid(&[0.0, -1.2], &[2.0 * PI, 1.2], 41),
        scan_axes: vec![],
    }
}

pub fn great_sphere() -> CatalogEntry {
    CatalogEntry {
        name: "great_sphere".into(),
        immersion: sphere_chart("great_sphere", 4),
        minimal_in: MinimalIn::Sphere,
        on_unit_sphere: true,
        closed_forms: ClosedForms {
            summary: "totally geodesic S² ⊂ S³: Ric = g, B_MN = 0, ψ constant".into(),
            metric: Some(Arc::new(|p| diag2(p[1].cos().powi(2), 1.0))),
            frame_ricci: Some(Arc::new(|_| DMatrix::identity(2, 2))),
            mean_curvature_norm: Some(Arc::new(|_| 2.0)),
            sphere_mean_curvature_norm: Some(Arc::new(|_| 0.0)),
        },
        default_grid: grid(&[0.0, -1.2], &[2.0 * PI, 1.2], 41),
        scan_axes: vec![],
    }
}

fn torus(name: String, a: f64) -> ParametrizedImmersion {
    let b = (1.0 - a * a).sqrt();
    ParametrizedImmersion::new(name, 2, 4, ChartBox::unbounded(2), move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        v(&[a * cu, a * su, b * cv, b * sv])
    })
    .with_jacobian(move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        cols(4, &[&[-a * su, a * cu, 0.0, 0.0], &[0.0, 0.0, -b * sv, b * cv]])
    })
    .with_hessian(move |p| {
        let (su, cu) = p[0].sin_cos();
        let (sv, cv) = p[1].sin_cos();
        vec![
            v(&[-a * cu, -a * su, 0.0, 0.0]),
            DVector::zeros(4),
            DVector::zeros(4),
            v(&[0.0, 0.0, -b * cv, -b * sv]),
        ]
    })
}

fn torus_entry(name: String, a: f64) -> CatalogEntry {
    let b = (1.0 - a * a).sqrt();
    let minimal = (a - FRAC_1_SQRT_2).abs() < 1e-15;
    let tr_mn = ((2.0 * a - 1.0 / a).powi(2) + (2.0 * b - 1.0 / b).powi(2)).sqrt();
    let tr = (1.0 / (a * a) + 1.0 / (b * b)).sqrt();
    CatalogEntry {
        immersion: torus(name.clone(), a),
        name,
        minimal_in: if minimal { MinimalIn::Sphere } else { MinimalIn::None },
        on_unit_sphere: true,
        closed_forms: ClosedForms {
            summary: format!(
                "S¹({a}) × S¹({b}) ⊂ S³: g = {}du² + {}dv², Ric = 0, ‖tr B_MN‖ = {tr_mn}",
                a * a,
                b * b
            ),
            metric: Some(Arc::new(move |_| diag2(a * a, b * b))),
            frame_ricci: Some(zero_ricci(2)),
            mean_curvature_norm: Some(Arc::new(move |_| tr)),
            sphere_mean_curvature_norm: Some(Arc::new(move |_| if minimal { 0.0 } else { tr_mn })),
        },
        default_grid: grid(&[0.0, 0.0], &[2.0 * PI, 2.0 * PI], 41),
        scan_axes: vec![],
    }
}

pub fn clifford_torus() -> CatalogEntry {
    torus_entry("clifford_torus".into(), FRAC_1_SQRT_2)
}

/// S¹(a) × S¹(√(1 − a²)) ⊂ S³; minimal only at a = 1/√2.
pub fn flat_torus(a: f64) -> Result<CatalogEntry, CatalogError> {
    let name = format!("flat_torus({a})");
    if !(a > 0.0 && a < 1.0) {
        return Err(CatalogError::BadParameter {
            name,
            detail: "radius must lie in (0, 1)".into(),
        });
    }
    Ok(torus_entry(name, a))
}

fn latitude_circle(name: String, theta: f64) -> ParametrizedImmersion {
    let (st, ct) = theta.sin_cos();
    ParametrizedImmersion::new(name, 1, 3, ChartBox::unbounded(1), move |p| {
        let (s, c) = p[0].sin_cos();
        v(&[c * ct, s * ct, st])
    })
    .with_jacobian(move |p| {
        let (s, c) = p[0].sin_cos();
        cols(3, &[&[-s * ct, c * ct, 0.0]])
    })
    .with_hessian(move |p| {
        let (s, c) = p[0].sin_cos();
        vec![v(&[-c * ct, -s * ct, 0.0])]
    })
}

fn circle_entry(name: String, theta: f64, minimal: bool) -> CatalogEntry {
    let ct = theta.cos();
    CatalogEntry {
        immersion: latitude_circle(name.clone(), theta),
        name,
        minimal_in: if minimal { MinimalIn::Sphere } else { MinimalIn::None },
        on_unit_sphere: true,
        closed_forms: ClosedForms {
            summary: format!(
                "latitude {theta} circle in S²: g = {}du², ‖trB‖ = {}, ‖tr B_MN‖ = |tan θ|",
                ct * ct,
                1.0 / ct
            ),
            metric: Some(Arc::new(move |_| DMatrix::from_element(1, 1, ct * ct))),
            frame_ricci: Some(zero_ricci(1)),
            mean_curvature_norm: Some(Arc::new(move |_| 1.0 / ct)),
            sphere_mean_curvature_norm: Some(Arc::new(move |_| theta.tan().abs())),
        },
        default_grid: Grid::new(vec![0.0], vec![2.0 * PI], vec![41]).expect("valid grid"),
        scan_axes: vec![],
    }
}

pub fn great_circle() -> CatalogEntry {
    circle_entry("great_circle".into(), 0.0, true)
}

/// Latitude-θ circle; `small_circle(π/6)` is registered as `small_circle`.
pub fn small_circle(theta: f64) -> Result<CatalogEntry, CatalogError> {
    if !(theta.abs() > 0.0 && theta.abs() < FRAC_PI_2) {
        return Err(CatalogError::BadParameter {
            name: format!("small_circle({theta})"),
            detail: "latitude must lie in (−π/2, π/2) \\ {0}".into(),
        });
    }
    let name = if theta == FRAC_PI_6 {
        "small_circle".to_string()
    } else {
        format!("small_circle({theta})")
    };
    Ok(circle_entry(name, theta, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_deterministic_and_complete() {
        let cat = Catalog::builtin();
        let names = cat.names();
        for expected in [
            "plane",
            "catenoid",
            "helicoid",
            "enneper",
            "holo_z2",
            "great_sphere",
            "clifford_torus",
            "small_circle",
        ] {
            assert!(names.iter().any(|n| n == expected), "{expected} missing");
        }
        assert_eq!(names, Catalog::builtin().names());
    }

    #[test]
    fn lookups() {
        let cat = Catalog::builtin();
        let plane = cat.get("plane").unwrap();
        assert_eq!(plane.minimal_in, MinimalIn::Euclidean);
        let torus = cat.get("clifford_torus").unwrap();
        assert_eq!(torus.minimal_in, MinimalIn::Sphere);
        assert!(torus.on_unit_sphere);
        let circle = cat.get("small_circle(0.3)").unwrap();
        assert_eq!(circle.minimal_in, MinimalIn::None);
        match cat.get("torus") {
            Err(CatalogError::UnknownEntry { valid, .. }) => assert!(valid.contains(&"catenoid".into())),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            cat.get("flat_torus(1.5)"),
            Err(CatalogError::BadParameter { .. })
        ));
        assert!(matches!(
            cat.get("small_circle(abc)"),
            Err(CatalogError::BadParameter { .. })
        ));
    }

    #[test]
    fn wrong_minimal_flag_fails_self_test() {
        let mut liar = round_sphere();
        liar.minimal_in = MinimalIn::Euclidean;
        liar.name = "liar".into();
        let mut cat = Catalog::empty();
        assert!(matches!(cat.register(liar), Err(CatalogError::SelfTest { .. })));
        assert!(matches!(
            Catalog::builtin().register(plane()),
            Err(CatalogError::Duplicate(_))
        ));
    }

    #[test]
    fn wrong_closed_form_fails_self_test() {
        let mut bad = catenoid();
        bad.closed_forms.frame_ricci = Some(Arc::new(|u| DMatrix::identity(2, 2) * -u[1].cosh().powi(-2)));
        assert!(bad.self_test().is_err());
    }
}
