//! Grid verification suites and evidence scans.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{GeometryError, Result};
use crate::grassmann::{
    canonical_distance, overlap_matrix, pluecker_embed, principal_cosines, spherical_distance,
    OrientedPlane,
};
use crate::grid::Grid;
use crate::immersion::{
    derivation_fd_residual, fundamental_data, lemma_phi_rhs, pullback_metric_phi_from,
    ricci_extrinsic, ricci_intrinsic, ParametrizedImmersion,
};
use crate::linalg::max_abs;
use crate::multivector::sphere_distance_embedded;
use crate::report::{ReportRow, Tolerances, VerificationReport, DIAMETER_NOTE, SCHEMA};
use crate::spherical::{
    corollary_sphere_rhs, normal_frame, pullback_metric_psi, second_gauss_map, seclemma_rhs_from,
    split_second_form, CurvatureConvention, NestedImmersion,
};

/// Grid points per axis used for the sampled Gauss-image diameter.
pub const DIAMETER_SAMPLES_PER_AXIS: usize = 21;

/// Max pairwise canonical distance.
pub fn dc_diameter(planes: &[OrientedPlane]) -> f64 {
    (0..planes.len())
        .into_par_iter()
        .map(|i| {
            planes[i + 1..]
                .iter()
                .map(|q| canonical_distance(&planes[i], q).unwrap_or(f64::NAN))
                .fold(0.0_f64, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn sampled_diameter<F>(grid: &Grid, plane_at: F) -> Option<(f64, usize)>
where
    F: Fn(&[f64]) -> Result<OrientedPlane> + Sync,
{
    let planes: Vec<OrientedPlane> = grid
        .strided_indices(DIAMETER_SAMPLES_PER_AXIS)
        .par_iter()
        .filter_map(|&i| plane_at(&grid.point(i)).ok())
        .collect();
    if planes.is_empty() {
        return None;
    }
    Some((dc_diameter(&planes), planes.len()))
}

type Checks = Vec<(&'static str, f64, f64)>;

fn make_row(index: usize, point: Vec<f64>, edge: bool, outcome: Result<(Checks, Vec<f64>)>) -> ReportRow {
    match outcome {
        Ok((checks, ricci_eigenvalues)) => {
            let residuals = checks.iter().map(|(n, r, _)| (n.to_string(), *r)).collect();
            let pass = if edge {
                BTreeMap::new()
            } else {
                checks.iter().map(|(n, r, tol)| (n.to_string(), *r <= *tol)).collect()
            };
            ReportRow {
                index,
                point,
                edge,
                residuals,
                pass,
                ricci_eigenvalues,
                error: None,
            }
        }
        Err(e) => ReportRow {
            index,
            point,
            edge,
            residuals: BTreeMap::new(),
            pass: if edge {
                BTreeMap::new()
            } else {
                BTreeMap::from([("evaluated".to_string(), false)])
            },
            ricci_eigenvalues: vec![],
            error: Some(e.to_string()),
        },
    }
}

fn euclid_checks(imm: &ParametrizedImmersion, u: &[f64], tol: &Tolerances) -> Result<(Checks, Vec<f64>)> {
    let fd = fundamental_data(imm, u)?;
    let ric = ricci_extrinsic(&fd);
    let intrinsic = ricci_intrinsic(imm, u)?;
    let pull = pullback_metric_phi_from(&fd);
    let corollary = max_abs(&(&pull + ric.components()));
    let lemma = max_abs(&(&pull - lemma_phi_rhs(&fd, &ric)));
    let checks = vec![
        ("trace_b", fd.mean_curvature.norm(), tol.minimal),
        ("corollary_minimal", corollary, tol.identity),
        ("lemma_phi", lemma, tol.lemma),
        ("ricci_oracle", intrinsic.max_abs_diff(&ric), tol.oracle),
        ("derivation_fd", derivation_fd_residual(imm, &fd)?, tol.derivation),
    ];
    Ok((checks, ric.eigenvalues()))
}

/// Minimal submanifolds of Euclidean space: ‖trB‖ ≤ tol.minimal and
/// φ*h = −Ric at each grid point, plus the full pullback formula, Ricci
/// oracle agreement and the derivation formula for dφ.
pub fn verify_corollary_minimal(
    imm: &ParametrizedImmersion,
    grid: &Grid,
    tol: &Tolerances,
) -> VerificationReport {
    let rows: Vec<ReportRow> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let u = grid.point(i);
            let edge = imm.is_edge(&u);
            let outcome = euclid_checks(imm, &u, tol);
            make_row(i, u, edge, outcome)
        })
        .collect();
    let diameter = sampled_diameter(grid, |u| crate::immersion::tangent_frame(imm, u));
    VerificationReport::assemble("euclid", imm.name(), grid.clone(), *tol, rows, diameter)
}

fn sphere_checks(nimm: &NestedImmersion, u: &[f64], tol: &Tolerances) -> Result<(Checks, Vec<f64>)> {
    let x = nimm.inner().position(u)?;
    let on_sphere = (x.norm() - 1.0).abs();
    let pair = split_second_form(nimm, u)?;
    let m = pair.m();
    let ric = ricci_extrinsic(&pair.ambient);
    let intrinsic = ricci_intrinsic(nimm.inner(), u)?;
    let pull = pullback_metric_psi(nimm, u)?;
    let lemma_rhs = seclemma_rhs_from(&pair, ric.components(), CurvatureConvention::PositiveSectional);
    let corollary = max_abs(&(&pull - corollary_sphere_rhs(m, ric.components())));
    let psi = second_gauss_map(nimm, u)?;
    let checks = vec![
        ("on_sphere", on_sphere, tol.radial),
        ("radial", pair.radial_residual, tol.radial),
        ("trace_b_mn", pair.trace_mn().norm(), tol.minimal),
        ("corollary_sphere", corollary, tol.identity),
        ("lemma_psi", max_abs(&(&pull - lemma_rhs)), tol.identity),
        ("ricci_oracle", intrinsic.max_abs_diff(&ric), tol.oracle),
        ("psi_unit", (psi.norm() - 1.0).abs(), tol.unit),
    ];
    Ok((checks, ric.eigenvalues()))
}

/// Minimal submanifolds of the unit sphere: ‖tr B_MN‖ ≤ tol.minimal and
/// ψ*h = (m − 1)g − Ric, plus the full pullback formula for ψ.
pub fn verify_corollary_sphere(
    nimm: &NestedImmersion,
    grid: &Grid,
    tol: &Tolerances,
) -> VerificationReport {
    let imm = nimm.inner();
    let rows: Vec<ReportRow> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let u = grid.point(i);
            let edge = imm.is_edge(&u);
            let outcome = sphere_checks(nimm, &u, tol);
            make_row(i, u, edge, outcome)
        })
        .collect();
    let diameter = sampled_diameter(grid, |u| {
        nimm.check_point(u)?;
        OrientedPlane::new(normal_frame(&fundamental_data(imm, u)?))
    });
    VerificationReport::assemble("sphere", imm.name(), grid.clone(), *tol, rows, diameter)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanStep {
    pub half_width: f64,
    pub grid: Grid,
    pub max_ricci_eigenvalue: f64,
    pub min_ricci_eigenvalue: f64,
    /// Same statistic from the entry's closed-form Ricci tensor.
    pub closed_form_max_eigenvalue: Option<f64>,
    pub all_negative: bool,
    pub failed_points: usize,
    pub gauss_image_dc_diameter: Option<f64>,
    pub gauss_image_sample_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema: &'static str,
    pub suite: &'static str,
    pub entry: String,
    pub steps: Vec<ScanStep>,
    /// Max eigenvalue is nondecreasing as the domain grows.
    pub monotone: bool,
    pub diameter_note: &'static str,
    pub pass: bool,
}

/// Sup of the frame-Ricci eigenvalues over growing chart boxes: each scan axis
/// of the entry is widened to [−V, V] for V in `half_widths` (sorted ascending).
pub fn scan_ric(
    entry: &CatalogEntry,
    half_widths: &[f64],
    resolution: Option<Vec<usize>>,
) -> Result<ScanReport> {
    if entry.scan_axes.is_empty() {
        return Err(GeometryError::Unsupported(format!(
            "{} has no expanding chart axis",
            entry.name
        )));
    }
    let mut widths = half_widths.to_vec();
    if widths.iter().any(|w| !(*w > 0.0)) {
        return Err(GeometryError::Unsupported("scan half-widths must be positive".into()));
    }
    widths.sort_by(f64::total_cmp);
    let imm = &entry.immersion;
    let mut steps = Vec::with_capacity(widths.len());
    for &half_width in &widths {
        let mut grid = entry.default_grid.clone();
        if let Some(res) = &resolution {
            grid = grid.with_resolution(res.clone())?;
        }
        for &axis in &entry.scan_axes {
            grid = grid.with_axis(axis, -half_width, half_width)?;
        }
        let per_point: Vec<Result<(Vec<f64>, Option<Vec<f64>>)>> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let u = grid.point(i);
                let fd = fundamental_data(imm, &u)?;
                let closed = entry
                    .closed_forms
                    .frame_ricci
                    .as_ref()
                    .map(|f| crate::linalg::symmetric_eigenvalues(&f(&u)));
                Ok((ricci_extrinsic(&fd).eigenvalues(), closed))
            })
            .collect();
        let mut max_ev = f64::NEG_INFINITY;
        let mut min_ev = f64::INFINITY;
        let mut closed_max: Option<f64> = None;
        let mut failed = 0;
        for outcome in &per_point {
            match outcome {
                Ok((ev, closed)) => {
                    max_ev = max_ev.max(*ev.last().expect("m >= 1"));
                    min_ev = min_ev.min(ev[0]);
                    if let Some(c) = closed {
                        let top = *c.last().expect("m >= 1");
                        closed_max = Some(closed_max.map_or(top, |v| v.max(top)));
                    }
                }
                Err(_) => failed += 1,
            }
        }
        let diameter = sampled_diameter(&grid, |u| crate::immersion::tangent_frame(imm, u));
        steps.push(ScanStep {
            half_width,
            grid,
            max_ricci_eigenvalue: max_ev,
            min_ricci_eigenvalue: min_ev,
            closed_form_max_eigenvalue: closed_max,
            all_negative: failed == 0 && max_ev < 0.0,
            failed_points: failed,
            gauss_image_dc_diameter: diameter.map(|d| d.0),
            gauss_image_sample_points: diameter.map_or(0, |d| d.1),
        });
    }
    let monotone = steps
        .windows(2)
        .all(|w| w[1].max_ricci_eigenvalue >= w[0].max_ricci_eigenvalue);
    let pass = monotone && steps.iter().all(|s| s.all_negative);
    Ok(ScanReport {
        schema: SCHEMA,
        suite: "scan-ric",
        entry: entry.name.clone(),
        steps,
        monotone,
        diameter_note: DIAMETER_NOTE,
        pass,
    })
}

/// Slack in d_s ≤ d_c.
pub const LEMMA_SLACK: f64 = 1e-12;
/// Symmetry of both distances.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// ⟨ρ⁻¹P, ρ⁻¹Q⟩ = det α and |det α| = Π λ_i.
pub const PLUECKER_TOL: f64 = 1e-10;
/// Embedded great-circle distance vs d_s where det α ≥ 0.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// |d_s − d_c| for lines (m = 1).
pub const LINE_EQUALITY_TOL: f64 = 1e-12;
/// Failures recorded per dimension pair.
pub const MAX_RECORDED_FAILURES: usize = 20;

/// Random plane pair number `index` for dimensions (m, k) under `seed`; each
/// sample has its own ChaCha stream, so any failure is reproducible alone.
pub fn sample_pair(seed: u64, plane_dim: usize, ambient_dim: usize, index: u64) -> (OrientedPlane, OrientedPlane) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((plane_dim as u64) << 56) ^ ((ambient_dim as u64) << 48) ^ index);
    let p = OrientedPlane::random(&mut rng, plane_dim, ambient_dim);
    let q = OrientedPlane::random(&mut rng, plane_dim, ambient_dim);
    (p, q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResiduals {
    /// d_s − d_c (≤ slack for the comparison to hold).
    pub lemma_excess: f64,
    pub symmetry: f64,
    pub pluecker_det: f64,
    pub det_product: f64,
    /// Present only when det α ≥ 0.
    pub isometry: Option<f64>,
    /// Present only for m = 1.
    pub line_equality: Option<f64>,
}

pub fn pair_residuals(p: &OrientedPlane, q: &OrientedPlane) -> Result<PairResiduals> {
    let dc = canonical_distance(p, q)?;
    let ds = spherical_distance(p, q)?;
    let dc_rev = canonical_distance(q, p)?;
    let ds_rev = spherical_distance(q, p)?;
    let det = overlap_matrix(p, q)?.determinant();
    let (pp, pq) = (pluecker_embed(p), pluecker_embed(q));
    let inner = pp.inner(&pq)?;
    let product = principal_cosines(p, q)?.product();
    let isometry = if det >= 0.0 {
        Some((sphere_distance_embedded(&pp, &pq)? - ds).abs())
    } else {
        None
    };
    Ok(PairResiduals {
        lemma_excess: ds - dc,
        symmetry: (dc - dc_rev).abs().max((ds - ds_rev).abs()),
        pluecker_det: (inner - det).abs(),
        det_product: (det.abs() - product).abs(),
        isometry,
        line_equality: (p.plane_dim() == 1).then(|| (ds - dc).abs()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub index: u64,
    pub check: &'static str,
    pub residual: f64,
    pub reproduce: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzDims {
    pub plane_dim: usize,
    pub ambient_dim: usize,
    pub count: u64,
    pub violations: u64,
    pub max_lemma_excess: Option<f64>,
    pub max_symmetry: f64,
    pub max_pluecker_det: f64,
    pub max_det_product: f64,
    pub isometry_pairs: u64,
    pub max_isometry: f64,
    pub max_line_equality: Option<f64>,
    pub failures: Vec<FuzzFailure>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub schema: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub dims: Vec<FuzzDims>,
    pub pass: bool,
}

fn fuzz_dims(count: u64, plane_dim: usize, ambient_dim: usize, seed: u64) -> Result<FuzzDims> {
    if plane_dim == 0 || plane_dim > ambient_dim {
        return Err(GeometryError::Dimension(format!(
            "cannot sample {plane_dim}-planes in R^{ambient_dim}"
        )));
    }
    let results: Vec<PairResiduals> = (0..count)
        .into_par_iter()
        .map(|i| {
            let (p, q) = sample_pair(seed, plane_dim, ambient_dim, i);
            pair_residuals(&p, &q).expect("compatible random planes")
        })
        .collect();
    let mut out = FuzzDims {
        plane_dim,
        ambient_dim,
        count,
        violations: 0,
        max_lemma_excess: None,
        max_symmetry: 0.0,
        max_pluecker_det: 0.0,
        max_det_product: 0.0,
        isometry_pairs: 0,
        max_isometry: 0.0,
        max_line_equality: None,
        failures: vec![],
        pass: true,
    };
    for (i, r) in results.iter().enumerate() {
        let i = i as u64;
        out.max_lemma_excess = Some(out.max_lemma_excess.map_or(r.lemma_excess, |v| v.max(r.lemma_excess)));
        out.max_symmetry = out.max_symmetry.max(r.symmetry);
        out.max_pluecker_det = out.max_pluecker_det.max(r.pluecker_det);
        out.max_det_product = out.max_det_product.max(r.det_product);
        if let Some(iso) = r.isometry {
            out.isometry_pairs += 1;
            out.max_isometry = out.max_isometry.max(iso);
        }
        if let Some(eq) = r.line_equality {
            out.max_line_equality = Some(out.max_line_equality.map_or(eq, |v| v.max(eq)));
        }
        let checks = [
            ("lemma_excess", r.lemma_excess, LEMMA_SLACK),
            ("symmetry", r.symmetry, SYMMETRY_TOL),
            ("pluecker_det", r.pluecker_det, PLUECKER_TOL),
            ("det_product", r.det_product, PLUECKER_TOL),
            ("isometry", r.isometry.unwrap_or(0.0), ISOMETRY_TOL),
            ("line_equality", r.line_equality.unwrap_or(0.0), LINE_EQUALITY_TOL),
        ];
        let mut violated = false;
        for (check, residual, tol) in checks {
            if !(residual <= tol) {
                violated = true;
                if out.failures.len() < MAX_RECORDED_FAILURES {
                    out.failures.push(FuzzFailure {
                        index: i,
                        check,
                        residual,
                        reproduce: format!(
                            "seed={seed} dims={plane_dim}x{ambient_dim} index={i}"
                        ),
                    });
                }
            }
        }
        if violated {
            out.violations += 1;
        }
    }
    out.pass = out.violations == 0;
    Ok(out)
}

/// Random plane pairs per (m, k): d_s ≤ d_c, symmetry, the Plücker
/// determinant identity and the embedded isometry on det α ≥ 0.
pub fn grassmann_fuzz(count: u64, dims: &[(usize, usize)], seed: u64) -> Result<FuzzReport> {
    let dims = dims
        .iter()
        .map(|&(m, k)| fuzz_dims(count, m, k, seed))
        .collect::<Result<Vec<_>>>()?;
    let pass = dims.iter().all(|d| d.pass);
    Ok(FuzzReport {
        schema: SCHEMA,
        suite: "fuzz",
        seed,
        tolerances: BTreeMap::from([
            ("lemma_slack", LEMMA_SLACK),
            ("symmetry", SYMMETRY_TOL),
            ("pluecker", PLUECKER_TOL),
            ("isometry", ISOMETRY_TOL),
            ("line_equality", LINE_EQUALITY_TOL),
        ]),
        dims,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn empty_fuzz_passes() {
        let r = grassmann_fuzz(0, &[(2, 4)], 7).unwrap();
        assert!(r.pass);
        assert_eq!(r.dims[0].count, 0);
        assert!(grassmann_fuzz(1, &[(3, 2)], 7).is_err());
    }

    #[test]
    fn sample_pairs_are_reproducible() {
        assert_eq!(sample_pair(7, 2, 4, 11), sample_pair(7, 2, 4, 11));
        assert_ne!(sample_pair(7, 2, 4, 11), sample_pair(7, 2, 4, 12));
        assert_ne!(sample_pair(7, 2, 4, 11), sample_pair(8, 2, 4, 11));
    }

    #[test]
    fn scan_requires_expanding_axis() {
        let cat = Catalog::builtin();
        let torus = cat.get("clifford_torus").unwrap();
        assert!(scan_ric(&torus, &[1.0], None).is_err());
        let cat_entry = cat.get("catenoid").unwrap();
        assert!(scan_ric(&cat_entry, &[0.0], None).is_err());
    }

    #[test]
    fn plane_scan_is_degenerate_control() {
        let cat = Catalog::builtin();
        let r = scan_ric(&cat.get("plane").unwrap(), &[1.0, 2.0], Some(vec![5, 5])).unwrap();
        assert!(r.steps.iter().all(|s| s.max_ricci_eigenvalue == 0.0));
        assert!(r.steps.iter().all(|s| s.gauss_image_dc_diameter == Some(0.0)));
        assert!(!r.pass);
    }
}
