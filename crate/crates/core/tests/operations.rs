use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use approx::assert_abs_diff_eq;
use gaussric_core::catalog::{Catalog, CatalogEntry};
use gaussric_core::grassmann::{
    canonical_distance, overlap_matrix, pluecker_embed, principal_cosines, spherical_distance,
    OrientedPlane,
};
use gaussric_core::immersion::{
    fundamental_data, gauss_map, gauss_map_differential_derivation, gauss_map_differential_fd,
    pullback_metric_phi, ricci_extrinsic, ricci_intrinsic, tangent_frame, MinimalIn,
};
use gaussric_core::multivector::{sphere_distance_embedded, wedge, MultiVector};
use gaussric_core::report::Tolerances;
use gaussric_core::spherical::{
    lemma_seclemma_rhs, lemma_seclemma_rhs_with, pullback_metric_psi, second_gauss_map,
    split_second_form, CurvatureConvention,
};
use gaussric_core::suites::{verify_corollary_minimal, verify_corollary_sphere};
use gaussric_core::GeometryError;
use nalgebra::{DMatrix, DVector};

fn e(k: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[i] = 1.0;
    v
}

fn plane(vectors: &[Vec<f64>]) -> OrientedPlane {
    OrientedPlane::from_vectors(vectors).unwrap()
}

fn tilted() -> (OrientedPlane, OrientedPlane) {
    let p = plane(&[e(4, 0), e(4, 1)]);
    let q = plane(&[e(4, 0), vec![0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]]);
    (p, q)
}

fn entry(name: &str) -> CatalogEntry {
    Catalog::builtin().get(name).unwrap()
}

fn dv(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

#[test]
fn overlap_examples() {
    let p = plane(&[e(4, 0), e(4, 1)]);
    assert_eq!(overlap_matrix(&p, &p).unwrap(), DMatrix::identity(2, 2));
    let q = plane(&[e(4, 2), e(4, 3)]);
    assert_eq!(overlap_matrix(&p, &q).unwrap(), DMatrix::zeros(2, 2));
    let (p, q) = tilted();
    let a = overlap_matrix(&p, &q).unwrap();
    assert_abs_diff_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, FRAC_1_SQRT_2]), epsilon = 1e-15);

    let line = plane(&[e(4, 0)]);
    assert!(matches!(overlap_matrix(&p, &line), Err(GeometryError::IncompatiblePlanes(_))));
}

#[test]
fn principal_cosine_examples() {
    let p = plane(&[e(4, 0), e(4, 1)]);
    assert_eq!(principal_cosines(&p, &p).unwrap().values(), &[1.0, 1.0]);
    let q = plane(&[e(4, 2), e(4, 3)]);
    assert_eq!(principal_cosines(&p, &q).unwrap().values(), &[0.0, 0.0]);
    let (p, q) = tilted();
    let c = principal_cosines(&p, &q).unwrap();
    assert_abs_diff_eq!(c.values()[0], 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(c.values()[1], FRAC_1_SQRT_2, epsilon = 1e-15);
}

#[test]
fn distance_examples() {
    let p = plane(&[e(4, 0), e(4, 1)]);
    let q = plane(&[e(4, 2), e(4, 3)]);
    assert_eq!(canonical_distance(&p, &p.with_swapped(0, 1)).unwrap(), 0.0);
    assert_abs_diff_eq!(canonical_distance(&p, &q).unwrap(), PI / 2f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(canonical_distance(&p, &q).unwrap(), 2.221441, epsilon = 1e-6);
    assert_eq!(spherical_distance(&p, &p).unwrap(), 0.0);
    assert_abs_diff_eq!(spherical_distance(&p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-12);
    let (p, q) = tilted();
    assert_abs_diff_eq!(canonical_distance(&p, &q).unwrap(), FRAC_PI_4, epsilon = 1e-12);
    assert_abs_diff_eq!(spherical_distance(&p, &q).unwrap(), FRAC_PI_4, epsilon = 1e-12);
}

#[test]
fn lambda_inner_examples() {
    let e12 = MultiVector::basis(3, &[0, 1]).unwrap();
    assert_eq!(e12.inner(&e12).unwrap(), 1.0);
    let e21 = wedge(&[dv(&e(3, 1)), dv(&e(3, 0))]).unwrap();
    assert_eq!(e12.inner(&e21).unwrap(), -1.0);
    let u = wedge(&[dv(&e(3, 0)), dv(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2])]).unwrap();
    assert_abs_diff_eq!(e12.inner(&u).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-15);
    let e1 = MultiVector::basis(3, &[0]).unwrap();
    assert!(e12.inner(&e1).is_err());
}

#[test]
fn pluecker_examples() {
    let w = pluecker_embed(&plane(&[e(3, 0), e(3, 1)]));
    assert_eq!(w.coords(), &[1.0, 0.0, 0.0]);
    let w = pluecker_embed(&plane(&[e(3, 1), e(3, 0)]));
    assert_eq!(w.coords(), &[-1.0, 0.0, 0.0]);
    let w = pluecker_embed(&plane(&[e(3, 0), vec![0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]]));
    assert_abs_diff_eq!(w.coords()[0], FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(w.coords()[1], FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_eq!(w.coords()[2], 0.0);
    assert_eq!(serde_json::to_string(&w).unwrap(), format!("[{},{},0.0]", w.coords()[0], w.coords()[1]));
}

#[test]
fn embedded_distance_examples() {
    let e12 = MultiVector::basis(3, &[0, 1]).unwrap();
    assert_eq!(sphere_distance_embedded(&e12, &e12).unwrap(), 0.0);
    assert_abs_diff_eq!(sphere_distance_embedded(&e12, &e12.scaled(-1.0)).unwrap(), PI, epsilon = 1e-15);
    let e13 = MultiVector::basis(3, &[0, 2]).unwrap();
    assert_abs_diff_eq!(sphere_distance_embedded(&e12, &e13).unwrap(), FRAC_PI_2, epsilon = 1e-15);
    assert!(matches!(
        sphere_distance_embedded(&e12, &e13.scaled(1.1)),
        Err(GeometryError::NotOnSphere { .. })
    ));

    let p = plane(&[e(3, 0), e(3, 1)]);
    let flipped = p.with_swapped(0, 1);
    assert_eq!(spherical_distance(&p, &flipped).unwrap(), 0.0);
    let d = sphere_distance_embedded(&pluecker_embed(&p), &pluecker_embed(&flipped)).unwrap();
    assert_abs_diff_eq!(d, PI, epsilon = 1e-10);
}

#[test]
fn hodge_examples() {
    let star = MultiVector::basis(3, &[0, 1]).unwrap().hodge_complement().unwrap();
    assert_eq!(star.coords(), &[0.0, 0.0, 1.0]);
    let star = MultiVector::basis(3, &[0, 2]).unwrap().hodge_complement().unwrap();
    assert_eq!(star.coords(), &[0.0, -1.0, 0.0]);
    let star = MultiVector::basis(4, &[0, 1]).unwrap().hodge_complement().unwrap();
    assert_eq!(star, MultiVector::basis(4, &[2, 3]).unwrap());
    assert!(MultiVector::basis(3, &[0, 1]).unwrap().scaled(2.0).hodge_complement().is_err());
}

#[test]
fn tangent_frame_examples() {
    let f = tangent_frame(&entry("plane").immersion, &[0.3, -0.2]).unwrap();
    assert_abs_diff_eq!(f.basis().clone(), DMatrix::from_columns(&[dv(&e(3, 0)), dv(&e(3, 1))]), epsilon = 1e-15);

    let cat = entry("catenoid");
    let f = tangent_frame(&cat.immersion, &[0.0, 0.0]).unwrap();
    assert_abs_diff_eq!(f.basis().column(0).clone_owned(), dv(&[0.0, 1.0, 0.0]), epsilon = 1e-15);
    assert_abs_diff_eq!(f.basis().column(1).clone_owned(), dv(&[0.0, 0.0, 1.0]), epsilon = 1e-15);

    let sphere = entry("round_sphere");
    let f = tangent_frame(&sphere.immersion, &[0.0, 0.0]).unwrap();
    assert_abs_diff_eq!(f.basis().column(0).clone_owned(), dv(&[0.0, 1.0, 0.0]), epsilon = 1e-15);
    assert_abs_diff_eq!(f.basis().column(1).clone_owned(), dv(&[0.0, 0.0, 1.0]), epsilon = 1e-15);
}

#[test]
fn fundamental_data_examples() {
    let fd = fundamental_data(&entry("plane").immersion, &[0.5, 0.5]).unwrap();
    assert_eq!(fd.mean_curvature.norm(), 0.0);

    let sphere = entry("round_sphere");
    for u in [[0.0, 0.0], [1.0, 0.4], [4.0, -1.1]] {
        let fd = fundamental_data(&sphere.immersion, &u).unwrap();
        let x = &fd.position;
        for a in 0..2 {
            for b in 0..2 {
                let expected = if a == b { -x } else { DVector::zeros(3) };
                assert_abs_diff_eq!(fd.b(a, b).clone(), expected, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(fd.mean_curvature.norm(), 2.0, epsilon = 1e-12);
    }
}

#[test]
fn ricci_examples() {
    let plane_imm = entry("plane").immersion;
    let fd = fundamental_data(&plane_imm, &[0.1, 0.2]).unwrap();
    assert_eq!(ricci_extrinsic(&fd).components().abs().max(), 0.0);
    assert!(ricci_intrinsic(&plane_imm, &[0.1, 0.2]).unwrap().components().abs().max() <= 1e-12);

    let cat = entry("catenoid").immersion;
    for u in [0.0, 1.3, 4.0] {
        let fd = fundamental_data(&cat, &[u, 0.0]).unwrap();
        let minus_id = -DMatrix::<f64>::identity(2, 2);
        assert!(max_diff(ricci_extrinsic(&fd).components(), &minus_id) <= 1e-12);
        assert!(max_diff(ricci_intrinsic(&cat, &[u, 0.0]).unwrap().components(), &minus_id) <= 1e-5);
    }

    let sphere = entry("round_sphere").immersion;
    let fd = fundamental_data(&sphere, &[0.7, 0.2]).unwrap();
    assert!(max_diff(ricci_extrinsic(&fd).components(), &DMatrix::identity(2, 2)) <= 1e-12);

    let torus = entry("clifford_torus").immersion;
    assert!(ricci_intrinsic(&torus, &[0.4, 2.0]).unwrap().components().abs().max() <= 1e-5);
}

#[test]
fn gauss_map_examples() {
    let plane_imm = entry("plane").immersion;
    let e12 = MultiVector::basis(3, &[0, 1]).unwrap();
    for u in [[0.0, 0.0], [0.9, -0.4]] {
        assert_eq!(gauss_map(&plane_imm, &u).unwrap(), e12);
    }

    let cat = entry("catenoid").immersion;
    let phi = gauss_map(&cat, &[0.0, 0.0]).unwrap();
    let expected = wedge(&[dv(&[0.0, 1.0, 0.0]), dv(&[0.0, 0.0, 1.0])]).unwrap();
    assert!(phi.max_abs_diff(&expected).unwrap() <= 1e-15);

    // Helicoid at (0, 1): x_u = (0, 1, 1), x_v = (1, 0, 0).
    let hel = entry("helicoid").immersion;
    let z1 = dv(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let z2 = dv(&[1.0, 0.0, 0.0]);
    let phi = gauss_map(&hel, &[0.0, 1.0]).unwrap();
    assert!(phi.max_abs_diff(&wedge(&[z1, z2]).unwrap()).unwrap() <= 1e-15);
    assert_abs_diff_eq!(phi.norm(), 1.0, epsilon = 1e-15);
}

#[test]
fn derivation_examples() {
    let plane_imm = entry("plane").immersion;
    let fd = fundamental_data(&plane_imm, &[0.2, 0.1]).unwrap();
    assert_eq!(gauss_map_differential_derivation(&fd, &[0.6, 0.8]).norm(), 0.0);

    let sphere = entry("round_sphere").immersion;
    let fd = fundamental_data(&sphere, &[0.3, 0.5]).unwrap();
    let z2 = fd.frame.basis().column(1).clone_owned();
    let expected = wedge(&[-fd.position.clone(), z2]).unwrap();
    let got = gauss_map_differential_derivation(&fd, &[1.0, 0.0]);
    assert!(got.max_abs_diff(&expected).unwrap() <= 1e-12);

    let cat = entry("catenoid").immersion;
    let fd = fundamental_data(&cat, &[0.0, 0.0]).unwrap();
    let formula = gauss_map_differential_derivation(&fd, &[1.0, 0.0]);
    let numeric = gauss_map_differential_fd(&cat, &[0.0, 0.0], &[1.0, 0.0]).unwrap();
    assert!(formula.max_abs_diff(&numeric).unwrap() <= 1e-5);
}

#[test]
fn pullback_phi_examples() {
    let id = DMatrix::<f64>::identity(2, 2);
    assert_eq!(pullback_metric_phi(&entry("plane").immersion, &[0.0, 0.0]).unwrap().abs().max(), 0.0);
    let cat = pullback_metric_phi(&entry("catenoid").immersion, &[2.0, 0.0]).unwrap();
    assert!(max_diff(&cat, &id) <= 1e-12);
    let sphere = pullback_metric_phi(&entry("round_sphere").immersion, &[1.0, 0.3]).unwrap();
    assert!(max_diff(&sphere, &id) <= 1e-12);
}

#[test]
fn corollary_minimal_examples() {
    let plane = entry("plane");
    let report = verify_corollary_minimal(&plane.immersion, &plane.default_grid, &Tolerances::defaults(true));
    assert!(report.passed());
    assert!(report.summary.max_residual.values().all(|&r| r == 0.0));

    for name in ["catenoid", "enneper"] {
        let e = entry(name);
        assert_eq!(e.default_grid.resolution(), &[41, 41]);
        let report = verify_corollary_minimal(&e.immersion, &e.default_grid, &Tolerances::defaults(true));
        assert!(report.passed(), "{name}");
        assert!(report.summary.max_residual["trace_b"] <= 1e-8);
        assert!(report.summary.max_residual["corollary_minimal"] <= 1e-5);
    }
}

#[test]
fn catenoid_grid_is_minimal() {
    let cat = entry("catenoid");
    let g = &cat.default_grid;
    assert_eq!(g.lower(), &[0.0, -2.0]);
    assert_eq!(g.upper(), &[2.0 * PI, 2.0]);
    for i in 0..g.len() {
        let fd = fundamental_data(&cat.immersion, &g.point(i)).unwrap();
        assert!(fd.mean_curvature.norm() <= 1e-8);
    }
}

#[test]
fn split_second_form_examples() {
    let circle = entry("great_circle").nested().unwrap();
    for u in [0.0, 1.0, 5.5] {
        let pair = split_second_form(&circle, &[u]).unwrap();
        assert!(pair.b_mn(0, 0).norm() <= 1e-12);
    }

    let torus = entry("clifford_torus").nested().unwrap();
    let pair = split_second_form(&torus, &[0.3, 1.7]).unwrap();
    assert!(pair.trace_mn().norm() <= 1e-8);
    let ambient = pair.ambient.mean_curvature.norm();
    let radial = pair.position().dot(&pair.ambient.mean_curvature).abs();
    assert_abs_diff_eq!(ambient, radial, epsilon = 1e-12);
    assert_abs_diff_eq!(ambient, 2.0, epsilon = 1e-12);

    let small = entry("small_circle").nested().unwrap();
    let pair = split_second_form(&small, &[0.8]).unwrap();
    assert_abs_diff_eq!(pair.trace_mn().norm(), FRAC_PI_6.tan(), epsilon = 1e-6);
    assert!(pair.radial_residual <= 1e-8);
}

#[test]
fn second_gauss_map_examples() {
    let great = entry("great_sphere").nested().unwrap();
    let psi0 = second_gauss_map(&great, &[0.0, 0.0]).unwrap();
    for u in [[1.0, 0.5], [3.0, -1.0]] {
        assert!(second_gauss_map(&great, &u).unwrap().max_abs_diff(&psi0).unwrap() <= 1e-10);
    }

    let torus = entry("clifford_torus").nested().unwrap();
    let psi = second_gauss_map(&torus, &[0.0, 0.0]).unwrap();
    let v = MultiVector::new(4, 1, vec![-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
    assert_abs_diff_eq!(psi.inner(&v).unwrap().abs(), 1.0, epsilon = 1e-12);

    let circle = entry("great_circle").nested().unwrap();
    for u in [0.0, 2.0, 4.0] {
        let psi = second_gauss_map(&circle, &[u]).unwrap();
        assert!(psi.coords()[0].abs() <= 1e-15 && psi.coords()[1].abs() <= 1e-15);
        assert_abs_diff_eq!(psi.coords()[2].abs(), 1.0, epsilon = 1e-15);
    }
}

#[test]
fn pullback_psi_and_lemma_examples() {
    let great = entry("great_sphere").nested().unwrap();
    let u = [0.4, 0.3];
    assert!(pullback_metric_psi(&great, &u).unwrap().abs().max() <= 1e-10);
    assert!(lemma_seclemma_rhs(&great, &u).unwrap().abs().max() <= 1e-12);

    let torus = entry("clifford_torus").nested().unwrap();
    let id = DMatrix::<f64>::identity(2, 2);
    assert!(max_diff(&pullback_metric_psi(&torus, &u).unwrap(), &id) <= 1e-5);
    assert!(max_diff(&lemma_seclemma_rhs(&torus, &u).unwrap(), &id) <= 1e-12);

    let small = entry("small_circle").nested().unwrap();
    let lhs = pullback_metric_psi(&small, &[1.1]).unwrap();
    let rhs = lemma_seclemma_rhs(&small, &[1.1]).unwrap();
    assert!(max_diff(&lhs, &rhs) <= 1e-5);
}

#[test]
fn opposite_curvature_convention_is_offset() {
    // The other sign convention shifts the right-hand side by 2(n − m + 1)g.
    for (name, u) in [("small_circle", vec![0.4]), ("great_sphere", vec![0.4, 0.3])] {
        let nimm = entry(name).nested().unwrap();
        let pos = lemma_seclemma_rhs(&nimm, &u).unwrap();
        let neg = lemma_seclemma_rhs_with(&nimm, &u, CurvatureConvention::NegativeSectional).unwrap();
        let shift = 2.0 * (nimm.n() as f64 - nimm.m() as f64 + 1.0);
        let m = nimm.m();
        assert!(max_diff(&(neg - pos), &(DMatrix::identity(m, m) * shift)) <= 1e-12, "{name}");
    }
}

#[test]
fn corollary_sphere_examples() {
    for name in ["great_sphere", "clifford_torus"] {
        let e = entry(name);
        let report = verify_corollary_sphere(&e.nested().unwrap(), &e.default_grid, &Tolerances::defaults(true));
        assert!(report.passed(), "{name}");
    }
    let flat = entry("flat_torus(0.6)");
    assert_eq!(flat.minimal_in, MinimalIn::None);
    let report = verify_corollary_sphere(&flat.nested().unwrap(), &flat.default_grid, &Tolerances::defaults(true));
    assert!(!report.passed());
    assert!(report.summary.max_residual["trace_b_mn"] > 1e-8);
}

#[test]
fn catalog_examples() {
    let cat = Catalog::builtin();
    let names = cat.names();
    for n in ["plane", "catenoid", "helicoid", "enneper", "holo_z2", "great_sphere", "clifford_torus", "small_circle"] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
    assert_eq!(cat.get("holo_z2").unwrap().immersion.ambient_dim(), 4);
    assert!(cat.get("small_circle(0.3)").is_ok());

    let plane = cat.get("plane").unwrap();
    assert_eq!(plane.minimal_in, MinimalIn::Euclidean);
    let ric = plane.closed_forms.frame_ricci.as_ref().unwrap();
    assert_eq!(ric(&[0.3, 0.1]).abs().max(), 0.0);

    let catenoid = cat.get("catenoid").unwrap();
    let u = [0.7, 1.2];
    let g = catenoid.closed_forms.metric.as_ref().unwrap()(&u);
    let c2 = 1.2f64.cosh().powi(2);
    assert!(max_diff(&g, &(DMatrix::identity(2, 2) * c2)) <= 1e-12);
    let k = -1.2f64.cosh().powi(-4);
    let ric = catenoid.closed_forms.frame_ricci.as_ref().unwrap()(&u);
    assert!(max_diff(&ric, &(DMatrix::identity(2, 2) * k)) <= 1e-12);
    assert!(max_diff(ricci_intrinsic(&catenoid.immersion, &u).unwrap().components(), &ric) <= 1e-5);

    let torus = cat.get("clifford_torus").unwrap();
    assert_eq!(torus.minimal_in, MinimalIn::Sphere);
    let g = torus.closed_forms.metric.as_ref().unwrap()(&u);
    assert!(max_diff(&g, &(DMatrix::identity(2, 2) * 0.5)) <= 1e-15);
    assert_eq!(torus.closed_forms.frame_ricci.as_ref().unwrap()(&u).abs().max(), 0.0);

    match cat.get("moebius") {
        Err(err) => assert!(err.to_string().contains("catenoid")),
        Ok(_) => panic!("unknown entry accepted"),
    }
}
