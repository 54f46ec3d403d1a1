//! Grassmannian distances, the Plücker embedding and the first and second
//! Gauss maps of chart immersions, with numerical checks of the pullback
//! identities φ*h = −Ric (minimal in R^k) and ψ*h = (m − 1)g − Ric (minimal in
//! the unit sphere).

pub mod catalog;
pub mod error;
pub mod fd;
pub mod grassmann;
pub mod grid;
pub mod immersion;
pub mod linalg;
pub mod multivector;
pub mod report;
pub mod spherical;
pub mod suites;

pub use catalog::{Catalog, CatalogEntry, CatalogError};
pub use error::{GeometryError, Result};
pub use grassmann::{
    canonical_distance, overlap_matrix, pluecker_embed, principal_angles, principal_cosines,
    spherical_distance, OrientedPlane, PrincipalCosines,
};
pub use grid::Grid;
pub use immersion::{
    fundamental_data, gauss_map, gauss_map_differential_derivation, pullback_metric_phi,
    ricci_extrinsic, ricci_intrinsic, tangent_frame, FundamentalData, MinimalIn,
    ParametrizedImmersion, RicciTensor,
};
pub use multivector::{sphere_distance_embedded, MultiVector};
pub use report::{Tolerances, VerificationReport};
pub use spherical::{
    lemma_seclemma_rhs, pullback_metric_psi, second_gauss_map, split_second_form, NestedImmersion,
    SecondFormPair,
};
pub use suites::{grassmann_fuzz, scan_ric, verify_corollary_minimal, verify_corollary_sphere};
