//! Two-dimensional Finsler geometry: a jet-based curvature engine, closed-form
//! Randers machinery, Zermelo navigation, and a catalog of constant flag
//! curvature metrics with numerical verification of their properties.

pub mod catalog;
pub mod chart;
pub mod error;
pub mod finsler;
pub mod jets;
pub mod linalg;
pub mod metric;
pub mod navigation;
pub mod randers;
pub mod sampling;
pub mod verify;

pub use catalog::{CatalogEntry, CatalogId, CatalogRanders, Expected, GaussFormula};
pub use chart::{Chart, ChartPoint, TangentVector};
pub use error::{FinslerError, Result};
pub use finsler::{
    bh_volume_density, curvature_report, flag_curvature, fundamental_tensor, geodesic_flow,
    riemann, s_curvature, spray, CurvatureReport, FundamentalTensor, GeodesicPath,
    RiemannOperator, SprayCoefficients,
};
pub use jets::{Jet, Scalar};
pub use metric::{Euclidean, InChart, Metric, RandersMetric};
pub use navigation::{Background, ConstantWind, NavigationProblem, Rotation, VectorField};
pub use randers::{
    classify_s_curvature, covariant_data, diagnostics, gauss_curvature_riemannian, randers_ricci,
    randers_riemann, randers_spray, Coefficients, Diagnostics, RandersData, SCurvatureClass,
};
pub use sampling::Grid;
pub use verify::{Theorem, Tolerances, VerificationRun, VerifyConfig};
