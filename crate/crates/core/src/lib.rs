//! Triangle centers in Euclidean, spherical and hyperbolic geometry, and
//! numerical verification of Chapple-Euler type identities between the
//! circumradius `R`, the inradius `r` and the center distance `d`.
//!
//! The geometry is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`.

pub mod centers;
pub mod cli;
pub mod error;
pub mod geom;
pub mod identities;
pub mod report;
pub mod sampler;
pub mod scalar;

pub use centers::{
    analyze, circumcenter, incenter, AnyTriangle, CenterReport, Triangle, TriangleCenters,
};
pub use error::{Error, Result};
pub use geom::{
    distance, point_to_geodesic, side_pole, EuclideanLine, EuclideanPoint, GeodesicPole, Geometry,
    HyperbolicPoint, ModelPoint, SphericalPoint, Vec3,
};
pub use identities::{identities_for, identity_report, IdentityReport, InequalitySlack, Residual};
pub use report::{evaluate, verify, RunReport, TriangleEvaluation, VerifyConfig};
pub use sampler::{sample, Family, SampleConfig};
pub use scalar::Scalar;

pub type Point2 = EuclideanPoint<f64>;
pub type SpherePoint = SphericalPoint<f64>;
pub type HyperboloidPoint = HyperbolicPoint<f64>;
pub type Pole = GeodesicPole<f64>;
pub type EuclideanTriangle = Triangle<EuclideanPoint<f64>>;
pub type SphericalTriangle = Triangle<SphericalPoint<f64>>;
pub type HyperbolicTriangle = Triangle<HyperbolicPoint<f64>>;
pub type AnyTriangle64 = AnyTriangle<f64>;
pub type Identities = IdentityReport<f64>;
