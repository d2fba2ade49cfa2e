use thiserror::Error;

use crate::geom::Geometry;

/// Errors raised by constructions, identity evaluators and the sampler.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{geometry} point is not on the model: {reason}")]
    InvalidPoint { geometry: Geometry, reason: String },

    #[error("degenerate side: the two endpoints coincide or are antipodal")]
    DegenerateSide,

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    /// The vertices lie on a horocycle or hypercycle; there is no circumscribed circle.
    #[error("ideal circumcenter: the vertices lie on a horocycle or hypercycle, not a circle")]
    IdealCircumcenter,

    #[error("unrealizable (R, r) pair: {0}")]
    UnrealizablePair(String),

    #[error("non-positive discriminant -tanh²r + (1 - tanh r tanh R)² = {0}")]
    NegativeDiscriminant(f64),

    #[error("singular denominator cosh²(r+d) - cosh²R cosh²r = {0}")]
    SingularDenominator(f64),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    #[error("sampling exhausted: accepted {accepted} of {attempts} attempts")]
    SamplingExhausted { accepted: usize, attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
