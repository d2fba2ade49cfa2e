//! Metric primitives for the three constant-curvature models.
//!
//! * Euclidean plane: plain `(x, y)` coordinates.
//! * Sphere (K = +1): unit vectors in R³.
//! * Hyperbolic plane (K = −1): the upper sheet of the hyperboloid
//!   `⟨v,v⟩ = −1` under the Minkowski form `⟨x,y⟩ = −x₀y₀ + x₁y₁ + x₂y₂`.
//!
//! A triangle side is carried by a [`GeodesicPole`] on the curved models and
//! by a [`EuclideanLine`] in the plane. Both are oriented so that the
//! triangle interior has positive signed distance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Geometry tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [
        Geometry::Euclidean,
        Geometry::Spherical,
        Geometry::Hyperbolic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Spherical => "spherical",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }

    /// Gaussian curvature of the model.
    pub fn curvature(self) -> i8 {
        match self {
            Geometry::Euclidean => 0,
            Geometry::Spherical => 1,
            Geometry::Hyperbolic => -1,
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "e" => Ok(Geometry::Euclidean),
            "spherical" | "s" => Ok(Geometry::Spherical),
            "hyperbolic" | "h" => Ok(Geometry::Hyperbolic),
            other => Err(format!("unknown geometry '{other}'")),
        }
    }
}

/// Plain 3-vector used as ambient coordinates of the curved models.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Scalar> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    #[inline]
    pub fn x(&self) -> T {
        self.0[0]
    }

    #[inline]
    pub fn y(&self) -> T {
        self.0[1]
    }

    #[inline]
    pub fn z(&self) -> T {
        self.0[2]
    }

    #[inline]
    pub fn dot(&self, o: &Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    /// Minkowski form of signature (−,+,+).
    #[inline]
    pub fn minkowski(&self, o: &Self) -> T {
        -self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn cross(&self, o: &Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        Vec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    /// Applies `J = diag(−1, 1, 1)`.
    ///
    /// `J(a × b)` is Minkowski-orthogonal to both `a` and `b`.
    #[inline]
    pub fn flip_time(&self) -> Self {
        Vec3([-self.0[0], self.0[1], self.0[2]])
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn scale(&self, s: T) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Scalar triple product `det(a, b, c)`.
    #[inline]
    pub fn triple(a: &Self, b: &Self, c: &Self) -> T {
        a.dot(&b.cross(c))
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl<T: Scalar> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Point of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanPoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> EuclideanPoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidPoint {
                geometry: Geometry::Euclidean,
                reason: "non-finite coordinate".into(),
            });
        }
        Ok(EuclideanPoint { x, y })
    }
}

/// Point of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint<T> {
    v: Vec3<T>,
}

impl<T: Scalar> SphericalPoint<T> {
    /// Accepts `v` with `|‖v‖ − 1|` inside the normalization band and
    /// re-normalizes it; anything further off the sphere is rejected.
    pub fn new(v: Vec3<T>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidPoint {
            geometry: Geometry::Spherical,
            reason,
        };
        if !v.is_finite() {
            return Err(invalid("non-finite coordinate".into()));
        }
        let n = v.norm();
        if (n - T::one()).abs() > T::lit(T::NORMALIZATION_TOL) {
            return Err(invalid(format!("‖v‖ = {n}, expected 1")));
        }
        Ok(SphericalPoint {
            v: v.scale(n.recip()),
        })
    }

    /// Projects any non-zero vector onto the sphere.
    pub fn normalize(v: Vec3<T>) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > T::zero()) {
            return Err(Error::InvalidPoint {
                geometry: Geometry::Spherical,
                reason: "cannot normalize a zero or non-finite vector".into(),
            });
        }
        Ok(SphericalPoint {
            v: v.scale(n.recip()),
        })
    }

    /// Point at angular distance `polar` from the north pole `(0,0,1)`,
    /// at longitude `azimuth`.
    pub fn from_polar(polar: T, azimuth: T) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        SphericalPoint {
            v: Vec3::new(sp * ca, sp * sa, cp),
        }
    }

    #[inline]
    pub fn vector(&self) -> Vec3<T> {
        self.v
    }
}

/// Point of the upper hyperboloid sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint<T> {
    v: Vec3<T>,
}

impl<T: Scalar> HyperbolicPoint<T> {
    /// Accepts `v` with `|⟨v,v⟩ + 1|` inside the normalization band and
    /// `v₀ > 0`, re-normalizing it onto the sheet.
    pub fn new(v: Vec3<T>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidPoint {
            geometry: Geometry::Hyperbolic,
            reason,
        };
        if !v.is_finite() {
            return Err(invalid("non-finite coordinate".into()));
        }
        let q = v.minkowski(&v);
        if (q + T::one()).abs() > T::lit(T::NORMALIZATION_TOL) {
            return Err(invalid(format!("⟨v,v⟩ = {q}, expected -1")));
        }
        if v.x() <= T::zero() {
            return Err(invalid("point on the lower sheet".into()));
        }
        Ok(HyperbolicPoint {
            v: v.scale((-q).sqrt().recip()),
        })
    }

    /// Normalizes any future-pointing timelike vector onto the sheet.
    pub fn from_timelike(v: Vec3<T>) -> Result<Self> {
        let q = v.minkowski(&v);
        if !(q < T::zero() && v.is_finite()) {
            return Err(Error::InvalidPoint {
                geometry: Geometry::Hyperbolic,
                reason: format!("vector is not timelike (⟨v,v⟩ = {q})"),
            });
        }
        let v = if v.x() < T::zero() { -v } else { v };
        Ok(HyperbolicPoint {
            v: v.scale((-q).sqrt().recip()),
        })
    }

    /// Lifts spatial coordinates `(x₁, x₂)` onto the sheet; always valid.
    pub fn lift(x1: T, x2: T) -> Self {
        let t = (T::one() + x1 * x1 + x2 * x2).sqrt();
        HyperbolicPoint {
            v: Vec3::new(t, x1, x2),
        }
    }

    /// Point at hyperbolic distance `radius` from `(1,0,0)` in direction `azimuth`.
    pub fn from_polar(radius: T, azimuth: T) -> Self {
        let (sa, ca) = azimuth.sin_cos();
        let s = radius.sinh();
        HyperbolicPoint {
            v: Vec3::new(radius.cosh(), s * ca, s * sa),
        }
    }

    #[inline]
    pub fn vector(&self) -> Vec3<T> {
        self.v
    }
}

/// Oriented geodesic of a curved model, stored as the plane normal.
///
/// Spherical poles are Euclidean unit vectors; hyperbolic poles are
/// spacelike with `⟨n,n⟩ = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPole<T> {
    pub n: Vec3<T>,
    pub geometry: Geometry,
}

/// Oriented line of the Euclidean plane: `{p : normal · p = offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanLine<T> {
    pub normal: [T; 2],
    pub offset: T,
}

/// Point type of one model, with the metric operations every center
/// construction is built on.
pub trait ModelPoint: Copy + fmt::Debug + PartialEq + Send + Sync {
    type Scalar: Scalar;
    /// Representation of an oriented triangle side.
    type Side: Copy + fmt::Debug;

    const GEOMETRY: Geometry;

    /// Geodesic distance; symmetric and non-negative.
    fn distance(&self, other: &Self) -> Self::Scalar;

    /// Geodesic through `a` and `b`, oriented so `interior_hint` lies on the
    /// positive side.
    fn side(a: &Self, b: &Self, interior_hint: &Self) -> Result<Self::Side>;

    /// Signed distance to an oriented side, positive on the interior side.
    fn signed_distance(&self, side: &Self::Side) -> Self::Scalar;

    /// Ambient coordinates, for reports.
    fn coords(&self) -> Vec<f64>;
}

/// Distance between two points of the same model.
pub fn distance<P: ModelPoint>(p: &P, q: &P) -> P::Scalar {
    p.distance(q)
}

/// Oriented side through `a` and `b` with the interior towards `interior_hint`.
pub fn side_pole<P: ModelPoint>(a: &P, b: &P, interior_hint: &P) -> Result<P::Side> {
    P::side(a, b, interior_hint)
}

/// Signed distance from `p` to an oriented side.
pub fn point_to_geodesic<P: ModelPoint>(p: &P, side: &P::Side) -> P::Scalar {
    p.signed_distance(side)
}

impl<T: Scalar> ModelPoint for EuclideanPoint<T> {
    type Scalar = T;
    type Side = EuclideanLine<T>;

    const GEOMETRY: Geometry = Geometry::Euclidean;

    fn distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn side(a: &Self, b: &Self, interior_hint: &Self) -> Result<EuclideanLine<T>> {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len = dx.hypot(dy);
        if len < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateSide);
        }
        let mut normal = [-dy / len, dx / len];
        let mut offset = normal[0] * a.x + normal[1] * a.y;
        let s = normal[0] * interior_hint.x + normal[1] * interior_hint.y - offset;
        if s.abs() < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateTriangle(
                "interior hint lies on the side".into(),
            ));
        }
        if s < T::zero() {
            normal = [-normal[0], -normal[1]];
            offset = -offset;
        }
        Ok(EuclideanLine { normal, offset })
    }

    fn signed_distance(&self, side: &EuclideanLine<T>) -> T {
        side.normal[0] * self.x + side.normal[1] * self.y - side.offset
    }

    fn coords(&self) -> Vec<f64> {
        vec![self.x.as_f64(), self.y.as_f64()]
    }
}

impl<T: Scalar> ModelPoint for SphericalPoint<T> {
    type Scalar = T;
    type Side = GeodesicPole<T>;

    const GEOMETRY: Geometry = Geometry::Spherical;

    /// Central angle, evaluated as `atan2(‖p×q‖, p·q)`; equal to
    /// `arccos(p·q)` but accurate for nearly coincident points.
    fn distance(&self, other: &Self) -> T {
        let cos = self.v.dot(&other.v).clamp_unit();
        let sin = self.v.cross(&other.v).norm();
        sin.atan2(cos)
    }

    fn side(a: &Self, b: &Self, interior_hint: &Self) -> Result<GeodesicPole<T>> {
        let c = a.v.cross(&b.v);
        let len = c.norm();
        if len < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateSide);
        }
        let n = c.scale(len.recip());
        let s = n.dot(&interior_hint.v);
        if s.abs() < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateTriangle(
                "interior hint lies on the side".into(),
            ));
        }
        Ok(GeodesicPole {
            n: if s < T::zero() { -n } else { n },
            geometry: Geometry::Spherical,
        })
    }

    /// `arcsin(p·n)`, evaluated as `atan2(p·n, ‖p×n‖)` so that distances
    /// close to `π/2` keep full precision.
    fn signed_distance(&self, side: &GeodesicPole<T>) -> T {
        let sin = self.v.dot(&side.n).clamp_unit();
        let cos = self.v.cross(&side.n).norm();
        sin.atan2(cos)
    }

    fn coords(&self) -> Vec<f64> {
        self.v.0.iter().map(|c| c.as_f64()).collect()
    }
}

impl<T: Scalar> ModelPoint for HyperbolicPoint<T> {
    type Scalar = T;
    type Side = GeodesicPole<T>;

    const GEOMETRY: Geometry = Geometry::Hyperbolic;

    /// `arccosh(−⟨p,q⟩)`. Short distances go through the chord form
    /// `2 asinh(√⟨p−q,p−q⟩ / 2)`, which does not lose precision near zero.
    fn distance(&self, other: &Self) -> T {
        let c = -self.v.minkowski(&other.v);
        if c > T::two() {
            return c.acosh();
        }
        let diff = self.v - other.v;
        let chord = diff.minkowski(&diff).max(T::zero()).sqrt();
        T::two() * (chord / T::two()).asinh()
    }

    fn side(a: &Self, b: &Self, interior_hint: &Self) -> Result<GeodesicPole<T>> {
        let c = a.v.cross(&b.v);
        if c.norm() < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateSide);
        }
        let m = c.flip_time();
        let q = m.minkowski(&m);
        if q <= T::zero() {
            return Err(Error::DegenerateSide);
        }
        let n = m.scale(q.sqrt().recip());
        let s = interior_hint.v.minkowski(&n);
        if s.abs() < T::lit(T::DEGENERACY_TOL) {
            return Err(Error::DegenerateTriangle(
                "interior hint lies on the side".into(),
            ));
        }
        Ok(GeodesicPole {
            n: if s < T::zero() { -n } else { n },
            geometry: Geometry::Hyperbolic,
        })
    }

    fn signed_distance(&self, side: &GeodesicPole<T>) -> T {
        self.v.minkowski(&side.n).asinh()
    }

    fn coords(&self) -> Vec<f64> {
        self.v.0.iter().map(|c| c.as_f64()).collect()
    }
}
