//! Circumcenter, incenter and center distance of a triangle.
//!
//! The curved-model constructions are linear-algebraic:
//!
//! * circumcenter: the normal of the plane through the three vertices,
//!   `(b − a) × (c − a)` on the sphere and `J((b − a) × (c − a))` on the
//!   hyperboloid;
//! * incenter: the point with equal products against the three oriented side
//!   poles, `(n_a − n_b) × (n_b − n_c)` (with `J` on the hyperboloid).

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{EuclideanPoint, Geometry, HyperbolicPoint, ModelPoint, SphericalPoint, Vec3};
use crate::scalar::Scalar;

/// Three vertices of one model, pairwise distinct and not on a common geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle<P> {
    a: P,
    b: P,
    c: P,
}

/// Circumcenter, incenter and the derived radii of one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterReport<P: ModelPoint> {
    pub circumcenter: P,
    pub incenter: P,
    /// Circumradius `R`.
    pub circumradius: P::Scalar,
    /// Inradius `r`.
    pub inradius: P::Scalar,
    /// Distance `d` between circumcenter and incenter.
    pub center_distance: P::Scalar,
}

/// Models that know how to build triangle centers.
pub trait TriangleCenters: ModelPoint {
    /// Collinearity measure; zero iff the three points share a geodesic.
    fn orientation(a: &Self, b: &Self, c: &Self) -> Self::Scalar;

    fn circumcenter(t: &Triangle<Self>) -> Result<(Self, Self::Scalar)>;

    fn incenter(t: &Triangle<Self>) -> Result<(Self, Self::Scalar)>;
}

impl<P: TriangleCenters> Triangle<P> {
    pub fn new(a: P, b: P, c: P) -> Result<Self> {
        let tol = P::Scalar::lit(<P::Scalar as Scalar>::DEGENERACY_TOL);
        for (p, q, name) in [(&a, &b, "a, b"), (&b, &c, "b, c"), (&c, &a, "c, a")] {
            if p.distance(q) <= tol {
                return Err(Error::DegenerateTriangle(format!(
                    "vertices {name} coincide"
                )));
            }
        }
        if P::orientation(&a, &b, &c).abs() <= tol {
            return Err(Error::DegenerateTriangle(
                "vertices lie on a common geodesic".into(),
            ));
        }
        Ok(Triangle { a, b, c })
    }

    pub fn vertices(&self) -> [P; 3] {
        [self.a, self.b, self.c]
    }

    pub fn geometry(&self) -> Geometry {
        P::GEOMETRY
    }

    /// Side lines, each oriented towards the opposite vertex:
    /// `[side bc, side ca, side ab]`.
    pub fn sides(&self) -> Result<[P::Side; 3]> {
        Ok([
            P::side(&self.b, &self.c, &self.a)?,
            P::side(&self.c, &self.a, &self.b)?,
            P::side(&self.a, &self.b, &self.c)?,
        ])
    }
}

/// Circumcenter and circumradius.
pub fn circumcenter<P: TriangleCenters>(t: &Triangle<P>) -> Result<(P, P::Scalar)> {
    P::circumcenter(t)
}

/// Incenter and inradius.
pub fn incenter<P: TriangleCenters>(t: &Triangle<P>) -> Result<(P, P::Scalar)> {
    P::incenter(t)
}

/// Builds both centers and the distance between them.
pub fn analyze<P: TriangleCenters>(t: &Triangle<P>) -> Result<CenterReport<P>> {
    let (circumcenter, circumradius) = P::circumcenter(t)?;
    let (incenter, inradius) = P::incenter(t)?;
    Ok(CenterReport {
        circumcenter,
        incenter,
        circumradius,
        inradius,
        center_distance: circumcenter.distance(&incenter),
    })
}

/// `max − min` of the circumcenter-to-vertex distances and of the
/// incenter-to-side signed distances.
pub fn equidistance_spreads<P: TriangleCenters>(
    t: &Triangle<P>,
    report: &CenterReport<P>,
) -> Result<(P::Scalar, P::Scalar)> {
    let vertex = t.vertices().map(|v| report.circumcenter.distance(&v));
    let sides = t.sides()?.map(|s| report.incenter.signed_distance(&s));
    Ok((spread(&vertex), spread(&sides)))
}

fn spread<T: Scalar>(xs: &[T; 3]) -> T {
    let hi = xs.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = xs.iter().copied().fold(T::infinity(), T::min);
    hi - lo
}

impl<T: Scalar> TriangleCenters for EuclideanPoint<T> {
    fn orientation(a: &Self, b: &Self, c: &Self) -> T {
        (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    }

    fn circumcenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let [a, b, c] = t.vertices();
        let (bx, by) = (b.x - a.x, b.y - a.y);
        let (cx, cy) = (c.x - a.x, c.y - a.y);
        let den = T::two() * (bx * cy - by * cx);
        let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
        let ux = (cy * b2 - by * c2) / den;
        let uy = (bx * c2 - cx * b2) / den;
        let center = EuclideanPoint::new(a.x + ux, a.y + uy)?;
        Ok((center, ux.hypot(uy)))
    }

    fn incenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let [a, b, c] = t.vertices();
        let (la, lb, lc) = (b.distance(&c), c.distance(&a), a.distance(&b));
        let perimeter = la + lb + lc;
        let x = (la * a.x + lb * b.x + lc * c.x) / perimeter;
        let y = (la * a.y + lb * b.y + lc * c.y) / perimeter;
        let area = Self::orientation(&a, &b, &c).abs() / T::two();
        Ok((EuclideanPoint::new(x, y)?, T::two() * area / perimeter))
    }
}

impl<T: Scalar> TriangleCenters for SphericalPoint<T> {
    fn orientation(a: &Self, b: &Self, c: &Self) -> T {
        Vec3::triple(&a.vector(), &b.vector(), &c.vector())
    }

    /// Of the two antipodal candidates, returns the one with `R ≤ π/2`.
    fn circumcenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let [a, b, c] = t.vertices().map(|p| p.vector());
        let w = (b - a).cross(&(c - a));
        let w = if w.dot(&a) < T::zero() { -w } else { w };
        let center = SphericalPoint::normalize(w)
            .map_err(|_| Error::DegenerateTriangle("no circumscribed circle".into()))?;
        let radius = center.distance(&t.vertices()[0]);
        Ok((center, radius))
    }

    fn incenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let [na, nb, nc] = t.sides()?.map(|s| s.n);
        let w = (na - nb).cross(&(nb - nc));
        let w = if w.dot(&na) < T::zero() { -w } else { w };
        let center = SphericalPoint::normalize(w)
            .map_err(|_| Error::DegenerateTriangle("incenter construction collapsed".into()))?;
        check_interior([na, nb, nc].map(|n| center.vector().dot(&n)))?;
        let side = crate::geom::GeodesicPole {
            n: na,
            geometry: Geometry::Spherical,
        };
        Ok((center, center.signed_distance(&side)))
    }
}

impl<T: Scalar> TriangleCenters for HyperbolicPoint<T> {
    fn orientation(a: &Self, b: &Self, c: &Self) -> T {
        Vec3::triple(&a.vector(), &b.vector(), &c.vector())
    }

    /// Fails with [`Error::IdealCircumcenter`] when the plane through the
    /// vertices has a non-timelike normal.
    fn circumcenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let [a, b, c] = t.vertices().map(|p| p.vector());
        let m = (b - a).cross(&(c - a)).flip_time();
        if m.minkowski(&m) >= T::zero() {
            return Err(Error::IdealCircumcenter);
        }
        let center = HyperbolicPoint::from_timelike(m).map_err(|_| Error::IdealCircumcenter)?;
        let radius = center.distance(&t.vertices()[0]);
        Ok((center, radius))
    }

    fn incenter(t: &Triangle<Self>) -> Result<(Self, T)> {
        let sides = t.sides()?;
        let [na, nb, nc] = sides.map(|s| s.n);
        let w = (na - nb).cross(&(nb - nc)).flip_time();
        let center = HyperbolicPoint::from_timelike(w)
            .map_err(|_| Error::DegenerateTriangle("incenter construction collapsed".into()))?;
        check_interior([na, nb, nc].map(|n| center.vector().minkowski(&n)))?;
        Ok((center, center.signed_distance(&sides[0])))
    }
}

fn check_interior<T: Scalar>(products: [T; 3]) -> Result<()> {
    if products.iter().all(|p| *p > T::zero()) {
        Ok(())
    } else {
        Err(Error::DegenerateTriangle(
            "incenter is not interior to all three sides".into(),
        ))
    }
}

/// A triangle of any model, for code paths where the geometry is a runtime choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnyTriangle<T> {
    Euclidean(Triangle<EuclideanPoint<T>>),
    Spherical(Triangle<SphericalPoint<T>>),
    Hyperbolic(Triangle<HyperbolicPoint<T>>),
}

impl<T: Scalar> AnyTriangle<T> {
    pub fn geometry(&self) -> Geometry {
        match self {
            AnyTriangle::Euclidean(_) => Geometry::Euclidean,
            AnyTriangle::Spherical(_) => Geometry::Spherical,
            AnyTriangle::Hyperbolic(_) => Geometry::Hyperbolic,
        }
    }

    /// Ambient coordinates of the three vertices.
    pub fn vertex_coords(&self) -> Vec<Vec<f64>> {
        match self {
            AnyTriangle::Euclidean(t) => t.vertices().iter().map(|p| p.coords()).collect(),
            AnyTriangle::Spherical(t) => t.vertices().iter().map(|p| p.coords()).collect(),
            AnyTriangle::Hyperbolic(t) => t.vertices().iter().map(|p| p.coords()).collect(),
        }
    }
}
