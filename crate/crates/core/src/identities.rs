//! Chapple-Euler type formulas as predictors and residuals.
//!
//! Every identity `lhs = rhs` is reported as a [`Residual`]: the raw
//! difference `lhs − rhs` plus the magnitude of its largest term, so that
//! tolerances stay meaningful both for tiny triangles (all terms `O(s²)`)
//! and for large hyperbolic ones (terms growing like `e^{2R}`).
//!
//! Near `R = π/2` the spherical `tan R` terms are evaluated in a form
//! multiplied through by `cos²R`, which is finite up to and including the
//! great-circle case.

use serde::Serialize;

use crate::centers::CenterReport;
use crate::error::{Error, Result};
use crate::geom::{Geometry, ModelPoint};
use crate::scalar::Scalar;

/// Below `π/2 − STABILIZE_BELOW_RIGHT_ANGLE` the plain `tan R` form is used.
pub const STABILIZE_BELOW_RIGHT_ANGLE: f64 = 1e-4;

/// Absolute tolerance under which Alabdullatif's denominator counts as zero.
pub const SINGULAR_DENOMINATOR_TOL: f64 = 1e-12;

/// Difference of the two sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual<T> {
    pub raw: T,
    /// Largest magnitude among the terms of the identity.
    pub scale: T,
}

impl<T: Scalar> Residual<T> {
    fn from_terms(raw: T, terms: &[T]) -> Self {
        let scale = terms.iter().fold(T::zero(), |m, t| m.max(t.abs()));
        Residual { raw, scale }
    }

    /// `raw / scale`, or `raw` when every term vanishes.
    pub fn normalized(&self) -> T {
        if self.scale > T::zero() {
            self.raw / self.scale
        } else {
            self.raw
        }
    }
}

/// Euler-type inequality slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalitySlack<T> {
    /// `R − 2r`, `tan R − 2 tan r` or `tanh R − 2 tanh r`; `+∞` on the
    /// spherical great-circle branch.
    pub value: T,
    pub right_angle_branch: bool,
}

/// Every derived quantity for one triangle's `(R, r, d)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport<T> {
    pub geometry: Geometry,
    /// Euclidean, squared form: `d² − R(R − 2r)`.
    pub thm1_residual: Option<Residual<T>>,
    /// Spherical or hyperbolic Cho–Naranjo identity.
    pub thm2_residual: Option<Residual<T>>,
    /// Hyperbolic Alabdullatif identity; `None` also when the denominator is singular.
    pub thm3_residual: Option<Residual<T>>,
    pub thm3_singular: bool,
    /// Alabdullatif residual relative to the larger side of the fraction.
    pub thm3_fraction_relative: Option<T>,
    /// Predicted `tan d` (spherical), `tanh d` (hyperbolic) or `d` (Euclidean).
    pub thm4_predicted: Option<T>,
    /// Predicted minus constructed, in the same transformed variable
    /// (curved geometries only).
    pub thm4_residual: Option<T>,
    /// Why the prediction could not be evaluated, if it could not.
    pub thm4_error: Option<String>,
    /// Squared identity bridging Cho–Naranjo and the closed form (`tan²d` or `tanh²d`).
    pub bridge_residual: Option<Residual<T>>,
    pub inequality_slack: InequalitySlack<T>,
    /// Hyperbolic only: `−tanh²r + (1 − tanh r tanh R)²`.
    pub discriminant: Option<T>,
}

/// `d = √(R(R − 2r))`.
pub fn chapple_euclidean<T: Scalar>(circumradius: T, inradius: T) -> Result<T> {
    let slack = circumradius - T::two() * inradius;
    if slack < -T::lit(T::REALIZABILITY_TOL) * circumradius.abs() {
        return Err(Error::UnrealizablePair(format!(
            "R = {circumradius} < 2r = {}",
            T::two() * inradius
        )));
    }
    Ok((circumradius * slack.max(T::zero())).sqrt())
}

/// `d² − R(R − 2r)`: the Chapple-Euler relation squared, which stays
/// well conditioned at the equality case `R = 2r`.
pub fn residual_chapple<T: Scalar>(circumradius: T, inradius: T, d: T) -> Residual<T> {
    let lhs = d * d;
    let sq = circumradius * circumradius;
    let cross = T::two() * circumradius * inradius;
    Residual::from_terms(lhs - sq + cross, &[lhs, sq, cross])
}

/// `sin²d − sin²(R − r) + sin²r cos²R`.
pub fn residual_cn_spherical<T: Scalar>(circumradius: T, inradius: T, d: T) -> Residual<T> {
    let sq = |x: T| x * x;
    let lhs = sq(d.sin());
    let first = sq((circumradius - inradius).sin());
    let second = sq(inradius.sin()) * sq(circumradius.cos());
    Residual::from_terms(lhs - first + second, &[lhs, first, second])
}

/// `sinh²d − sinh²(R − r) + sinh²r cosh²R`.
pub fn residual_cn_hyperbolic<T: Scalar>(circumradius: T, inradius: T, d: T) -> Residual<T> {
    let sq = |x: T| x * x;
    let lhs = sq(d.sinh());
    let first = sq((circumradius - inradius).sinh());
    let second = sq(inradius.sinh()) * sq(circumradius.cosh());
    Residual::from_terms(lhs - first + second, &[lhs, first, second])
}

/// `tanh r − tanh(R+d)(cosh²R(sinh²r − 1) + cosh²(r+d)) / (cosh²(r+d) − cosh²R cosh²r)`.
///
/// `raw` is the difference of the two sides as written. The scale is taken
/// from the identity with the denominator cleared,
/// `tanh r·den = tanh(R+d)·num`, whose five expanded products bound the
/// cancellation; `normalized()` therefore equals the cleared residual over
/// its largest product. Both sides of the fraction are `O(r)` while `num`
/// and `den` are `O(r³)` and `O(r²)` differences of `O(cosh²R)` terms, so
/// the fraction's own relative error grows like `1/r³` for thin triangles.
pub fn residual_alabdullatif<T: Scalar>(circumradius: T, inradius: T, d: T) -> Result<Residual<T>> {
    let sq = |x: T| x * x;
    let ch2_big = sq(circumradius.cosh());
    let ch2_rd = sq((inradius + d).cosh());
    let ch2_r = sq(inradius.cosh());
    let sh2_r = sq(inradius.sinh());
    let den = ch2_rd - ch2_big * ch2_r;
    if den.abs() < T::lit(SINGULAR_DENOMINATOR_TOL) {
        return Err(Error::SingularDenominator(den.as_f64()));
    }
    let t_sum = (circumradius + d).tanh();
    let lhs = inradius.tanh();
    let rhs = t_sum * (ch2_big * (sh2_r - T::one()) + ch2_rd) / den;
    let products = [
        lhs * ch2_rd,
        lhs * ch2_big * ch2_r,
        t_sum * ch2_big * sh2_r,
        t_sum * ch2_big,
        t_sum * ch2_rd,
    ];
    let largest = products.iter().fold(T::zero(), |m, p| m.max(p.abs()));
    Ok(Residual {
        raw: lhs - rhs,
        scale: largest / den.abs(),
    })
}

/// `(tanh r − RHS) / max(|tanh r|, |RHS|)` for Alabdullatif's identity in
/// its fractional form.
pub fn alabdullatif_fraction_relative<T: Scalar>(circumradius: T, inradius: T, d: T) -> Result<T> {
    let r = residual_alabdullatif(circumradius, inradius, d)?;
    let lhs = inradius.tanh();
    let rhs = lhs - r.raw;
    Ok(r.raw / lhs.abs().max(rhs.abs()))
}

fn near_right_angle<T: Scalar>(circumradius: T) -> bool {
    (circumradius - T::FRAC_PI_2()).abs() <= T::lit(T::RIGHT_ANGLE_TOL)
}

/// Numerator and denominator of `tan²d`, multiplied through by `cos²R`
/// when `R` is close to `π/2`.
fn spherical_terms<T: Scalar>(circumradius: T, inradius: T) -> (T, T, T) {
    let tr = inradius.tan();
    if circumradius < T::FRAC_PI_2() - T::lit(STABILIZE_BELOW_RIGHT_ANGLE) {
        let tb = circumradius.tan();
        (
            tb,
            tb - T::two() * tr,
            tr * tr + (T::one() + tr * tb).powi(2),
        )
    } else {
        let (sb, cb) = circumradius.sin_cos();
        (
            sb,
            sb - T::two() * tr * cb,
            (tr * cb).powi(2) + (cb + tr * sb).powi(2),
        )
    }
}

/// Closed-form `tan d` from `(R, r)`; `0` on the great-circle branch `R = π/2`.
pub fn predict_d_spherical<T: Scalar>(circumradius: T, inradius: T) -> Result<T> {
    if near_right_angle(circumradius) {
        return Ok(T::zero());
    }
    if circumradius > T::FRAC_PI_2() || inradius <= T::zero() {
        return Err(Error::UnrealizablePair(format!(
            "need 0 < r < R ≤ π/2, got R = {circumradius}, r = {inradius}"
        )));
    }
    let (lead, slack, den) = spherical_terms(circumradius, inradius);
    if slack < -T::lit(T::REALIZABILITY_TOL) * lead {
        return Err(Error::UnrealizablePair(format!(
            "tan R < 2 tan r (R = {circumradius}, r = {inradius})"
        )));
    }
    Ok((lead * slack.max(T::zero())).sqrt() / den.sqrt())
}

/// `−tanh²r + (1 − tanh r tanh R)²`.
pub fn discriminant_hyperbolic<T: Scalar>(circumradius: T, inradius: T) -> T {
    let (tb, tr) = (circumradius.tanh(), inradius.tanh());
    -tr * tr + (T::one() - tr * tb).powi(2)
}

/// Closed-form `tanh d` from `(R, r)`.
pub fn predict_d_hyperbolic<T: Scalar>(circumradius: T, inradius: T) -> Result<T> {
    let disc = discriminant_hyperbolic(circumradius, inradius);
    if disc <= T::zero() {
        return Err(Error::NegativeDiscriminant(disc.as_f64()));
    }
    let (tb, tr) = (circumradius.tanh(), inradius.tanh());
    let slack = tb - T::two() * tr;
    if slack < -T::lit(T::REALIZABILITY_TOL) * tb {
        return Err(Error::UnrealizablePair(format!(
            "tanh R < 2 tanh r (R = {circumradius}, r = {inradius})"
        )));
    }
    Ok((tb * slack.max(T::zero())).sqrt() / disc.sqrt())
}

/// `tan²d (tan²r + (1 + tan r tan R)²) − tan R (tan R − 2 tan r)`, in the
/// `cos²R`-scaled form close to `π/2`.
pub fn residual_eq1<T: Scalar>(circumradius: T, inradius: T, d: T) -> Residual<T> {
    let (lead, slack, den) = spherical_terms(circumradius, inradius);
    let lhs = d.tan().powi(2) * den;
    let tr = inradius.tan();
    let cross = if circumradius < T::FRAC_PI_2() - T::lit(STABILIZE_BELOW_RIGHT_ANGLE) {
        T::two() * lead * tr
    } else {
        T::two() * lead * tr * circumradius.cos()
    };
    Residual::from_terms(lhs - lead * slack, &[lhs, lead * lead, cross])
}

/// `tanh²d (−tanh²r + (1 − tanh r tanh R)²) − tanh R (tanh R − 2 tanh r)`.
pub fn residual_eq2<T: Scalar>(circumradius: T, inradius: T, d: T) -> Residual<T> {
    let (tb, tr) = (circumradius.tanh(), inradius.tanh());
    let lhs = d.tanh().powi(2) * discriminant_hyperbolic(circumradius, inradius);
    let rhs = tb * (tb - T::two() * tr);
    Residual::from_terms(lhs - rhs, &[lhs, tb * tb, T::two() * tb * tr])
}

/// Slack of the Euler-type inequality of each geometry.
pub fn inequality_slack<T: Scalar>(
    geometry: Geometry,
    circumradius: T,
    inradius: T,
) -> InequalitySlack<T> {
    let value = match geometry {
        Geometry::Euclidean => circumradius - T::two() * inradius,
        Geometry::Spherical if near_right_angle(circumradius) => {
            return InequalitySlack {
                value: T::infinity(),
                right_angle_branch: true,
            }
        }
        Geometry::Spherical => circumradius.tan() - T::two() * inradius.tan(),
        Geometry::Hyperbolic => circumradius.tanh() - T::two() * inradius.tanh(),
    };
    InequalitySlack {
        value,
        right_angle_branch: false,
    }
}

/// Evaluates every applicable identity on `(R, r, d)`.
pub fn identity_report<T: Scalar>(
    geometry: Geometry,
    circumradius: T,
    inradius: T,
    d: T,
) -> IdentityReport<T> {
    let mut rep = IdentityReport {
        geometry,
        thm1_residual: None,
        thm2_residual: None,
        thm3_residual: None,
        thm3_singular: false,
        thm3_fraction_relative: None,
        thm4_predicted: None,
        thm4_residual: None,
        thm4_error: None,
        bridge_residual: None,
        inequality_slack: inequality_slack(geometry, circumradius, inradius),
        discriminant: None,
    };
    let mut record_prediction = |pred: Result<T>, constructed: T| match pred {
        Ok(p) => {
            rep.thm4_predicted = Some(p);
            rep.thm4_residual = Some(p - constructed);
        }
        Err(e) => rep.thm4_error = Some(e.to_string()),
    };
    match geometry {
        Geometry::Euclidean => {
            match chapple_euclidean(circumradius, inradius) {
                Ok(p) => rep.thm4_predicted = Some(p),
                Err(e) => rep.thm4_error = Some(e.to_string()),
            }
            rep.thm1_residual = Some(residual_chapple(circumradius, inradius, d));
        }
        Geometry::Spherical => {
            record_prediction(predict_d_spherical(circumradius, inradius), d.tan().abs());
            rep.thm2_residual = Some(residual_cn_spherical(circumradius, inradius, d));
            if !near_right_angle(circumradius) {
                rep.bridge_residual = Some(residual_eq1(circumradius, inradius, d));
            }
        }
        Geometry::Hyperbolic => {
            record_prediction(predict_d_hyperbolic(circumradius, inradius), d.tanh());
            rep.thm2_residual = Some(residual_cn_hyperbolic(circumradius, inradius, d));
            match residual_alabdullatif(circumradius, inradius, d) {
                Ok(r) => {
                    rep.thm3_residual = Some(r);
                    rep.thm3_fraction_relative =
                        alabdullatif_fraction_relative(circumradius, inradius, d).ok();
                }
                Err(_) => rep.thm3_singular = true,
            }
            rep.bridge_residual = Some(residual_eq2(circumradius, inradius, d));
            rep.discriminant = Some(discriminant_hyperbolic(circumradius, inradius));
        }
    }
    rep
}

/// [`identity_report`] on the radii of a constructed triangle.
pub fn identities_for<P: ModelPoint>(centers: &CenterReport<P>) -> IdentityReport<P::Scalar> {
    identity_report(
        P::GEOMETRY,
        centers.circumradius,
        centers.inradius,
        centers.center_distance,
    )
}
