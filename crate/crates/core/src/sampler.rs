//! Seeded triangle families for verification campaigns.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`), seeded with
//! `seed_from_u64(seed)` and split into substreams with `set_stream`. Uniform
//! reals are drawn in `f64` with `rand`'s 53-bit `[0, 1)` conversion, so a
//! fixed configuration yields bit-identical triangles on every platform.
//!
//! Family parameters:
//!
//! | family         | `family_parameter`                                  |
//! |----------------|-----------------------------------------------------|
//! | `uniform`      | unused                                              |
//! | `equilateral`  | circumradius                                        |
//! | `needle`       | length of the long side                             |
//! | `great_circle` | tilt of the carrying great circle from the equator  |
//! | `flat_scaled`  | scale factor applied to [`FLAT_BASE_TRIANGLE`]      |

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::centers::{analyze, AnyTriangle, Triangle, TriangleCenters};
use crate::error::{Error, Result};
use crate::geom::{EuclideanPoint, Geometry, HyperbolicPoint, SphericalPoint, Vec3};
use crate::scalar::Scalar;

/// Spherical uniform samples are rejected above this circumradius.
pub const SPHERICAL_MAX_CIRCUMRADIUS: f64 = FRAC_PI_2 - 1e-3;

/// Off-circle displacement bound of the `great_circle` family.
pub const GREAT_CIRCLE_PERTURBATION: f64 = 8e-10;

/// Needle apex offset, as a fraction of the needle length.
pub const NEEDLE_ASPECT: f64 = 1e-3;

/// Base triangle of the `flat_scaled` family, in tangent-plane coordinates
/// at the model origin.
pub const FLAT_BASE_TRIANGLE: [[f64; 2]; 3] = [[0.6, -0.2], [-0.4, 0.5], [-0.1, -0.6]];

/// Triangle candidates tried before the acceptance rate is judged.
pub const EXHAUSTION_WINDOW: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Uniform,
    Equilateral,
    Needle,
    GreatCircle,
    FlatScaled,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Uniform,
        Family::Equilateral,
        Family::Needle,
        Family::GreatCircle,
        Family::FlatScaled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Equilateral => "equilateral",
            Family::Needle => "needle",
            Family::GreatCircle => "great_circle",
            Family::FlatScaled => "flat_scaled",
        }
    }

    /// Parameter used when none is given.
    pub fn default_parameter(self, geometry: Geometry) -> f64 {
        match self {
            Family::Uniform => 0.0,
            Family::Equilateral => 0.5,
            Family::Needle if geometry == Geometry::Hyperbolic => 0.004,
            Family::Needle => 1.0,
            Family::GreatCircle => 0.0,
            Family::FlatScaled => 0.1,
        }
    }

    fn stream_id(self) -> u64 {
        match self {
            Family::Uniform => 0,
            Family::Equilateral => 1,
            Family::Needle => 2,
            Family::GreatCircle => 3,
            Family::FlatScaled => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s || f.as_str().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub geometry: Geometry,
    pub count: usize,
    pub seed: u64,
    /// Uniform family: radius of the sampling region around the model origin
    /// (Euclidean disk, hyperbolic ball), or the maximum pairwise vertex
    /// distance on the sphere.
    pub max_vertex_spread: f64,
    pub family: Family,
    pub family_parameter: f64,
}

impl SampleConfig {
    /// Configuration with the default spread and family parameter.
    pub fn new(geometry: Geometry, family: Family, count: usize, seed: u64) -> Self {
        SampleConfig {
            geometry,
            count,
            seed,
            max_vertex_spread: default_spread(geometry),
            family,
            family_parameter: family.default_parameter(geometry),
        }
    }

    pub fn with_parameter(mut self, family_parameter: f64) -> Self {
        self.family_parameter = family_parameter;
        self
    }

    pub fn with_spread(mut self, max_vertex_spread: f64) -> Self {
        self.max_vertex_spread = max_vertex_spread;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if !(self.max_vertex_spread.is_finite() && self.max_vertex_spread > 0.0) {
            return bad("max_vertex_spread must be positive".into());
        }
        if self.geometry == Geometry::Spherical && self.max_vertex_spread >= FRAC_PI_2 {
            return bad("spherical max_vertex_spread must be below π/2".into());
        }
        if !self.family_parameter.is_finite() {
            return bad("family_parameter must be finite".into());
        }
        let p = self.family_parameter;
        match self.family {
            Family::Uniform => {}
            Family::Equilateral | Family::Needle | Family::FlatScaled if p <= 0.0 => {
                return bad(format!("{} needs a positive parameter", self.family));
            }
            Family::Equilateral if self.geometry == Geometry::Spherical && p >= FRAC_PI_2 => {
                return bad("spherical equilateral circumradius must be below π/2".into());
            }
            Family::Needle if self.geometry == Geometry::Spherical && p >= PI => {
                return bad("spherical needle length must be below π".into());
            }
            // Three nearly collinear hyperbolic points lie on a hypercycle unless
            // the apex clears the horocycle through the endpoints.
            Family::Needle
                if self.geometry == Geometry::Hyperbolic
                    && NEEDLE_ASPECT * p <= (p / 2.0).cosh().ln() =>
            {
                return bad(format!(
                    "hyperbolic needle of length {p} has no circumscribed circle (need length < ~{:.0e})",
                    8.0 * NEEDLE_ASPECT
                ));
            }
            Family::GreatCircle if self.geometry != Geometry::Spherical => {
                return bad("great_circle is a spherical family".into());
            }
            _ => {}
        }
        Ok(())
    }
}

/// Default uniform-family spread for each geometry.
pub fn default_spread(geometry: Geometry) -> f64 {
    match geometry {
        Geometry::Euclidean => 1.0,
        Geometry::Spherical => 1.5,
        Geometry::Hyperbolic => 2.5,
    }
}

/// Generator for one substream of a configuration.
///
/// Substream `k` of a configuration uses ChaCha stream
/// `(geometry, family, k)` packed into 64 bits; distinct substreams never overlap.
pub fn substream_rng(cfg: &SampleConfig, substream: u32) -> ChaCha20Rng {
    let geometry = Geometry::ALL
        .iter()
        .position(|g| *g == cfg.geometry)
        .unwrap() as u64;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    rng.set_stream((geometry << 60) | (cfg.family.stream_id() << 56) | u64::from(substream));
    rng
}

/// Draws `cfg.count` triangles. Deterministic in `cfg`.
pub fn sample<T: Scalar>(cfg: &SampleConfig) -> Result<Vec<AnyTriangle<T>>> {
    sample_substream(cfg, 0)
}

/// Draws `cfg.count` triangles from one substream.
pub fn sample_substream<T: Scalar>(
    cfg: &SampleConfig,
    substream: u32,
) -> Result<Vec<AnyTriangle<T>>> {
    cfg.validate()?;
    let mut rng = substream_rng(cfg, substream);
    let mut out = Vec::with_capacity(cfg.count);
    let mut attempts = 0usize;
    while out.len() < cfg.count {
        let index = out.len();
        attempts += 1;
        if let Some(t) = candidate::<T>(cfg, index, &mut rng) {
            out.push(t);
        }
        if attempts >= EXHAUSTION_WINDOW && out.len() * 100 < attempts {
            return Err(Error::SamplingExhausted {
                accepted: out.len(),
                attempts,
            });
        }
    }
    Ok(out)
}

fn candidate<T: Scalar>(
    cfg: &SampleConfig,
    index: usize,
    rng: &mut ChaCha20Rng,
) -> Option<AnyTriangle<T>> {
    match cfg.geometry {
        Geometry::Euclidean => {
            let pts = planar_vertices(cfg, index, rng)?;
            let [a, b, c] = pts.map(|[x, y]| EuclideanPoint::new(T::lit(x), T::lit(y)));
            accept(a.ok()?, b.ok()?, c.ok()?, |_| true).map(AnyTriangle::Euclidean)
        }
        Geometry::Spherical => {
            let (pts, capped) = spherical_vertices::<T>(cfg, index, rng)?;
            let [a, b, c] = pts;
            accept(a, b, c, |rep| {
                !capped || rep.circumradius <= T::lit(SPHERICAL_MAX_CIRCUMRADIUS)
            })
            .map(AnyTriangle::Spherical)
        }
        Geometry::Hyperbolic => {
            let [a, b, c] = hyperbolic_vertices::<T>(cfg, index, rng)?;
            accept(a, b, c, |_| true).map(AnyTriangle::Hyperbolic)
        }
    }
}

fn accept<P: TriangleCenters>(
    a: P,
    b: P,
    c: P,
    keep: impl Fn(&crate::centers::CenterReport<P>) -> bool,
) -> Option<Triangle<P>> {
    let t = Triangle::new(a, b, c).ok()?;
    let rep = analyze(&t).ok()?;
    keep(&rep).then_some(t)
}

/// Polar `(distance, azimuth)` placements shared by the symmetric families.
fn polar_layout(
    cfg: &SampleConfig,
    index: usize,
    rng: &mut ChaCha20Rng,
) -> Option<[(f64, f64); 3]> {
    let p = cfg.family_parameter;
    match cfg.family {
        Family::Equilateral => {
            let phase = TAU * index as f64 / (3.0 * cfg.count as f64);
            Some([0.0, 1.0, 2.0].map(|k| (p, phase + k * TAU / 3.0)))
        }
        Family::Needle => {
            let phi = rng.random::<f64>() * TAU;
            Some([
                (p / 2.0, phi),
                (p / 2.0, phi + PI),
                (NEEDLE_ASPECT * p, phi + FRAC_PI_2),
            ])
        }
        Family::FlatScaled => {
            let phi = rng.random::<f64>() * TAU;
            Some(FLAT_BASE_TRIANGLE.map(|[x, y]| (p * x.hypot(y), phi + y.atan2(x))))
        }
        Family::Uniform | Family::GreatCircle => None,
    }
}

fn planar_vertices(
    cfg: &SampleConfig,
    index: usize,
    rng: &mut ChaCha20Rng,
) -> Option<[[f64; 2]; 3]> {
    match cfg.family {
        Family::Uniform => Some([(); 3].map(|_| disk_point(rng, cfg.max_vertex_spread))),
        _ => polar_layout(cfg, index, rng)
            .map(|l| l.map(|(rho, phi)| [rho * phi.cos(), rho * phi.sin()])),
    }
}

/// Returns the vertices and whether the circumradius cap applies.
fn spherical_vertices<T: Scalar>(
    cfg: &SampleConfig,
    index: usize,
    rng: &mut ChaCha20Rng,
) -> Option<([SphericalPoint<T>; 3], bool)> {
    let to_point = |v: [f64; 3]| SphericalPoint::normalize(Vec3(v.map(T::lit))).ok();
    match cfg.family {
        Family::Uniform => {
            let vs = [(); 3].map(|_| sphere_point(rng));
            let spread = cfg.max_vertex_spread.cos();
            let close = |p: &[f64; 3], q: &[f64; 3]| dot(p, q) > spread;
            if !(close(&vs[0], &vs[1]) && close(&vs[1], &vs[2]) && close(&vs[2], &vs[0])) {
                return None;
            }
            let [a, b, c] = vs.map(to_point);
            Some(([a?, b?, c?], true))
        }
        Family::GreatCircle => {
            let tilt = cfg.family_parameter;
            let spin = rng.random::<f64>() * TAU;
            let pole = [tilt.sin() * spin.cos(), tilt.sin() * spin.sin(), tilt.cos()];
            let (u, v) = orthonormal_complement(&pole);
            let offset = rng.random::<f64>() * TAU;
            // One common side for all three displacements keeps the carrying
            // great circle's offset between the smallest and largest of them.
            let side = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
            let vs = [0.0, 1.0, 2.0].map(|k| {
                let jitter = (rng.random::<f64>() - 0.5) * (PI / 6.0);
                let phi = offset + k * TAU / 3.0 + jitter;
                let eps = side * (0.5 + 0.5 * rng.random::<f64>()) * GREAT_CIRCLE_PERTURBATION;
                let (s, c) = phi.sin_cos();
                [0, 1, 2].map(|i| c * u[i] + s * v[i] + eps * pole[i])
            });
            let [a, b, c] = vs.map(to_point);
            Some(([a?, b?, c?], false))
        }
        _ => {
            let layout = polar_layout(cfg, index, rng)?;
            Some((
                layout.map(|(rho, phi)| SphericalPoint::from_polar(T::lit(rho), T::lit(phi))),
                false,
            ))
        }
    }
}

fn hyperbolic_vertices<T: Scalar>(
    cfg: &SampleConfig,
    index: usize,
    rng: &mut ChaCha20Rng,
) -> Option<[HyperbolicPoint<T>; 3]> {
    match cfg.family {
        Family::Uniform => {
            let radius = (cfg.max_vertex_spread / 2.0).tanh();
            let pts = [(); 3].map(|_| disk_point(rng, radius));
            let [a, b, c] = pts.map(|[x, y]| poincare_to_hyperboloid(T::lit(x), T::lit(y)));
            Some([a?, b?, c?])
        }
        _ => {
            let layout = polar_layout(cfg, index, rng)?;
            Some(layout.map(|(rho, phi)| HyperbolicPoint::from_polar(T::lit(rho), T::lit(phi))))
        }
    }
}

/// Lifts a Poincaré-disk point `(x, y)`, `x² + y² < 1`, onto the hyperboloid.
fn poincare_to_hyperboloid<T: Scalar>(x: T, y: T) -> Option<HyperbolicPoint<T>> {
    let s = x * x + y * y;
    if s.is_nan() || s >= T::one() {
        return None;
    }
    let k = (T::one() - s).recip();
    HyperbolicPoint::from_timelike(Vec3::new(
        (T::one() + s) * k,
        T::two() * x * k,
        T::two() * y * k,
    ))
    .ok()
}

fn disk_point(rng: &mut ChaCha20Rng, radius: f64) -> [f64; 2] {
    loop {
        let x = 2.0 * rng.random::<f64>() - 1.0;
        let y = 2.0 * rng.random::<f64>() - 1.0;
        if x * x + y * y < 1.0 {
            return [radius * x, radius * y];
        }
    }
}

fn sphere_point(rng: &mut ChaCha20Rng) -> [f64; 3] {
    loop {
        let v = [(); 3].map(|_| 2.0 * rng.random::<f64>() - 1.0);
        let n2 = dot(&v, &v);
        if n2 > 1e-12 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.map(|c| c / n);
        }
    }
}

fn dot(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

fn orthonormal_complement(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let cross = |a: &[f64; 3], b: &[f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let u = cross(n, &helper);
    let len = dot(&u, &u).sqrt();
    let u = u.map(|c| c / len);
    let v = cross(n, &u);
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centers::circumcenter;

    #[test]
    fn spherical_equilateral_layout() {
        let theta = 0.7;
        let cfg =
            SampleConfig::new(Geometry::Spherical, Family::Equilateral, 1, 0).with_parameter(theta);
        let ts = sample::<f64>(&cfg).unwrap();
        let AnyTriangle::Spherical(t) = ts[0] else {
            panic!()
        };
        for (k, v) in t.vertices().iter().enumerate() {
            let w = v.vector();
            assert!((w.z().acos() - theta).abs() < 1e-15);
            let az = w.y().atan2(w.x()).rem_euclid(TAU);
            assert!((az - k as f64 * TAU / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_config_same_triangles() {
        for g in Geometry::ALL {
            for f in [Family::Uniform, Family::Needle, Family::FlatScaled] {
                let cfg = SampleConfig::new(g, f, 50, 1234);
                assert_eq!(sample::<f64>(&cfg).unwrap(), sample::<f64>(&cfg).unwrap());
            }
        }
    }

    #[test]
    fn substreams_differ() {
        let cfg = SampleConfig::new(Geometry::Euclidean, Family::Uniform, 5, 9);
        assert_ne!(
            sample_substream::<f64>(&cfg, 0).unwrap(),
            sample_substream::<f64>(&cfg, 1).unwrap()
        );
    }

    #[test]
    fn hyperbolic_uniform_never_leaks_ideal_circumcenters() {
        let cfg = SampleConfig::new(Geometry::Hyperbolic, Family::Uniform, 10_000, 42);
        for t in sample::<f64>(&cfg).unwrap() {
            let AnyTriangle::Hyperbolic(t) = t else {
                panic!()
            };
            let [a, b, c] = t.vertices().map(|p| p.vector());
            let m = (b - a).cross(&(c - a)).flip_time();
            assert!(m.minkowski(&m) < 0.0);
            assert!(circumcenter(&t).is_ok());
        }
    }

    #[test]
    fn invalid_configs() {
        let cfg = SampleConfig::new(Geometry::Euclidean, Family::Uniform, 0, 1);
        assert!(matches!(sample::<f64>(&cfg), Err(Error::InvalidConfig(_))));
        let cfg = SampleConfig::new(Geometry::Hyperbolic, Family::GreatCircle, 3, 1);
        assert!(matches!(sample::<f64>(&cfg), Err(Error::InvalidConfig(_))));
        let cfg = SampleConfig::new(Geometry::Spherical, Family::Uniform, 3, 1).with_spread(2.0);
        assert!(matches!(sample::<f64>(&cfg), Err(Error::InvalidConfig(_))));
        let cfg = SampleConfig::new(Geometry::Hyperbolic, Family::Needle, 3, 1).with_parameter(0.5);
        assert!(matches!(sample::<f64>(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn impossible_acceptance_region_exhausts() {
        // A spherical spread this small never produces a valid triangle.
        let cfg = SampleConfig::new(Geometry::Spherical, Family::Uniform, 1, 1).with_spread(1e-300);
        assert!(matches!(
            sample::<f64>(&cfg),
            Err(Error::SamplingExhausted { accepted: 0, .. })
        ));
    }

    #[test]
    fn poincare_origin_lifts_to_the_apex() {
        let p = poincare_to_hyperboloid(0.0f64, 0.0).unwrap();
        assert_eq!(p.vector(), Vec3::new(1.0, 0.0, 0.0));
        assert!(poincare_to_hyperboloid(1.0f64, 0.0).is_none());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
    }
}
