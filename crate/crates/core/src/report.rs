//! Verification campaigns, parameter sweeps and their serialized reports.
//!
//! JSON reports have sorted keys and print every float with 17 significant
//! digits, so parsing and re-serializing a report reproduces it byte for byte.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::centers::{analyze, equidistance_spreads, AnyTriangle, Triangle, TriangleCenters};
use crate::error::{Error, Result};
use crate::geom::Geometry;
use crate::identities::{identities_for, IdentityReport, Residual};
use crate::sampler::{sample, Family, SampleConfig};

/// Absolute tolerance for checks on the spherical `R = π/2` branch, where the
/// constructed `d` carries an error of about `ε / (π/2 − R)`.
pub const RIGHT_ANGLE_BRANCH_TOL: f64 = 1e-6;

/// The Alabdullatif check is run at this multiple of the campaign tolerance.
pub const THM3_TOL_FACTOR: f64 = 10.0;

/// At most this many failing triangles are dumped into a report.
pub const MAX_FAILURE_DUMPS: usize = 100;

/// Everything known about one analyzed triangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleEvaluation {
    pub geometry: Geometry,
    pub vertices: Vec<Vec<f64>>,
    pub circumcenter: Vec<f64>,
    pub incenter: Vec<f64>,
    pub circumradius: f64,
    pub inradius: f64,
    pub center_distance: f64,
    pub circumcenter_spread: f64,
    pub incenter_spread: f64,
    pub identities: IdentityReport<f64>,
}

impl TriangleEvaluation {
    pub fn right_angle_branch(&self) -> bool {
        self.identities.inequality_slack.right_angle_branch
    }
}

fn evaluate_model<P: TriangleCenters<Scalar = f64>>(t: &Triangle<P>) -> Result<TriangleEvaluation> {
    let centers = analyze(t)?;
    let (circumcenter_spread, incenter_spread) = equidistance_spreads(t, &centers)?;
    Ok(TriangleEvaluation {
        geometry: P::GEOMETRY,
        vertices: t.vertices().iter().map(|v| v.coords()).collect(),
        circumcenter: centers.circumcenter.coords(),
        incenter: centers.incenter.coords(),
        circumradius: centers.circumradius,
        inradius: centers.inradius,
        center_distance: centers.center_distance,
        circumcenter_spread,
        incenter_spread,
        identities: identities_for(&centers),
    })
}

/// Builds centers and evaluates every identity for one triangle.
pub fn evaluate(t: &AnyTriangle<f64>) -> Result<TriangleEvaluation> {
    match t {
        AnyTriangle::Euclidean(t) => evaluate_model(t),
        AnyTriangle::Spherical(t) => evaluate_model(t),
        AnyTriangle::Hyperbolic(t) => evaluate_model(t),
    }
}

/// Campaign settings for [`verify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub geometries: Vec<Geometry>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub family: Family,
    /// `None` selects the family default for each geometry.
    pub family_parameter: Option<f64>,
    /// `None` selects the default spread for each geometry.
    pub max_vertex_spread: Option<f64>,
}

impl VerifyConfig {
    pub fn sample_config(&self, geometry: Geometry) -> SampleConfig {
        let mut cfg = SampleConfig::new(geometry, self.family, self.samples, self.seed);
        if let Some(p) = self.family_parameter {
            cfg = cfg.with_parameter(p);
        }
        if let Some(s) = self.max_vertex_spread {
            cfg = cfg.with_spread(s);
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.geometries.is_empty() {
            return Err(Error::InvalidConfig("no geometry selected".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        self.geometries
            .iter()
            .try_for_each(|g| self.sample_config(*g).validate())
    }
}

/// Largest magnitudes seen for one identity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max_abs_raw: f64,
    pub max_abs_normalized: f64,
}

impl ResidualStats {
    fn add(&mut self, r: &Residual<f64>) {
        self.max_abs_raw = worse(self.max_abs_raw, r.raw.abs());
        self.max_abs_normalized = worse(self.max_abs_normalized, r.normalized().abs());
    }
}

/// Per-geometry aggregate over a campaign.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub count: usize,
    pub family_parameter: f64,
    pub max_circumcenter_spread: f64,
    pub max_incenter_spread: f64,
    pub thm1: Option<ResidualStats>,
    pub thm2: Option<ResidualStats>,
    pub thm3: Option<ResidualStats>,
    pub thm3_fraction_relative_max: Option<f64>,
    pub thm3_singular_count: usize,
    pub thm4_max_abs_residual: Option<f64>,
    pub thm4_error_count: usize,
    /// `eq1` (spherical) or `eq2` (hyperbolic) bridge identity.
    pub bridge: Option<ResidualStats>,
    /// Over samples off the great-circle branch.
    pub min_inequality_slack: Option<f64>,
    pub right_angle_branch_count: usize,
    pub center_distance_near_pi_count: usize,
    pub min_discriminant: Option<f64>,
}

/// One failed check, with the triangle that failed it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub geometry: Geometry,
    pub index: usize,
    pub check: String,
    pub value: f64,
    pub limit: f64,
    pub vertices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub config: VerifyConfig,
    pub summaries: BTreeMap<Geometry, GeometrySummary>,
    /// At most [`MAX_FAILURE_DUMPS`] entries; see `failure_count`.
    pub failures: Vec<Failure>,
    pub failure_count: usize,
    pub passed: bool,
}

/// Maximum that keeps NaN once it appears.
fn worse(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

fn lower(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(match acc {
        _ if x.is_nan() => f64::NAN,
        Some(a) if a.is_nan() => a,
        Some(a) => a.min(x),
        None => x,
    })
}

/// Runs every check on one evaluated triangle, returning `(check, value, limit)`
/// for each one that failed.
pub fn failed_checks(ev: &TriangleEvaluation, tol: f64) -> Vec<(&'static str, f64, f64)> {
    let mut out = Vec::new();
    let id = &ev.identities;
    let branch = ev.right_angle_branch();
    let abs_tol = if branch {
        tol.max(RIGHT_ANGLE_BRANCH_TOL)
    } else {
        tol
    };
    // NaN always fails.
    let mut at_most = |name, value: f64, limit: f64| {
        if value.is_nan() || value > limit {
            out.push((name, value, limit));
        }
    };
    at_most("circumcenter_spread", ev.circumcenter_spread, abs_tol);
    at_most("incenter_spread", ev.incenter_spread, abs_tol);
    if let Some(r) = &id.thm1_residual {
        at_most("thm1", r.normalized().abs(), tol);
    }
    if let Some(r) = &id.thm2_residual {
        if branch {
            at_most("thm2_raw", r.raw.abs(), abs_tol);
        } else {
            at_most("thm2", r.normalized().abs(), tol);
        }
    }
    if let Some(r) = &id.thm3_residual {
        at_most("thm3", r.normalized().abs(), THM3_TOL_FACTOR * tol);
    }
    if let Some(r) = id.thm4_residual {
        at_most("thm4", r.abs(), abs_tol);
    }
    if id.thm4_error.is_some() {
        at_most("thm4_unrealizable", f64::INFINITY, 0.0);
    }
    if let Some(r) = &id.bridge_residual {
        at_most("bridge", r.normalized().abs(), tol);
    }
    if !branch {
        at_most("inequality_slack", -id.inequality_slack.value, tol);
    }
    if let Some(disc) = id.discriminant {
        if disc.is_nan() || disc <= 0.0 {
            out.push(("discriminant", disc, 0.0));
        }
    }
    out
}

fn summarize(
    geometry: Geometry,
    cfg: &SampleConfig,
    tol: f64,
    triangles: &[AnyTriangle<f64>],
    failures: &mut Vec<Failure>,
    failure_count: &mut usize,
) -> Result<GeometrySummary> {
    let mut s = GeometrySummary {
        family_parameter: cfg.family_parameter,
        ..Default::default()
    };
    for (index, t) in triangles.iter().enumerate() {
        let ev = evaluate(t)?;
        let id = &ev.identities;
        s.count += 1;
        s.max_circumcenter_spread = worse(s.max_circumcenter_spread, ev.circumcenter_spread);
        s.max_incenter_spread = worse(s.max_incenter_spread, ev.incenter_spread);
        let stat = |slot: &mut Option<ResidualStats>, r: &Option<Residual<f64>>| {
            if let Some(r) = r {
                slot.get_or_insert_with(Default::default).add(r);
            }
        };
        stat(&mut s.thm1, &id.thm1_residual);
        stat(&mut s.thm2, &id.thm2_residual);
        stat(&mut s.thm3, &id.thm3_residual);
        stat(&mut s.bridge, &id.bridge_residual);
        if let Some(x) = id.thm3_fraction_relative {
            s.thm3_fraction_relative_max =
                Some(worse(s.thm3_fraction_relative_max.unwrap_or(0.0), x.abs()));
        }
        s.thm3_singular_count += usize::from(id.thm3_singular);
        if let Some(r) = id.thm4_residual {
            s.thm4_max_abs_residual = Some(worse(s.thm4_max_abs_residual.unwrap_or(0.0), r.abs()));
        }
        s.thm4_error_count += usize::from(id.thm4_error.is_some());
        if ev.right_angle_branch() {
            s.right_angle_branch_count += 1;
            if ev.center_distance > std::f64::consts::FRAC_PI_2 {
                s.center_distance_near_pi_count += 1;
            }
        } else {
            s.min_inequality_slack = lower(s.min_inequality_slack, id.inequality_slack.value);
        }
        if let Some(d) = id.discriminant {
            s.min_discriminant = lower(s.min_discriminant, d);
        }
        for (check, value, limit) in failed_checks(&ev, tol) {
            *failure_count += 1;
            if failures.len() < MAX_FAILURE_DUMPS {
                failures.push(Failure {
                    geometry,
                    index,
                    check: check.to_string(),
                    value,
                    limit,
                    vertices: ev.vertices.clone(),
                });
            }
        }
    }
    Ok(s)
}

/// Samples, constructs and checks every selected geometry.
///
/// Geometries run on separate threads, each from its own sampler substream;
/// results are merged in geometry order so the report does not depend on
/// scheduling.
pub fn verify(cfg: &VerifyConfig) -> Result<RunReport> {
    cfg.validate()?;
    let per_geometry: Vec<Result<(GeometrySummary, Vec<Failure>, usize)>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = cfg
                .geometries
                .iter()
                .map(|&g| {
                    scope.spawn(move || {
                        let sc = cfg.sample_config(g);
                        let triangles = sample::<f64>(&sc)?;
                        let mut failures = Vec::new();
                        let mut count = 0;
                        let summary = summarize(
                            g,
                            &sc,
                            cfg.tolerance,
                            &triangles,
                            &mut failures,
                            &mut count,
                        )?;
                        Ok((summary, failures, count))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification thread panicked"))
                .collect()
        });

    let mut summaries = BTreeMap::new();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    for (g, res) in cfg.geometries.iter().zip(per_geometry) {
        let (summary, f, n) = res?;
        summaries.insert(*g, summary);
        failures.extend(f);
        failure_count += n;
    }
    failures.truncate(MAX_FAILURE_DUMPS);
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        summaries,
        passed: failure_count == 0,
        failures,
        failure_count,
    })
}

/// serde_json formatter printing floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", f64::from(value))
    }
}

/// Serializes with sorted keys and 17 significant digits, newline-terminated.
pub fn to_json<S: Serialize>(value: &S) -> serde_json::Result<String> {
    // Going through `Value` sorts every object's keys.
    let value = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Formats a float the way reports do; non-finite values print as
/// `inf`, `-inf` or `nan`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Spacing of sweep parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub geometry: Geometry,
    pub family: Family,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub spacing: Spacing,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidConfig(
                "a sweep needs at least 2 steps".into(),
            ));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidConfig(
                "sweep range needs start < stop".into(),
            ));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::InvalidConfig(
                "log spacing needs a positive start".into(),
            ));
        }
        if self.family == Family::Uniform {
            return Err(Error::InvalidConfig(
                "the uniform family has no parameter to sweep".into(),
            ));
        }
        Ok(())
    }

    pub fn parameters(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// One sweep line. `None` marks a column that does not apply to the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub circumradius: f64,
    pub inradius: f64,
    pub center_distance: f64,
    /// `d` from the closed form: Chapple-Euler, `atan` of the predicted
    /// `tan d`, or `atanh` of the predicted `tanh d`.
    pub predicted_d: Option<f64>,
    /// Normalized, except on the spherical `R = π/2` branch where every term
    /// is at roundoff level and the raw residual is given.
    pub thm2_residual: Option<f64>,
    pub inequality_slack: f64,
    pub discriminant: Option<f64>,
}

pub const SWEEP_HEADER: [&str; 8] = [
    "parameter",
    "R",
    "r",
    "d",
    "predicted_d",
    "thm2_residual",
    "inequality_slack",
    "discriminant",
];

/// One triangle per parameter value, sampled with `count = 1`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.parameters()
        .into_iter()
        .map(|p| {
            let sc = SampleConfig::new(cfg.geometry, cfg.family, 1, cfg.seed).with_parameter(p);
            let t = sample::<f64>(&sc)?.remove(0);
            let ev = evaluate(&t)?;
            let id = &ev.identities;
            let predicted_d = id.thm4_predicted.map(|x| match cfg.geometry {
                Geometry::Euclidean => x,
                Geometry::Spherical => x.atan(),
                Geometry::Hyperbolic => x.atanh(),
            });
            Ok(SweepRow {
                parameter: p,
                circumradius: ev.circumradius,
                inradius: ev.inradius,
                center_distance: ev.center_distance,
                predicted_d,
                thm2_residual: id.thm2_residual.map(|r| {
                    if ev.right_angle_branch() {
                        r.raw
                    } else {
                        r.normalized()
                    }
                }),
                inequality_slack: id.inequality_slack.value,
                discriminant: id.discriminant,
            })
        })
        .collect()
}

/// Writes the header and one record per row.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
    for r in rows {
        w.write_record([
            format_number(r.parameter),
            format_number(r.circumradius),
            format_number(r.inradius),
            format_number(r.center_distance),
            opt(r.predicted_d),
            opt(r.thm2_residual),
            format_number(r.inequality_slack),
            opt(r.discriminant),
        ])?;
    }
    w.flush()?;
    Ok(())
}
