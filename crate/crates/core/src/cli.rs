//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed checks, 2 usage or invalid input,
//! 3 sampling exhausted, 4 ideal circumcenter, 5 unwritable output.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::centers::{AnyTriangle, Triangle};
use crate::error::Error;
use crate::geom::{EuclideanPoint, Geometry, HyperbolicPoint, SphericalPoint, Vec3};
use crate::report::{
    self, format_number, RunReport, Spacing, SweepConfig, TriangleEvaluation, VerifyConfig,
};
use crate::sampler::Family;

pub const SEED_ENV: &str = "NONEUCLID_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_IDEAL: i32 = 4;
pub const EXIT_UNWRITABLE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "noneuclid",
    version,
    about = "Triangle centers and Chapple-Euler identities in three geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample triangles and check every identity against a tolerance.
    Verify(VerifyArgs),
    /// Report centers and identities for one triangle.
    Triangle(TriangleArgs),
    /// Sweep a family parameter and write a CSV table.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    All,
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl GeometryArg {
    fn selected(self) -> Vec<Geometry> {
        match self {
            GeometryArg::All => Geometry::ALL.to_vec(),
            GeometryArg::Euclidean => vec![Geometry::Euclidean],
            GeometryArg::Spherical => vec![Geometry::Spherical],
            GeometryArg::Hyperbolic => vec![Geometry::Hyperbolic],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputModel {
    /// Euclidean `x,y`.
    Xy,
    /// Unit vector `x,y,z` on the sphere, or hyperboloid vector `x0,x1,x2`.
    Vector,
    /// Spherical latitude and longitude in degrees.
    Latlon,
    /// Poincaré-disk `x,y`.
    Disk,
    /// Hyperboloid vector `x0,x1,x2`.
    Hyperboloid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    geometry: GeometryArg,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Overridden by NONEUCLID_SEED when that is set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "tol", default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value = "uniform")]
    family: Family,
    /// Family parameter; defaults depend on family and geometry.
    #[arg(long = "param")]
    parameter: Option<f64>,
    /// Largest pairwise vertex distance for the uniform family.
    #[arg(long)]
    spread: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TriangleArgs {
    #[arg(long)]
    geometry: Geometry,
    /// Defaults to `xy` for Euclidean and `vector` otherwise.
    #[arg(long, value_enum)]
    input: Option<InputModel>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Three vertices, each as comma-separated coordinates.
    #[arg(
        num_args = 3,
        required = true,
        allow_hyphen_values = true,
        value_name = "VERTEX"
    )]
    vertices: Vec<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    family: Family,
    /// `start:stop:steps`.
    #[arg(long)]
    range: String,
    #[arg(long)]
    geometry: Geometry,
    #[arg(long, value_enum, default_value = "linear")]
    spacing: SpacingArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failure that ends the command with a diagnostic and an exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Exit {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn unwritable(path: &Path, e: impl std::fmt::Display) -> Self {
        Exit {
            code: EXIT_UNWRITABLE,
            message: format!("cannot write {}: {e}", path.display()),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SamplingExhausted { .. } => EXIT_EXHAUSTED,
            Error::IdealCircumcenter => EXIT_IDEAL,
            Error::InvalidPoint { .. }
            | Error::DegenerateSide
            | Error::DegenerateTriangle(_)
            | Error::InvalidConfig(_) => EXIT_USAGE,
            Error::UnrealizablePair(_)
            | Error::NegativeDiscriminant(_)
            | Error::SingularDenominator(_) => EXIT_FAILED,
        };
        let message = match e {
            Error::IdealCircumcenter => format!(
                "{e}: the vertices lie on a horocycle or hypercycle, so no point is equidistant from all three"
            ),
            e => e.to_string(),
        };
        Exit { code, message }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Triangle(a) => cmd_triangle(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Exit { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn seed_from_env(flag: u64) -> Result<u64, Exit> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Exit::usage(format!("{SEED_ENV}='{s}' is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn write_stdout(out: &mut dyn Write, text: &str) -> Result<(), Exit> {
    out.write_all(text.as_bytes()).map_err(|e| Exit {
        code: EXIT_UNWRITABLE,
        message: format!("cannot write output: {e}"),
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let cfg = VerifyConfig {
        geometries: a.geometry.selected(),
        samples: a.samples,
        seed: seed_from_env(a.seed)?,
        tolerance: a.tolerance,
        family: a.family,
        family_parameter: a.parameter,
        max_vertex_spread: a.spread,
    };
    cfg.validate()?;
    // Fail on an unwritable path before the campaign, not after it.
    let file = match &a.output {
        Some(p) => Some(File::create(p).map_err(|e| Exit::unwritable(p, e))?),
        None => None,
    };
    let rep = report::verify(&cfg)?;
    let text = match a.format {
        Format::Json => report::to_json(&rep).map_err(|e| Exit {
            code: EXIT_FAILED,
            message: e.to_string(),
        })?,
        Format::Text => verify_text(&rep),
    };
    match (file, &a.output) {
        (Some(mut f), Some(p)) => f
            .write_all(text.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| Exit::unwritable(p, e))?,
        _ => write_stdout(out, &text)?,
    }
    Ok(if rep.passed { EXIT_OK } else { EXIT_FAILED })
}

fn verify_text(rep: &RunReport) -> String {
    let mut s = String::new();
    let c = &rep.config;
    s += &format!(
        "noneuclid {} verify: family {}, {} samples, seed {}, tolerance {:e}\n",
        rep.version, c.family, c.samples, c.seed, c.tolerance
    );
    let opt = |x: Option<f64>| x.map(format_number).unwrap_or_else(|| "-".into());
    for (g, sm) in &rep.summaries {
        s += &format!(
            "\n[{g}] {} triangles, parameter {}\n",
            sm.count,
            format_number(sm.family_parameter)
        );
        s += &format!(
            "  circumcenter spread   {}\n",
            format_number(sm.max_circumcenter_spread)
        );
        s += &format!(
            "  incenter spread       {}\n",
            format_number(sm.max_incenter_spread)
        );
        for (name, st) in [
            ("thm1", sm.thm1),
            ("thm2", sm.thm2),
            ("thm3", sm.thm3),
            ("bridge", sm.bridge),
        ] {
            if let Some(st) = st {
                s += &format!(
                    "  {name:<6} raw {}  normalized {}\n",
                    format_number(st.max_abs_raw),
                    format_number(st.max_abs_normalized)
                );
            }
        }
        s += &format!(
            "  thm4 residual         {}\n",
            opt(sm.thm4_max_abs_residual)
        );
        s += &format!("  min slack             {}\n", opt(sm.min_inequality_slack));
        s += &format!("  min discriminant      {}\n", opt(sm.min_discriminant));
        s += &format!("  right-angle branch    {}\n", sm.right_angle_branch_count);
        s += &format!("  thm3 singular         {}\n", sm.thm3_singular_count);
    }
    for f in &rep.failures {
        s += &format!(
            "FAIL {} #{} {}: {} > {} at {:?}\n",
            f.geometry,
            f.index,
            f.check,
            format_number(f.value),
            format_number(f.limit),
            f.vertices
        );
    }
    s += &format!(
        "\n{}: {} failed checks\n",
        if rep.passed { "PASS" } else { "FAIL" },
        rep.failure_count
    );
    s
}

fn parse_coords(s: &str) -> Result<Vec<f64>, Exit> {
    let cleaned = s.trim().trim_start_matches('(').trim_end_matches(')');
    cleaned
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Exit::usage(format!("cannot parse vertex '{s}'")))
        })
        .collect()
}

fn arity(s: &str, coords: &[f64], n: usize) -> Result<(), Exit> {
    if coords.len() == n {
        Ok(())
    } else {
        Err(Exit::usage(format!(
            "vertex '{s}' needs {n} coordinates, got {}",
            coords.len()
        )))
    }
}

/// Unit vector for latitude and longitude in degrees.
fn latlon_to_vector(lat: f64, lon: f64) -> Vec3<f64> {
    let (lat, lon) = (lat.to_radians(), lon.to_radians());
    Vec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
}

/// Hyperboloid vector for a Poincaré-disk point.
fn disk_to_vector(x: f64, y: f64) -> Option<Vec3<f64>> {
    let s = x * x + y * y;
    if s.is_nan() || s >= 1.0 {
        return None;
    }
    let k = 1.0 / (1.0 - s);
    Some(Vec3::new((1.0 + s) * k, 2.0 * x * k, 2.0 * y * k))
}

fn build_triangle(
    geometry: Geometry,
    input: InputModel,
    raw: &[String],
) -> Result<AnyTriangle<f64>, Exit> {
    let coords = raw
        .iter()
        .map(|s| parse_coords(s))
        .collect::<Result<Vec<_>, _>>()?;
    let mismatch = || {
        Exit::usage(format!(
            "input model {input:?} does not apply to {geometry} geometry"
        ))
    };
    let t = match geometry {
        Geometry::Euclidean => {
            if input != InputModel::Xy {
                return Err(mismatch());
            }
            let mut p = Vec::with_capacity(3);
            for (s, c) in raw.iter().zip(&coords) {
                arity(s, c, 2)?;
                p.push(EuclideanPoint::new(c[0], c[1])?);
            }
            AnyTriangle::Euclidean(Triangle::new(p[0], p[1], p[2])?)
        }
        Geometry::Spherical => {
            let mut p = Vec::with_capacity(3);
            for (s, c) in raw.iter().zip(&coords) {
                let v = match input {
                    InputModel::Vector => {
                        arity(s, c, 3)?;
                        Vec3::new(c[0], c[1], c[2])
                    }
                    InputModel::Latlon => {
                        arity(s, c, 2)?;
                        latlon_to_vector(c[0], c[1])
                    }
                    _ => return Err(mismatch()),
                };
                p.push(SphericalPoint::new(v)?);
            }
            AnyTriangle::Spherical(Triangle::new(p[0], p[1], p[2])?)
        }
        Geometry::Hyperbolic => {
            let mut p = Vec::with_capacity(3);
            for (s, c) in raw.iter().zip(&coords) {
                let v = match input {
                    InputModel::Vector | InputModel::Hyperboloid => {
                        arity(s, c, 3)?;
                        Vec3::new(c[0], c[1], c[2])
                    }
                    InputModel::Disk => {
                        arity(s, c, 2)?;
                        disk_to_vector(c[0], c[1]).ok_or_else(|| {
                            Exit::usage(format!("vertex '{s}' is not inside the unit disk"))
                        })?
                    }
                    _ => return Err(mismatch()),
                };
                p.push(HyperbolicPoint::new(v)?);
            }
            AnyTriangle::Hyperbolic(Triangle::new(p[0], p[1], p[2])?)
        }
    };
    Ok(t)
}

fn cmd_triangle(a: TriangleArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let input = a.input.unwrap_or(match a.geometry {
        Geometry::Euclidean => InputModel::Xy,
        _ => InputModel::Vector,
    });
    let t = build_triangle(a.geometry, input, &a.vertices)?;
    let ev = report::evaluate(&t)?;
    let text = match a.format {
        Format::Json => report::to_json(&ev).map_err(|e| Exit {
            code: EXIT_FAILED,
            message: e.to_string(),
        })?,
        Format::Text => triangle_text(&ev),
    };
    write_stdout(out, &text)?;
    Ok(EXIT_OK)
}

fn triangle_text(ev: &TriangleEvaluation) -> String {
    let id = &ev.identities;
    let opt = |x: Option<f64>| x.map(format_number).unwrap_or_else(|| "-".into());
    let res = |x: &Option<crate::identities::Residual<f64>>| opt(x.map(|r| r.normalized()));
    let mut s = format!("geometry          {}\n", ev.geometry);
    for (i, v) in ev.vertices.iter().enumerate() {
        s += &format!("vertex {}          {v:?}\n", i + 1);
    }
    s += &format!("circumcenter      {:?}\n", ev.circumcenter);
    s += &format!("incenter          {:?}\n", ev.incenter);
    s += &format!("R                 {}\n", format_number(ev.circumradius));
    s += &format!("r                 {}\n", format_number(ev.inradius));
    s += &format!("d                 {}\n", format_number(ev.center_distance));
    s += &format!("thm1 residual     {}\n", res(&id.thm1_residual));
    s += &format!("thm2 residual     {}\n", res(&id.thm2_residual));
    s += &format!("thm3 residual     {}\n", res(&id.thm3_residual));
    s += &format!("thm4 predicted    {}\n", opt(id.thm4_predicted));
    s += &format!("thm4 residual     {}\n", opt(id.thm4_residual));
    if let Some(e) = &id.thm4_error {
        s += &format!("thm4 error        {e}\n");
    }
    s += &format!("bridge residual   {}\n", res(&id.bridge_residual));
    s += &format!(
        "inequality slack  {}{}\n",
        format_number(id.inequality_slack.value),
        if id.inequality_slack.right_angle_branch {
            " (R = pi/2)"
        } else {
            ""
        }
    );
    s += &format!("discriminant      {}\n", opt(id.discriminant));
    s
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), Exit> {
    let bad = || Exit::usage(format!("range '{s}' is not start:stop:steps"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].trim().parse().map_err(|_| bad())?;
    let stop = parts[1].trim().parse().map_err(|_| bad())?;
    let steps = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((start, stop, steps))
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let (start, stop, steps) = parse_range(&a.range)?;
    let cfg = SweepConfig {
        geometry: a.geometry,
        family: a.family,
        start,
        stop,
        steps,
        spacing: match a.spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        },
        seed: seed_from_env(a.seed)?,
    };
    cfg.validate()?;
    let file = match &a.output {
        Some(p) => Some(File::create(p).map_err(|e| Exit::unwritable(p, e))?),
        None => None,
    };
    let rows = report::sweep(&cfg)?;
    match (file, &a.output) {
        (Some(f), Some(p)) => {
            report::write_sweep_csv(&rows, f).map_err(|e| Exit::unwritable(p, e))?
        }
        _ => report::write_sweep_csv(&rows, &mut *out).map_err(|e| Exit {
            code: EXIT_UNWRITABLE,
            message: format!("cannot write output: {e}"),
        })?,
    }
    Ok(EXIT_OK)
}
