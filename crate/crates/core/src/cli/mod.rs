//! Command-line front end. Every run writes one JSON object per line (or CSV
//! with a header row) and maps outcomes to exit codes:
//! 0 success, 1 residual above `--tolerance`, 2 usage or validation error,
//! 3 numerical failure.

mod specs;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use specs::{angle_degrees, parse_loop, parse_resolution, parse_surface, parse_triangle, LoopSpec};

use crate::error::Error;
use crate::mesh::{load_mesh_file, total_defect, MeshError};
use crate::numeric::wrap_pi;
use crate::transport::{transport_around_loop, DEFAULT_STEPS};
use crate::verify::{
    foucault_rotation, geodesic_triangle_excess, integrate_curvature, random_loops,
    stokes_deficit_sphere, total_curvature, total_curvature_at, verify_deficit_equals_integral,
    verify_prop1, Identity, VerificationReport, DEFAULT_RESOLUTION,
};
use crate::ParametricSurface;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "holonomy",
    version,
    about = "Parallel transport and Gauss-Bonnet checks on surfaces and meshes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Integration steps per curve.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Quadrature resolution, `N` or `NxM`.
    #[arg(long, value_parser = parse_resolution)]
    pub resolution: Option<(usize, usize)>,
    /// Exit with status 1 when a residual exceeds this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write records to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian and principal curvatures and the unit normal.
    Curvature {
        #[arg(long)]
        surface: String,
        /// One parameter point `u,v`.
        #[arg(long, conflicts_with = "grid", allow_hyphen_values = true)]
        at: Option<String>,
        /// Cell-centered grid over the whole domain, `NxM`.
        #[arg(long, value_parser = parse_resolution)]
        grid: Option<(usize, usize)>,
        #[command(flatten)]
        common: Common,
    },
    /// Parallel transport around a closed loop.
    Transport {
        #[arg(long)]
        surface: String,
        /// `latitude:<deg>`, `tube:<deg>`, `circle:<r>[@u,v]` or `param:u0,v0,...`.
        #[arg(long = "loop", allow_hyphen_values = true)]
        loop_spec: String,
        /// Also integrate the curvature over the enclosed region.
        #[arg(long)]
        compare_integral: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical checks of the integral identities.
    Verify {
        #[command(subcommand)]
        identity: VerifyCommand,
    },
    /// Angle defects and Euler characteristic of OFF / OBJ meshes.
    Mesh {
        #[command(subcommand)]
        action: MeshCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Deficit of a loop against the deficit of its Gauss image.
    Prop1 {
        #[arg(long)]
        surface: String,
        #[arg(long = "loop", allow_hyphen_values = true)]
        loop_spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Deficit of a loop against the curvature it encloses.
    Prop3 {
        #[arg(long, required_unless_present = "random")]
        surface: Option<String>,
        #[arg(long = "loop", required_unless_present = "random", allow_hyphen_values = true)]
        loop_spec: Option<String>,
        /// Instead of one loop, check this many random loops (see --seed).
        #[arg(long, conflicts_with_all = ["surface", "loop_spec"])]
        random: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Transport deficit against the line integral of the Stokes field, on the unit sphere.
    Stokes {
        #[arg(long = "loop", allow_hyphen_values = true)]
        loop_spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Angle excess of a geodesic triangle against its curvature integral.
    Triangle {
        #[arg(long)]
        surface: String,
        /// `octant` or `u0,v0;u1,v1;u2,v2`.
        #[arg(long, allow_hyphen_values = true)]
        vertices: String,
        #[command(flatten)]
        common: Common,
    },
    /// Total curvature of a closed surface against 2 pi chi.
    Total {
        #[arg(long)]
        surface: String,
        #[command(flatten)]
        common: Common,
    },
    /// Foucault rotation per sidereal day, in degrees, against the loop deficit.
    Foucault {
        #[arg(long, allow_hyphen_values = true)]
        latitude: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeshCommand {
    /// Per-vertex defects and their sum against 2 pi chi.
    Defect {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Euler characteristic V - E + F.
    Chi {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Checks that the mesh is a closed, consistently oriented manifold.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// A failed run: message for standard error and exit status.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_)
            | Error::OutOfRange { .. }
            | Error::NotClosedSurface(_)
            | Error::OutOfDomain { .. }
            | Error::NotClosed { .. }
            | Error::NotTangent { .. }
            | Error::NearAxis { .. }
            | Error::SouthernHemisphere { .. }
            | Error::NotOnUnitSphere { .. } => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<MeshError> for Failure {
    fn from(e: MeshError) -> Self {
        Self::usage(e.to_string())
    }
}

/// Collected output of a run.
struct Output {
    lines: Vec<String>,
    /// Largest residual checked against `--tolerance`.
    residual: f64,
}

impl Output {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            residual: 0.0,
        }
    }

    fn json<T: Serialize>(&mut self, record: &T) {
        self.lines
            .push(serde_json::to_string(record).expect("records serialise"));
    }

    fn report(&mut self, format: Format, r: &VerificationReport) {
        self.residual = self.residual.max(r.abs_error);
        match format {
            Format::Json => self.json(r),
            Format::Csv => {
                if self.lines.is_empty() {
                    self.lines
                        .push("identity,lhs,rhs,abs_error,rel_error,resolution,steps".into());
                }
                let identity = serde_json::to_value(r.identity).expect("identity serialises");
                let resolution = r
                    .resolution
                    .map(|[a, b]| format!("{a}x{b}"))
                    .unwrap_or_default();
                let steps = r.steps.map(|s| s.to_string()).unwrap_or_default();
                self.lines.push(format!(
                    "{},{:?},{:?},{:?},{:?},{resolution},{steps}",
                    identity.as_str().unwrap_or_default(),
                    r.lhs,
                    r.rhs,
                    r.abs_error,
                    r.rel_error
                ));
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let common = common(&cli.command);
    let outcome = execute(&cli.command);
    match outcome {
        Ok(out) => {
            let mut text = out.lines.join("\n");
            text.push('\n');
            let written = match &common.output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            match common.tolerance {
                Some(tol) if !(out.residual <= tol) => {
                    let _ = writeln!(
                        stderr,
                        "residual {:e} exceeds tolerance {tol:e}",
                        out.residual
                    );
                    EXIT_TOLERANCE
                }
                _ => EXIT_OK,
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Curvature { common, .. } | Command::Transport { common, .. } => common,
        Command::Verify { identity } => match identity {
            VerifyCommand::Prop1 { common, .. }
            | VerifyCommand::Prop3 { common, .. }
            | VerifyCommand::Stokes { common, .. }
            | VerifyCommand::Triangle { common, .. }
            | VerifyCommand::Total { common, .. }
            | VerifyCommand::Foucault { common, .. } => common,
        },
        Command::Mesh { action } => match action {
            MeshCommand::Defect { common, .. }
            | MeshCommand::Chi { common, .. }
            | MeshCommand::Validate { common, .. } => common,
        },
    }
}

fn surface_arg(spec: &str) -> Result<ParametricSurface, Failure> {
    parse_surface(spec).map_err(Failure::usage)
}

fn resolution(common: &Common) -> (usize, usize) {
    common
        .resolution
        .unwrap_or((DEFAULT_RESOLUTION, DEFAULT_RESOLUTION))
}

fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Curvature {
            surface,
            at,
            grid,
            common,
        } => curvature(surface, at.as_deref(), *grid, common),
        Command::Transport {
            surface,
            loop_spec,
            compare_integral,
            common,
        } => transport(surface, loop_spec, *compare_integral, common),
        Command::Verify { identity } => verify(identity),
        Command::Mesh { action } => mesh(action),
    }
}

#[derive(Serialize)]
struct CurvatureRecord {
    u: f64,
    v: f64,
    gaussian_curvature: f64,
    k1: f64,
    k2: f64,
    normal: [f64; 3],
}

fn curvature(
    spec: &str,
    at: Option<&str>,
    grid: Option<(usize, usize)>,
    common: &Common,
) -> Result<Output, Failure> {
    let surface = surface_arg(spec)?;
    let points: Vec<(f64, f64)> = match (at, grid) {
        (Some(at), None) => {
            let c: Vec<f64> = at
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::usage(format!("--at expects u,v, got `{at}`")))?;
            match c[..] {
                [u, v] => vec![(u, v)],
                _ => return Err(Failure::usage(format!("--at expects u,v, got `{at}`"))),
            }
        }
        (None, Some((n, m))) => {
            let d = surface.domain();
            let (du, dv) = (d.u.extent() / n as f64, d.v.extent() / m as f64);
            (0..m)
                .flat_map(|j| {
                    (0..n).map(move |i| {
                        (d.u.min + (i as f64 + 0.5) * du, d.v.min + (j as f64 + 0.5) * dv)
                    })
                })
                .collect()
        }
        _ => return Err(Failure::usage("give exactly one of --at and --grid")),
    };
    let mut out = Output::new();
    if common.format == Format::Csv {
        out.lines.push("u,v,K,k1,k2,nx,ny,nz".into());
    }
    for (u, v) in points {
        let frame = surface.local_frame(u, v)?;
        let (k1, k2) = frame.forms.principal_curvatures();
        let r = CurvatureRecord {
            u,
            v,
            gaussian_curvature: frame.forms.gaussian_curvature(),
            k1,
            k2,
            normal: frame.normal.into(),
        };
        match common.format {
            Format::Json => out.json(&r),
            Format::Csv => out.lines.push(format!(
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                r.u, r.v, r.gaussian_curvature, r.k1, r.k2, r.normal[0], r.normal[1], r.normal[2]
            )),
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct TransportRecord<'a> {
    surface: &'a str,
    #[serde(rename = "loop")]
    loop_spec: &'a str,
    steps: usize,
    /// Accumulated deficit angle.
    deficit_angle: f64,
    /// The same angle reduced to (-pi, pi].
    holonomy_angle: f64,
    norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resolution: Option<[usize; 2]>,
}

fn transport(
    spec: &str,
    loop_spec: &str,
    compare: bool,
    common: &Common,
) -> Result<Output, Failure> {
    let surface = surface_arg(spec)?;
    let res = resolution(common);
    let lp = parse_loop(loop_spec, &surface, res).map_err(Failure::usage)?;
    let result = transport_around_loop(&surface, &lp.curve, common.steps, None)?;
    let mut record = TransportRecord {
        surface: surface.name(),
        loop_spec,
        steps: common.steps,
        deficit_angle: result.deficit_angle,
        holonomy_angle: wrap_pi(result.deficit_angle),
        norm_drift: result.norm_drift,
        integral: None,
        abs_error: None,
        resolution: None,
    };
    let mut out = Output::new();
    if compare {
        let integral = match &lp.region {
            Some(region) => integrate_curvature(&surface, region)?,
            None => 0.0,
        };
        let err = (result.deficit_angle - integral).abs();
        record.integral = Some(integral);
        record.abs_error = Some(err);
        record.resolution = lp.region.as_ref().map(|r| [r.resolution.0, r.resolution.1]);
        out.residual = err;
    }
    match common.format {
        Format::Json => out.json(&record),
        Format::Csv => {
            out.lines.push(
                "surface,loop,steps,deficit_angle,holonomy_angle,norm_drift,integral,abs_error".into(),
            );
            let opt = |x: Option<f64>| x.map(|x| format!("{x:?}")).unwrap_or_default();
            out.lines.push(format!(
                "{},\"{}\",{},{:?},{:?},{:?},{},{}",
                record.surface,
                record.loop_spec,
                record.steps,
                record.deficit_angle,
                record.holonomy_angle,
                record.norm_drift,
                opt(record.integral),
                opt(record.abs_error)
            ));
        }
    }
    Ok(out)
}

fn verify(identity: &VerifyCommand) -> Result<Output, Failure> {
    let mut out = Output::new();
    match identity {
        VerifyCommand::Prop1 {
            surface,
            loop_spec,
            common,
        } => {
            let s = surface_arg(surface)?;
            let lp = parse_loop(loop_spec, &s, resolution(common)).map_err(Failure::usage)?;
            out.report(common.format, &verify_prop1(&s, &lp.curve, common.steps)?);
        }
        VerifyCommand::Prop3 {
            surface,
            loop_spec,
            random,
            common,
        } => match random {
            Some(count) => {
                for l in random_loops(common.seed, *count) {
                    let region = match common.resolution {
                        Some((n, m)) => l.region.clone().with_resolution(n, m),
                        None => l.region.clone(),
                    };
                    let r = verify_deficit_equals_integral(&l.surface, &l.curve, &region, common.steps)?;
                    out.report(common.format, &r);
                }
            }
            None => {
                let (surface, loop_spec) = (surface.as_deref().unwrap(), loop_spec.as_deref().unwrap());
                let s = surface_arg(surface)?;
                let lp = parse_loop(loop_spec, &s, resolution(common)).map_err(Failure::usage)?;
                let r = match &lp.region {
                    Some(region) => verify_deficit_equals_integral(&s, &lp.curve, region, common.steps)?,
                    None => {
                        let lhs = crate::transport::deficit_angle(&s, &lp.curve, common.steps)?;
                        VerificationReport::new(Identity::Prop3, lhs, 0.0).with_steps(common.steps)
                    }
                };
                out.report(common.format, &r);
            }
        },
        VerifyCommand::Stokes { loop_spec, common } => {
            let s = ParametricSurface::sphere(1.0);
            let lp = parse_loop(loop_spec, &s, resolution(common)).map_err(Failure::usage)?;
            let lhs = crate::transport::deficit_angle(&s, &lp.curve, common.steps)?;
            let rhs = stokes_deficit_sphere(&s, &lp.curve, common.steps)?;
            out.report(
                common.format,
                &VerificationReport::new(Identity::Stokes, lhs, rhs).with_steps(common.steps),
            );
        }
        VerifyCommand::Triangle {
            surface,
            vertices,
            common,
        } => {
            let s = surface_arg(surface)?;
            let (s, v) = parse_triangle(vertices, s).map_err(Failure::usage)?;
            let tri = geodesic_triangle_excess(&s, v, common.steps, resolution(common))?;
            out.report(common.format, &tri.report);
        }
        VerifyCommand::Total { surface, common } => {
            let s = surface_arg(surface)?;
            let r = match common.resolution {
                Some(res) => total_curvature_at(&s, res)?,
                None => total_curvature(&s)?,
            };
            out.report(common.format, &r);
        }
        VerifyCommand::Foucault { latitude, common } => {
            let lhs = foucault_rotation(*latitude)?;
            // The complementary view: 360 degrees minus the deficit of the
            // latitude circle. The circle degenerates at the poles.
            let deficit = if *latitude >= 90.0 {
                0.0
            } else if *latitude <= -90.0 {
                4.0 * std::f64::consts::PI
            } else {
                let s = ParametricSurface::sphere(1.0);
                let c = crate::curve::ParamCurve::latitude(latitude.to_radians());
                crate::transport::deficit_angle(&s, &c, common.steps)?
            };
            let rhs = 360.0 - deficit.to_degrees();
            out.report(
                common.format,
                &VerificationReport::new(Identity::Foucault, lhs, rhs).with_steps(common.steps),
            );
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ChiRecord {
    vertices: usize,
    edges: usize,
    faces: usize,
    chi: i64,
}

#[derive(Serialize)]
struct ValidateRecord {
    closed: bool,
    vertices: usize,
    edges: usize,
    faces: usize,
    boundary_edges: Vec<(usize, usize)>,
    nonmanifold_edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn mesh(action: &MeshCommand) -> Result<Output, Failure> {
    let mut out = Output::new();
    match action {
        MeshCommand::Defect { path, common } => {
            let m = load_mesh_file(path)?;
            let report = total_defect(&m)?;
            out.residual = report.residual;
            match common.format {
                Format::Json => out.json(&report),
                Format::Csv => out.lines.push(report.to_csv().trim_end().to_string()),
            }
        }
        MeshCommand::Chi { path, common } => {
            let m = load_mesh_file(path)?;
            let r = ChiRecord {
                vertices: m.vertex_count(),
                edges: m.edge_count(),
                faces: m.face_count(),
                chi: m.euler_characteristic(),
            };
            match common.format {
                Format::Json => out.json(&r),
                Format::Csv => {
                    out.lines.push("vertices,edges,faces,chi".into());
                    out.lines
                        .push(format!("{},{},{},{}", r.vertices, r.edges, r.faces, r.chi));
                }
            }
        }
        MeshCommand::Validate { path, .. } => {
            let m = load_mesh_file(path)?;
            let mut r = ValidateRecord {
                closed: true,
                vertices: m.vertex_count(),
                edges: m.edge_count(),
                faces: m.face_count(),
                boundary_edges: Vec::new(),
                nonmanifold_edges: Vec::new(),
                error: None,
            };
            if let Err(e) = m.validate_closed() {
                r.closed = false;
                r.error = Some(e.to_string());
                if let MeshError::NotClosed {
                    boundary,
                    nonmanifold,
                } = e.clone()
                {
                    r.boundary_edges = boundary;
                    r.nonmanifold_edges = nonmanifold;
                }
                let listed = r
                    .boundary_edges
                    .iter()
                    .map(|(a, b)| format!("({a}, {b})"))
                    .collect::<Vec<_>>()
                    .join(" ");
                let record = serde_json::to_string(&r).expect("record serialises");
                return Err(Failure::usage(format!(
                    "{e}\nboundary edges: {listed}\n{record}"
                )));
            }
            out.json(&r);
        }
    }
    Ok(out)
}
