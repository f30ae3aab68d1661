//! `pfcurv`: generate meshes, compute curvature reports, run flows and reproduce tables.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 for numerical failure. Failures
//! print one JSON record on stderr.

mod csv;
mod tables;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use pfcurv::curvature::curvature_report;
use pfcurv::flow::integrate;
use pfcurv::suite::{error_report, generate, GeneratorConfig, GowdyStyle};
use pfcurv::{CurvatureOptions, DualScheme, EdgeVolumeMethod, Error, FlowConfig, Integrator, MeshFile};

#[derive(Parser, Debug)]
#[command(name = "pfcurv", version, about = "Piecewise-flat curvature and Ricci flow on triangulated 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a test triangulation and write it as mesh JSON.
    Generate(GenerateArgs),
    /// Compute curvatures of a mesh and write them as CSV.
    Curvature(CurvatureArgs),
    /// Integrate the Ricci flow of a mesh and write the trajectory as CSV.
    Flow(FlowArgs),
    /// Recompute a reference table and print a pass/fail summary.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Manifold {
    Sphere,
    Cylinder,
    FlatTorus,
    Gowdy,
    Nil3,
    Nil3Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Style {
    Cubic,
    Isosceles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Voronoi,
    Barycentric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Clipped,
    HalfVertex,
    SolidAngle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IntegratorArg {
    Euler,
    Rk4,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "config")]
    manifold: Option<Manifold>,
    /// Generator config JSON; replaces the manifold flags.
    #[arg(long, conflicts_with_all = ["manifold", "blocks", "style", "radius", "cells", "height", "amplitude", "spacing"])]
    config: Option<PathBuf>,
    /// Blocks for gowdy and nil3, rings for cylinder, cubes per side for flat-torus.
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long, value_enum)]
    style: Option<Style>,
    #[arg(long)]
    radius: Option<f64>,
    /// Regular sphere triangulation: 5, 16 or 600.
    #[arg(long)]
    cells: Option<usize>,
    /// Length of the cylinder's axial edges.
    #[arg(long)]
    height: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    out: PathBuf,
    /// Error report path; defaults to `<out>.errors.csv` when the mesh has a reference.
    #[arg(long)]
    errors_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    normalized: bool,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value = "rk4")]
    integrator: IntegratorArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(value_enum)]
    table: tables::TableId,
    /// Resolutions for the Gowdy and Nil tables.
    #[arg(long, value_delimiter = ',', default_values_t = tables::BLOCKS)]
    blocks: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Generator config file: a manifold description plus optional dual choice and output path.
#[derive(Debug, Deserialize)]
struct GenerateFile {
    #[serde(flatten)]
    generator: GeneratorConfig,
    scheme: Option<DualScheme>,
    method: Option<EdgeVolumeMethod>,
    out: Option<PathBuf>,
}

fn scheme(s: Scheme) -> DualScheme {
    match s {
        Scheme::Voronoi => DualScheme::Voronoi,
        Scheme::Barycentric => DualScheme::Barycentric,
    }
}

fn method(m: Method) -> EdgeVolumeMethod {
    match m {
        Method::Clipped => EdgeVolumeMethod::Clipped,
        Method::HalfVertex => EdgeVolumeMethod::HalfVertex,
        Method::SolidAngle => EdgeVolumeMethod::SolidAngle,
    }
}

fn override_options(base: CurvatureOptions, s: Option<Scheme>, m: Option<Method>) -> CurvatureOptions {
    CurvatureOptions {
        scheme: s.map(scheme).unwrap_or(base.scheme),
        method: m.map(method).unwrap_or(base.method),
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn require<T>(x: Option<T>, flag: &str, manifold: &str) -> pfcurv::Result<T> {
    x.ok_or_else(|| invalid(format!("--{flag} is required for --manifold {manifold}")))
}

fn generator_from_flags(a: &GenerateArgs) -> pfcurv::Result<GeneratorConfig> {
    let manifold = a.manifold.ok_or_else(|| invalid("--manifold or --config is required"))?;
    let unused = |flags: &[(&str, bool)]| -> pfcurv::Result<()> {
        match flags.iter().find(|f| f.1) {
            Some((flag, _)) => Err(invalid(format!("--{flag} does not apply to --manifold {manifold:?}"))),
            None => Ok(()),
        }
    };
    let radius = a.radius.unwrap_or(1.0);
    Ok(match manifold {
        Manifold::Sphere => {
            unused(&[("blocks", a.blocks.is_some()), ("style", a.style.is_some()), ("height", a.height.is_some())])?;
            GeneratorConfig::Sphere { cells: require(a.cells, "cells", "sphere")?, radius }
        }
        Manifold::Cylinder => {
            unused(&[("cells", a.cells.is_some()), ("style", a.style.is_some())])?;
            GeneratorConfig::Cylinder { radius, b_len: a.height.unwrap_or(1.0), rings: a.blocks.unwrap_or(3) }
        }
        Manifold::FlatTorus => {
            unused(&[("cells", a.cells.is_some()), ("style", a.style.is_some()), ("radius", a.radius.is_some())])?;
            GeneratorConfig::FlatTorus { n: require(a.blocks, "blocks", "flat-torus")?, spacing: a.spacing.unwrap_or(1.0) }
        }
        Manifold::Gowdy => {
            unused(&[("cells", a.cells.is_some()), ("radius", a.radius.is_some())])?;
            GeneratorConfig::Gowdy {
                blocks: require(a.blocks, "blocks", "gowdy")?,
                style: match a.style.unwrap_or(Style::Cubic) {
                    Style::Cubic => GowdyStyle::Cubic,
                    Style::Isosceles => GowdyStyle::Isosceles,
                },
                amplitude: a.amplitude.unwrap_or(0.1),
            }
        }
        Manifold::Nil3 | Manifold::Nil3Flat => {
            unused(&[("cells", a.cells.is_some()), ("style", a.style.is_some()), ("radius", a.radius.is_some())])?;
            GeneratorConfig::Nil3 { blocks: require(a.blocks, "blocks", "nil3")?, twisted: manifold == Manifold::Nil3 }
        }
    })
}

fn write(path: &Path, text: &str) -> pfcurv::Result<()> {
    std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn run_generate(a: GenerateArgs) -> pfcurv::Result<()> {
    let (cfg, file_scheme, file_method, file_out) = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            let f: GenerateFile = serde_json::from_str(&text)?;
            (f.generator, f.scheme, f.method, f.out)
        }
        None => (generator_from_flags(&a)?, None, None, None),
    };
    let out = a.out.or(file_out).ok_or_else(|| invalid("--out is required"))?;
    let g = generate(&cfg)?;
    let mut file = MeshFile::from_generated(&g);
    let mut options = override_options(g.options, a.scheme, a.method);
    options.scheme = file_scheme.filter(|_| a.scheme.is_none()).unwrap_or(options.scheme);
    options.method = file_method.filter(|_| a.method.is_none()).unwrap_or(options.method);
    file.options = Some(options);
    file.write(&out)
}

fn load(path: &Path) -> pfcurv::Result<pfcurv::io::LoadedMesh> {
    MeshFile::read(path)
        .map_err(|e| match e {
            Error::Io(e) => invalid(format!("cannot read {}: {e}", path.display())),
            e => e,
        })?
        .load()
}

fn default_errors_path(out: &Path) -> PathBuf {
    out.with_extension("errors.csv")
}

fn run_curvature(a: CurvatureArgs) -> pfcurv::Result<()> {
    let mesh = load(&a.mesh)?;
    let options = override_options(mesh.options.unwrap_or_default(), a.scheme, a.method);
    let report = curvature_report(&mesh.complex, &mesh.metric, options)?;
    write(&a.out, &csv::curvature_csv(&report, mesh.reference.as_ref()))?;
    if let Some(reference) = &mesh.reference {
        let errors = error_report(&report, reference)?;
        let path = a.errors_out.unwrap_or_else(|| default_errors_path(&a.out));
        write(&path, &csv::error_csv(&errors))?;
    } else if a.errors_out.is_some() {
        return Err(invalid("--errors-out needs a mesh with a smooth reference"));
    }
    Ok(())
}

fn run_flow(a: FlowArgs) -> pfcurv::Result<()> {
    let mesh = load(&a.mesh)?;
    let config = FlowConfig {
        normalized: a.normalized,
        dt: a.dt,
        steps: a.steps,
        integrator: match a.integrator {
            IntegratorArg::Euler => Integrator::Euler,
            IntegratorArg::Rk4 => Integrator::Rk4,
        },
        curvature: override_options(mesh.options.unwrap_or_default(), a.scheme, a.method),
        ..FlowConfig::default()
    };
    let trajectory = integrate(&mesh.complex, &mesh.metric, &config)?;
    write(&a.out, &csv::trajectory_csv(&trajectory))?;
    match &trajectory.halt {
        Some(halt) => Err(Error::Domain(format!("flow halted at {halt}"))),
        None => Ok(()),
    }
}

fn run_reproduce(a: ReproduceArgs) -> pfcurv::Result<()> {
    if a.blocks.is_empty() || a.blocks.contains(&0) {
        return Err(invalid("--blocks needs positive resolutions"));
    }
    let r = tables::reproduce(a.table, &a.blocks)?;
    if let Some(out) = &a.out {
        write(out, &r.csv)?;
    } else {
        print!("{}", r.csv);
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    for c in &r.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("summary: {passed}/{} checks passed", r.checks.len());
    Ok(())
}

fn configure_threads() -> pfcurv::Result<()> {
    let Ok(value) = std::env::var("PFCURV_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid(format!("PFCURV_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("cannot configure {n} threads: {e}")))
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let record = serde_json::json!({ "status": "error", "kind": kind, "exit_code": code, "message": message });
    eprintln!("{record}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().lines().next().unwrap_or("invalid arguments"), 1),
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Curvature(a) => run_curvature(a),
        Command::Flow(a) => run_flow(a),
        Command::Reproduce(a) => run_reproduce(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string(), if e.is_numerical() { 2 } else { 1 }),
    }
}
