//! Command-line interface.
//!
//! Exit status: 0 success, 2 usage or scene error, 3 a theorem check over
//! its threshold, 4 singularity or I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use emcalc_core::calculus::{DEFAULT_CURVE_N, DEFAULT_STEP, DEFAULT_SURFACE_N, DEFAULT_VOLUME_N};

use crate::commands::{self, CheckOptions, CommandError, RunOutput, DEFAULT_ATOL, DEFAULT_THRESHOLD};
use crate::model::Model;
use crate::scene::{parse_unvalidated, IntegralKind, ScaleName, Scene, Theorem, Triple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "emcalc", version, about = "Vector calculus and electro/magnetostatics on scene files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SceneArg {
    /// Scene file (JSON).
    pub scene: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a field at probe points.
    Eval {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long)]
        field: String,
        /// Probe position `x,y,z`; repeatable.
        #[arg(long = "at", required = true, value_parser = parse_triple, allow_hyphen_values = true)]
        at: Vec<Triple>,
    },
    /// Compute one of the nine integrals.
    Integrate {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long, value_parser = parse_named::<IntegralKind>)]
        kind: IntegralKind,
        #[arg(long)]
        field: String,
        #[arg(long)]
        domain: String,
        /// Sampler resolution (default 1000 for curves, 200 for surfaces, 40 for volumes).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check the gradient, Stokes or divergence theorem.
    Check {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long, value_parser = parse_named::<Theorem>)]
        theorem: Theorem,
        #[arg(long)]
        field: String,
        #[arg(long)]
        domain: String,
        /// Finite-difference step.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_CURVE_N)]
        curve_n: usize,
        #[arg(long, default_value_t = DEFAULT_SURFACE_N)]
        surface_n: usize,
        #[arg(long, default_value_t = DEFAULT_VOLUME_N)]
        volume_n: usize,
        /// Largest accepted relative residual.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Absolute residual at or below which the check passes anyway.
        #[arg(long, default_value_t = DEFAULT_ATOL)]
        atol: f64,
    },
    /// Render a vector field on a plane slice as SVG.
    Plot {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long)]
        field: String,
        /// Slice name; `xy`, `yz` and `xz` are predefined over [-2, 2]².
        #[arg(long)]
        slice: String,
        /// Cells per side.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_named::<ScaleName>, default_value = "cbrt")]
        scale: ScaleName,
    },
    /// Run the queries listed in the scene.
    Run {
        #[command(flatten)]
        scene: SceneArg,
    },
    /// Load and validate a scene without running anything.
    Validate {
        #[command(flatten)]
        scene: SceneArg,
    },
}

fn parse_named<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

/// Parses `x,y,z`.
pub fn parse_triple(s: &str) -> Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z but got '{s}'"));
    }
    let mut t = [0.0; 3];
    for (slot, p) in t.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().map_err(|_| format!("'{p}' is not a number"))?;
        if !slot.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
    }
    Ok(t)
}

fn load(path: &Path) -> Result<(Scene, Model), CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Io(format!("cannot read {}: {e}", path.display())))?;
    let scene = parse_unvalidated(&text).map_err(CommandError::Scene)?;
    let model = Model::build(&scene).map_err(CommandError::Scene)?;
    Ok((scene, model))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
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
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CommandError> {
    let io = |e: std::io::Error| CommandError::Io(format!("cannot write output: {e}"));
    match cmd {
        Command::Eval { scene, field, at } => {
            let (_, model) = load(&scene.scene)?;
            let mut out = String::new();
            let r = commands::eval(&model, &field, &at, &mut out);
            stdout.write_all(out.as_bytes()).map_err(io)?;
            r?;
        }
        Command::Integrate { scene, kind, field, domain, n } => {
            let (_, model) = load(&scene.scene)?;
            let line = commands::integrate(&model, kind, &field, &domain, n)?;
            writeln!(stdout, "{line}").map_err(io)?;
        }
        Command::Check { scene, theorem, field, domain, step, curve_n, surface_n, volume_n, threshold, atol } => {
            let (_, model) = load(&scene.scene)?;
            let o = CheckOptions { theorem, field, domain, step, curve_n, surface_n, volume_n, threshold, atol };
            let (line, ok) = commands::check(&model, &o)?;
            writeln!(stdout, "{line}").map_err(io)?;
            if !ok {
                writeln!(stderr, "relative residual above threshold {threshold}").map_err(io)?;
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Plot { scene, field, slice, n, out, scale } => {
            let (_, model) = load(&scene.scene)?;
            let p = commands::plot(&model, &field, &slice, n, out, scale)?;
            for w in &p.warnings {
                writeln!(stderr, "{w}").map_err(io)?;
            }
            writeln!(stdout, "{}", p.line).map_err(io)?;
        }
        Command::Run { scene } => {
            let (scene, model) = load(&scene.scene)?;
            let mut out = RunOutput::default();
            let r = commands::run_queries(&scene, &model, &mut out);
            stdout.write_all(out.stdout.as_bytes()).map_err(io)?;
            stderr.write_all(out.stderr.as_bytes()).map_err(io)?;
            r?;
            if !out.failed_checks.is_empty() {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Validate { scene } => {
            let (scene, _) = load(&scene.scene)?;
            writeln!(
                stdout,
                "ok: {} charges, {} currents, {} shapes, {} fields, {} slices, {} queries",
                scene.charges.len(),
                scene.currents.len(),
                scene.shapes.len(),
                scene.fields.len(),
                scene.slices.len(),
                scene.queries.len()
            )
            .map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}
