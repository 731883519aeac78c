//! The operations behind each subcommand, producing report text.

use std::fmt::Write as _;
use std::path::PathBuf;

use emcalc_core::calculus::{DEFAULT_CURVE_N, DEFAULT_STEP, DEFAULT_SURFACE_N, DEFAULT_VOLUME_N};
use emcalc_core::theorems::{check_divergence_theorem, check_gradient_theorem, check_stokes, TheoremReport};
use emcalc_core::viz::Scale;
use emcalc_core::{
    crossed_line_integral, curve_sample, dotted_line_integral, dotted_surface_integral, scalar_line_integral,
    scalar_surface_integral, scalar_volume_integral, surface_sample, vector_line_integral, vector_surface_integral,
    vector_volume_integral, volume_sample, Error,
};

use crate::model::{point, Domain, FieldValue, Model};
use crate::report;
use crate::scene::{DomainKind, FieldKind, IntegralKind, Query, Scene, ScaleName, SceneErrors, Theorem, Triple};
use crate::svg::{render_vector_field, RenderError, RenderSpec, DEFAULT_ARROW_LENGTH};

/// Default relative-residual threshold for `check`.
pub const DEFAULT_THRESHOLD: f64 = 1e-2;

/// Default absolute residual below which a check passes regardless of the
/// relative residual. Both sides of an identity that vanishes come out as
/// roundoff, whose relative residual is meaningless.
pub const DEFAULT_ATOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid scene:\n{0}")]
    Scene(SceneErrors),
    #[error("{context}: {source}")]
    Runtime {
        context: String,
        #[source]
        source: Error,
    },
    #[error("{0}")]
    Io(String),
}

impl CommandError {
    /// Process exit status: 2 for usage and scene errors, 4 for runtime and
    /// I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) | CommandError::Scene(_) => 2,
            CommandError::Runtime { .. } | CommandError::Io(_) => 4,
        }
    }

    fn runtime(context: impl Into<String>) -> impl FnOnce(Error) -> CommandError {
        let context = context.into();
        move |source| CommandError::Runtime { context, source }
    }
}

impl From<RenderError> for CommandError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Field(source) => CommandError::Runtime { context: "plot".into(), source },
            io @ RenderError::Io { .. } => CommandError::Io(io.to_string()),
        }
    }
}

fn field(model: &Model, name: &str) -> Result<FieldValue, CommandError> {
    model.field(name).ok_or_else(|| CommandError::Usage(format!("undefined field '{name}'")))
}

fn domain<'m>(model: &'m Model, name: &str) -> Result<&'m Domain, CommandError> {
    model.domain(name).ok_or_else(|| CommandError::Usage(format!("undefined shape '{name}'")))
}

fn arity_error(what: &str, want: (FieldKind, DomainKind), field: (&str, FieldKind), dom: (&str, DomainKind)) -> CommandError {
    CommandError::Usage(format!(
        "{what} expects a {} and a {}; '{}' is a {} and '{}' is a {}",
        want.0, want.1, field.0, field.1, dom.0, dom.1
    ))
}

/// One line per probe: `x y z : Fx Fy Fz` (or `x y z : f` for a scalar
/// field). Stops at the first probe that cannot be evaluated.
pub fn eval(model: &Model, field_name: &str, probes: &[Triple], out: &mut String) -> Result<(), CommandError> {
    let f = field(model, field_name)?;
    for &p in probes {
        let ctx = || format!("probe ({}, {}, {})", p[0], p[1], p[2]);
        let value = match &f {
            FieldValue::Vector(v) => report::vector(v.eval(point(p)).map_err(CommandError::runtime(ctx()))?),
            FieldValue::Scalar(s) => report::number(s.eval(point(p)).map_err(CommandError::runtime(ctx()))?),
        };
        let _ = writeln!(out, "{} : {value}", report::triple(p));
    }
    Ok(())
}

/// The integral's value: one number, or three for a vector result.
pub fn integrate(
    model: &Model,
    kind: IntegralKind,
    field_name: &str,
    domain_name: &str,
    n: Option<usize>,
) -> Result<String, CommandError> {
    let f = field(model, field_name)?;
    let d = domain(model, domain_name)?;
    let want = kind.arity();
    if (f.kind(), d.kind()) != want {
        return Err(arity_error(kind.as_str(), want, (field_name, f.kind()), (domain_name, d.kind())));
    }
    if n == Some(0) {
        return Err(CommandError::Usage("--n must be positive".into()));
    }
    let ctx = format!("{kind} of '{field_name}' over '{domain_name}'");
    let cs = || curve_sample(n.unwrap_or(DEFAULT_CURVE_N));
    let ss = || surface_sample(n.unwrap_or(DEFAULT_SURFACE_N));
    let vs = || volume_sample(n.unwrap_or(DEFAULT_VOLUME_N));
    use FieldValue::{Scalar, Vector};
    use IntegralKind::*;
    let text = match (kind, &f, d) {
        (ScalarLineIntegral, Scalar(f), Domain::Curve(c)) => report::number(scalar_line_integral(&cs(), f, c).map_err(CommandError::runtime(ctx))?),
        (VectorLineIntegral, Vector(f), Domain::Curve(c)) => report::vector(vector_line_integral(&cs(), f, c).map_err(CommandError::runtime(ctx))?),
        (DottedLineIntegral, Vector(f), Domain::Curve(c)) => report::number(dotted_line_integral(&cs(), f, c).map_err(CommandError::runtime(ctx))?),
        (CrossedLineIntegral, Vector(f), Domain::Curve(c)) => report::vector(crossed_line_integral(&cs(), f, c).map_err(CommandError::runtime(ctx))?),
        (ScalarSurfaceIntegral, Scalar(f), Domain::Surface(s)) => report::number(scalar_surface_integral(&ss(), f, s).map_err(CommandError::runtime(ctx))?),
        (VectorSurfaceIntegral, Vector(f), Domain::Surface(s)) => report::vector(vector_surface_integral(&ss(), f, s).map_err(CommandError::runtime(ctx))?),
        (DottedSurfaceIntegral, Vector(f), Domain::Surface(s)) => report::number(dotted_surface_integral(&ss(), f, s).map_err(CommandError::runtime(ctx))?),
        (ScalarVolumeIntegral, Scalar(f), Domain::Volume(v)) => report::number(scalar_volume_integral(&vs(), f, v).map_err(CommandError::runtime(ctx))?),
        (VectorVolumeIntegral, Vector(f), Domain::Volume(v)) => report::vector(vector_volume_integral(&vs(), f, v).map_err(CommandError::runtime(ctx))?),
        _ => unreachable!("arity checked above"),
    };
    Ok(text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub theorem: Theorem,
    pub field: String,
    pub domain: String,
    pub step: f64,
    pub curve_n: usize,
    pub surface_n: usize,
    pub volume_n: usize,
    pub threshold: f64,
    pub atol: f64,
}

impl CheckOptions {
    pub fn new(theorem: Theorem, field: impl Into<String>, domain: impl Into<String>) -> Self {
        CheckOptions {
            theorem,
            field: field.into(),
            domain: domain.into(),
            step: DEFAULT_STEP,
            curve_n: DEFAULT_CURVE_N,
            surface_n: DEFAULT_SURFACE_N,
            volume_n: DEFAULT_VOLUME_N,
            threshold: DEFAULT_THRESHOLD,
            atol: DEFAULT_ATOL,
        }
    }
}

/// Runs a theorem check. The line is `lhs rhs abs_residual rel_residual`;
/// the flag tells whether the check passed: relative residual under the
/// threshold, or absolute residual at most `atol`.
pub fn check(model: &Model, o: &CheckOptions) -> Result<(String, bool), CommandError> {
    if !(o.atol >= 0.0) {
        return Err(CommandError::Usage(format!("--atol must be non-negative, got {}", o.atol)));
    }
    if !(o.step > 0.0 && o.step.is_finite()) {
        return Err(CommandError::Usage(format!("--step must be positive, got {}", o.step)));
    }
    if o.curve_n == 0 || o.surface_n == 0 || o.volume_n == 0 {
        return Err(CommandError::Usage("sample counts must be positive".into()));
    }
    let f = field(model, &o.field)?;
    let d = domain(model, &o.domain)?;
    let want = o.theorem.arity();
    if (f.kind(), d.kind()) != want {
        let what = format!("the {} theorem", o.theorem);
        return Err(arity_error(&what, want, (&o.field, f.kind()), (&o.domain, d.kind())));
    }
    let ctx = format!("{} check of '{}' on '{}'", o.theorem, o.field, o.domain);
    let report: TheoremReport = match (&f, d) {
        (FieldValue::Scalar(f), Domain::Curve(c)) => check_gradient_theorem(f, c, o.step, &curve_sample(o.curve_n)),
        (FieldValue::Vector(f), Domain::Surface(s)) => {
            check_stokes(f, s, o.step, &surface_sample(o.surface_n), &curve_sample(o.curve_n))
        }
        (FieldValue::Vector(f), Domain::Volume(v)) => {
            check_divergence_theorem(f, v, o.step, &volume_sample(o.volume_n), &surface_sample(o.surface_n))
        }
        _ => unreachable!("arity checked above"),
    }
    .map_err(CommandError::runtime(ctx))?;
    let line = format!(
        "{} {} {} {}",
        report::number(report.lhs),
        report::number(report.rhs),
        report::number(report.absolute_residual),
        report::number(report.relative_residual)
    );
    Ok((line, report.holds_within(o.threshold) || report.absolute_residual <= o.atol))
}

pub fn scale_for(name: ScaleName) -> Scale {
    match name {
        ScaleName::Cbrt => Scale::Cbrt,
        ScaleName::Linear => Scale::Linear,
        ScaleName::Log1p => Scale::Log1p,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput {
    /// `<path> <max magnitude>`.
    pub line: String,
    /// One message per cell left empty at a singularity.
    pub warnings: Vec<String>,
    pub arrows: usize,
}

pub fn plot(
    model: &Model,
    field_name: &str,
    slice_name: &str,
    n: usize,
    out: PathBuf,
    scale: ScaleName,
) -> Result<PlotOutput, CommandError> {
    if n < 2 {
        return Err(CommandError::Usage("--n must be at least 2".into()));
    }
    let FieldValue::Vector(f) = field(model, field_name)? else {
        return Err(CommandError::Usage(format!("plot expects a vector field; '{field_name}' is a scalar field")));
    };
    let slice = model.slice(slice_name).ok_or_else(|| CommandError::Usage(format!("undefined slice '{slice_name}'")))?;
    let spec = RenderSpec { scale: scale_for(scale), grid_n: n, output_path: out, arrow_length: DEFAULT_ARROW_LENGTH };
    let grid = render_vector_field(&spec, &slice, &f)?;
    let warnings = grid
        .warnings
        .iter()
        .map(|w| format!("warning: cell ({}, {}) left empty: {}", w.col, w.row, w.error))
        .collect();
    Ok(PlotOutput {
        line: format!("{} {}", spec.output_path.display(), report::number(grid.max_magnitude)),
        warnings,
        arrows: grid.arrows.len(),
    })
}

/// Result of running a scene's queries.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    /// Indices of `check` queries over their threshold.
    pub failed_checks: Vec<usize>,
}

/// Runs every query in order, each preceded by a `# query <i>: <command>`
/// header. Stops at the first query that errors; `check` failures are
/// recorded and the run continues.
pub fn run_queries(scene: &Scene, model: &Model, out: &mut RunOutput) -> Result<(), CommandError> {
    for (i, q) in scene.queries.iter().enumerate() {
        let label = match q {
            Query::Eval { field, .. } => format!("eval {field}"),
            Query::Integrate { kind, field, domain, .. } => format!("integrate {kind} {field} {domain}"),
            Query::Check { theorem, field, domain, .. } => format!("check {theorem} {field} {domain}"),
            Query::Plot { field, slice, .. } => format!("plot {field} {slice}"),
        };
        let _ = writeln!(out.stdout, "# query {i}: {label}");
        match q {
            Query::Eval { field, at } => eval(model, field, at, &mut out.stdout)?,
            Query::Integrate { kind, field, domain, n } => {
                let line = integrate(model, *kind, field, domain, *n)?;
                let _ = writeln!(out.stdout, "{line}");
            }
            Query::Check { theorem, field, domain, step, curve_n, surface_n, volume_n, threshold, atol } => {
                let mut o = CheckOptions::new(*theorem, field, domain);
                o.step = step.unwrap_or(o.step);
                o.curve_n = curve_n.unwrap_or(o.curve_n);
                o.surface_n = surface_n.unwrap_or(o.surface_n);
                o.volume_n = volume_n.unwrap_or(o.volume_n);
                o.threshold = threshold.unwrap_or(o.threshold);
                o.atol = atol.unwrap_or(o.atol);
                let (line, ok) = check(model, &o)?;
                let _ = writeln!(out.stdout, "{line}");
                if !ok {
                    let _ = writeln!(out.stderr, "query {i}: relative residual above threshold {}", o.threshold);
                    out.failed_checks.push(i);
                }
            }
            Query::Plot { field, slice, n, out: path, scale } => {
                let p = plot(model, field, slice, *n, PathBuf::from(path), scale.unwrap_or(ScaleName::Cbrt))?;
                let _ = writeln!(out.stdout, "{}", p.line);
                for w in p.warnings {
                    let _ = writeln!(out.stderr, "{w}");
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    fn model(text: &str) -> Model {
        Model::build(&parse_scene(text).unwrap()).unwrap()
    }

    const HOMEWORK: &str = r#"{
        "shapes": {"rect": {"type":"surface","x":0,"y":"s","z":"t","s":[0,2],"t":[-4,4]},
                   "edge": {"type":"boundary","of":"rect"},
                   "sphere": {"type":"sphere","radius":1}},
        "fields": {"F": {"type":"vector","x":0,"y":"-z","z":"y"},
                   "one": {"type":"scalar","value":1},
                   "c": {"type":"vector","x":1,"y":2,"z":3}}
    }"#;

    #[test]
    fn point_charge_probe() {
        let m = model(r#"{"charges":[{"type":"point","q":1e-9,"at":[0,0,0]}]}"#);
        let mut out = String::new();
        eval(&m, "E", &[[1.0, 0.0, 0.0]], &mut out).unwrap();
        let (probe, value) = out.trim_end().split_once(" : ").unwrap();
        assert_eq!(probe, "1.0000000000000000e0 0 0");
        let parts: Vec<&str> = value.split(' ').collect();
        assert_eq!(&parts[1..], ["0", "0"]);
        let ex: f64 = parts[0].parse().unwrap();
        assert!((ex - 8.987551787368176).abs() < 1e-6 * 8.987551787368176, "{out}");
        let e = eval(&m, "E", &[[0.0, 0.0, 0.0]], &mut String::new()).unwrap_err();
        assert_eq!(e.exit_code(), 4);
        assert!(e.to_string().contains("probe (0, 0, 0)"), "{e}");
    }

    #[test]
    fn empty_scene_field_is_zero() {
        let m = model("{}");
        let mut out = String::new();
        eval(&m, "E", &[[0.3, -2.0, 1.0]], &mut out).unwrap();
        assert!(out.ends_with(": 0 0 0\n"), "{out}");
    }

    #[test]
    fn homework_right_side() {
        let m = model(HOMEWORK);
        let v: f64 = integrate(&m, IntegralKind::DottedLineIntegral, "F", "edge", Some(1000)).unwrap().parse().unwrap();
        assert!((v - 32.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn sphere_area() {
        let m = model(HOMEWORK);
        let v: f64 = integrate(&m, IntegralKind::ScalarSurfaceIntegral, "one", "sphere", Some(200)).unwrap().parse().unwrap();
        assert!((v - 4.0 * std::f64::consts::PI).abs() < 0.005 * 4.0 * std::f64::consts::PI);
    }

    #[test]
    fn arity_mismatch_is_a_usage_error() {
        let m = model(HOMEWORK);
        let e = integrate(&m, IntegralKind::DottedLineIntegral, "one", "edge", None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("expects a vector field and a curve"), "{e}");
        let e = check(&m, &CheckOptions::new(Theorem::Divergence, "F", "rect")).unwrap_err();
        assert!(e.to_string().contains("expects a vector field and a volume"), "{e}");
    }

    #[test]
    fn checks() {
        let m = model(HOMEWORK);
        let (line, ok) = check(&m, &CheckOptions::new(Theorem::Stokes, "F", "rect")).unwrap();
        assert!(ok);
        let nums: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(nums.len(), 4);
        assert!((nums[0] - 32.0).abs() < 1e-4 && (nums[1] - 32.0).abs() < 1e-4);

        let (line, ok) = check(&m, &CheckOptions::new(Theorem::Stokes, "c", "rect")).unwrap();
        assert!(ok, "{line}");
        let nums: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert!(nums[0].abs() < 1e-6 * 16.0 && nums[1].abs() < 1e-6 * 16.0);

        let strict = CheckOptions { atol: 0.0, ..CheckOptions::new(Theorem::Stokes, "F", "rect") };
        assert!(check(&m, &strict).unwrap().1);
    }

    #[test]
    fn broken_field_fails_the_check() {
        // A jump across the middle of the surface is invisible to the curl
        // but not to the circulation along the boundary.
        let m = model(
            r#"{"shapes": {"sq": {"type":"rectangle","corner":[-1,-1,0],"edge1":[2,0,0],"edge2":[0,2,0]}},
                "fields": {"j": {"type":"vector","x":"step(y)","y":0,"z":0}}}"#,
        );
        let (_, ok) = check(&m, &CheckOptions::new(Theorem::Stokes, "j", "sq")).unwrap();
        assert!(!ok);
    }
}
