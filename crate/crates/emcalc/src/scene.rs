//! The JSON scene format: charges, currents, named shapes, fields and plane
//! slices, plus a list of queries. See `docs/scene-schema.md`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::Model;

pub type Triple = [f64; 3];

/// A number or an expression string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expression {
    Number(f64),
    Text(String),
}

impl From<f64> for Expression {
    fn from(v: f64) -> Self {
        Expression::Number(v)
    }
}

impl From<&str> for Expression {
    fn from(s: &str) -> Self {
        Expression::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charges: Vec<Charge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub currents: Vec<Current>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shapes: BTreeMap<String, Shape>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fields: BTreeMap<String, Field>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub slices: BTreeMap<String, Slice>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum Charge {
    Point {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        q: f64,
        at: Triple,
    },
    Line {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        density: Expression,
        along: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Surface {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        density: Expression,
        over: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Volume {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        density: Expression,
        within: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Multiple {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        members: Vec<Charge>,
    },
}

impl Charge {
    pub fn name(&self) -> Option<&str> {
        match self {
            Charge::Point { name, .. }
            | Charge::Line { name, .. }
            | Charge::Surface { name, .. }
            | Charge::Volume { name, .. }
            | Charge::Multiple { name, .. } => name.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum Current {
    Line {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        current: f64,
        along: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Multiple {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        members: Vec<Current>,
    },
}

impl Current {
    pub fn name(&self) -> Option<&str> {
        match self {
            Current::Line { name, .. } | Current::Multiple { name, .. } => name.as_deref(),
        }
    }
}

fn origin() -> Triple {
    [0.0, 0.0, 0.0]
}

fn z_axis() -> Triple {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum Shape {
    // Curves.
    Segment {
        from: Triple,
        to: Triple,
    },
    Circle {
        radius: f64,
        #[serde(default = "origin")]
        center: Triple,
        #[serde(default = "z_axis")]
        axis: Triple,
    },
    Helix {
        radius: f64,
        pitch: f64,
        turns: f64,
        #[serde(default = "origin")]
        center: Triple,
        #[serde(default = "z_axis")]
        axis: Triple,
    },
    /// `(x(t), y(t), z(t))` for `t ∈ [t[0], t[1]]`.
    Curve {
        x: Expression,
        y: Expression,
        z: Expression,
        t: [Expression; 2],
    },
    /// The boundary curve of a named surface.
    Boundary {
        of: String,
    },
    // Surfaces.
    Rectangle {
        corner: Triple,
        edge1: Triple,
        edge2: Triple,
    },
    Triangle {
        vertices: [Triple; 3],
    },
    Disk {
        radius: f64,
        #[serde(default = "origin")]
        center: Triple,
        #[serde(default = "z_axis")]
        axis: Triple,
    },
    Sphere {
        radius: f64,
        #[serde(default = "origin")]
        center: Triple,
    },
    /// `(x(s,t), y(s,t), z(s,t))`; `t` limits may depend on `s`.
    Surface {
        x: Expression,
        y: Expression,
        z: Expression,
        s: [Expression; 2],
        t: [Expression; 2],
    },
    // Volumes.
    Ball {
        radius: f64,
        #[serde(default = "origin")]
        center: Triple,
    },
    Cylinder {
        radius: f64,
        height: f64,
        #[serde(default = "origin")]
        center: Triple,
        #[serde(default = "z_axis")]
        axis: Triple,
    },
    Parallelepiped {
        corner: Triple,
        edge1: Triple,
        edge2: Triple,
        edge3: Triple,
    },
    /// `(x, y, z)` of `(s, t, u)`; `t` limits may depend on `s`, `u` limits
    /// on `s` and `t`.
    Volume {
        x: Expression,
        y: Expression,
        z: Expression,
        s: [Expression; 2],
        t: [Expression; 2],
        u: [Expression; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum Field {
    /// Electric field of the named charges, or of all charges.
    #[serde(rename = "eField")]
    EField {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        of: Option<Vec<String>>,
    },
    /// Magnetic field of the named currents, or of all currents.
    #[serde(rename = "bField")]
    BField {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        of: Option<Vec<String>>,
    },
    #[serde(rename = "vector")]
    Vector { x: Expression, y: Expression, z: Expression },
    #[serde(rename = "scalar")]
    Scalar { value: Expression },
    /// Finite-difference curl of a named vector field.
    #[serde(rename = "curl")]
    Curl {
        of: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
    /// Finite-difference divergence of a named vector field.
    #[serde(rename = "divergence")]
    Divergence {
        of: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
    /// Finite-difference gradient of a named scalar field.
    #[serde(rename = "gradient")]
    Gradient {
        of: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Slice {
    #[serde(default = "origin")]
    pub origin: Triple,
    pub u_axis: Triple,
    pub v_axis: Triple,
    pub u: [f64; 2],
    pub v: [f64; 2],
}

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),*
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),*
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                $name::ALL.iter().copied().find(|k| k.as_str() == s).ok_or_else(|| {
                    let names: Vec<&str> = $name::ALL.iter().map(|k| k.as_str()).collect();
                    format!("unknown value '{s}' (expected one of: {})", names.join(", "))
                })
            }
        }
    };
}

named_enum!(
    /// The nine integrals.
    IntegralKind {
        ScalarLineIntegral => "scalarLineIntegral",
        VectorLineIntegral => "vectorLineIntegral",
        DottedLineIntegral => "dottedLineIntegral",
        CrossedLineIntegral => "crossedLineIntegral",
        ScalarSurfaceIntegral => "scalarSurfaceIntegral",
        VectorSurfaceIntegral => "vectorSurfaceIntegral",
        DottedSurfaceIntegral => "dottedSurfaceIntegral",
        ScalarVolumeIntegral => "scalarVolumeIntegral",
        VectorVolumeIntegral => "vectorVolumeIntegral",
    }
);

named_enum!(
    Theorem {
        Gradient => "gradient",
        Stokes => "stokes",
        Divergence => "divergence",
    }
);

named_enum!(
    ScaleName {
        Cbrt => "cbrt",
        Linear => "linear",
        Log1p => "log1p",
    }
);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Scalar,
    Vector,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Scalar => "scalar field",
            FieldKind::Vector => "vector field",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Curve,
    Surface,
    Volume,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::Curve => "curve",
            DomainKind::Surface => "surface",
            DomainKind::Volume => "volume",
        })
    }
}

impl IntegralKind {
    /// The field and domain kinds this integral takes.
    pub fn arity(self) -> (FieldKind, DomainKind) {
        use IntegralKind::*;
        let field = match self {
            ScalarLineIntegral | ScalarSurfaceIntegral | ScalarVolumeIntegral => FieldKind::Scalar,
            _ => FieldKind::Vector,
        };
        let domain = match self {
            ScalarLineIntegral | VectorLineIntegral | DottedLineIntegral | CrossedLineIntegral => {
                DomainKind::Curve
            }
            ScalarSurfaceIntegral | VectorSurfaceIntegral | DottedSurfaceIntegral => DomainKind::Surface,
            ScalarVolumeIntegral | VectorVolumeIntegral => DomainKind::Volume,
        };
        (field, domain)
    }
}

impl Theorem {
    pub fn arity(self) -> (FieldKind, DomainKind) {
        match self {
            Theorem::Gradient => (FieldKind::Scalar, DomainKind::Curve),
            Theorem::Stokes => (FieldKind::Vector, DomainKind::Surface),
            Theorem::Divergence => (FieldKind::Vector, DomainKind::Volume),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "camelCase", deny_unknown_fields)]
pub enum Query {
    Eval {
        field: String,
        at: Vec<Triple>,
    },
    Integrate {
        kind: IntegralKind,
        field: String,
        domain: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    #[serde(rename_all = "camelCase")]
    Check {
        theorem: Theorem,
        field: String,
        domain: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        curve_n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        surface_n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        volume_n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atol: Option<f64>,
    },
    Plot {
        field: String,
        slice: String,
        n: usize,
        out: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<ScaleName>,
    },
}

/// A problem found while loading a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneError {
    /// Where the problem is: `line L column C` for syntax errors, a path such
    /// as `shapes.loop.radius` or `queries[2].field` otherwise.
    pub location: String,
    pub message: String,
}

impl SceneError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        SceneError { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Every problem found in a scene, in document order.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneErrors(pub Vec<SceneError>);

impl fmt::Display for SceneErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SceneErrors {}

/// Parses and validates a scene document.
///
/// Validation resolves every name, parses every expression, builds every
/// shape, field and slice, and samples each shape for finiteness and ordered
/// limits.
pub fn parse_scene(text: &str) -> Result<Scene, SceneErrors> {
    let scene = parse_unvalidated(text)?;
    Model::build(&scene)?;
    Ok(scene)
}

/// Parses the document structure only.
pub fn parse_unvalidated(text: &str) -> Result<Scene, SceneErrors> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scene: Scene = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let location = if path.is_empty() || path == "." {
            format!("line {} column {}", inner.line(), inner.column())
        } else {
            format!("{path} (line {} column {})", inner.line(), inner.column())
        };
        let mut message = inner.to_string();
        // serde_json appends its own position; the location already has it.
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        SceneErrors(vec![SceneError { location, message }])
    })?;
    Ok(scene)
}

pub fn serialize_scene(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(scene).expect("scene values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = parse_scene(r#"{"charges":[{"type":"point","q":1e-9,"at":[0,0,0]}]}"#).unwrap();
        assert_eq!(s.charges.len(), 1);
        assert_eq!(s.charges[0], Charge::Point { name: None, q: 1e-9, at: [0.0; 3] });
    }

    #[test]
    fn empty_document_is_a_valid_scene() {
        assert_eq!(parse_scene("{}").unwrap(), Scene::default());
    }

    #[test]
    fn undefined_shape_is_named() {
        let e = parse_scene(r#"{"currents":[{"type":"line","current":1,"along":"loopX"}]}"#).unwrap_err();
        assert_eq!(e.0.len(), 1);
        assert!(e.0[0].message.contains("loopX"), "{e}");
        assert_eq!(e.0[0].location, "currents[0].along");
    }

    #[test]
    fn unknown_tag_has_a_location() {
        let e = parse_scene(r#"{"charges":[{"type":"blob","q":1}]}"#).unwrap_err();
        assert!(e.0[0].location.starts_with("charges[0]"), "{e}");
        assert!(e.0[0].message.contains("blob"), "{e}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let e = parse_scene(r#"{"shapes":{"c":{"type":"circle","radius":1,"colour":"red"}}}"#).unwrap_err();
        assert!(e.0[0].message.contains("colour"), "{e}");
        assert!(e.0[0].location.starts_with("shapes.c"), "{e}");
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let e = parse_scene("{\n  \"charges\": [\n}").unwrap_err();
        assert!(e.0[0].location.contains("line 3"), "{e}");
    }

    #[test]
    fn numbers_and_strings_are_both_expressions() {
        let s = parse_unvalidated(r#"{"fields":{"f":{"type":"vector","x":0,"y":"-z","z":"y"}}}"#).unwrap();
        assert_eq!(
            s.fields["f"],
            Field::Vector { x: Expression::Number(0.0), y: "-z".into(), z: "y".into() }
        );
    }

    #[test]
    fn defaults_are_filled_in() {
        let s = parse_unvalidated(r#"{"shapes":{"c":{"type":"circle","radius":2}}}"#).unwrap();
        assert_eq!(s.shapes["c"], Shape::Circle { radius: 2.0, center: [0.0; 3], axis: [0.0, 0.0, 1.0] });
    }

    #[test]
    fn kinds_parse_by_name() {
        assert_eq!("crossedLineIntegral".parse(), Ok(IntegralKind::CrossedLineIntegral));
        assert!("crossedLine".parse::<IntegralKind>().is_err());
        assert_eq!(IntegralKind::ALL.len(), 9);
        assert_eq!(
            IntegralKind::DottedSurfaceIntegral.arity(),
            (FieldKind::Vector, DomainKind::Surface)
        );
        assert_eq!(IntegralKind::ScalarVolumeIntegral.arity(), (FieldKind::Scalar, DomainKind::Volume));
    }

    #[test]
    fn serialization_round_trips() {
        let text = r#"{
            "constants": {"epsilon0": 1.0},
            "charges": [{"type":"multiple","name":"pair","members":[
                {"type":"point","q":1,"at":[1,0,0]},
                {"type":"point","q":-1,"at":[-1,0,0]}]}],
            "shapes": {"c": {"type":"circle","radius":1}},
            "queries": [{"command":"check","theorem":"stokes","field":"E","domain":"d","surfaceN":20}]
        }"#;
        let s = parse_unvalidated(text).unwrap();
        assert_eq!(parse_unvalidated(&serialize_scene(&s)).unwrap(), s);
    }
}
