//! Builds a scene into core objects: shapes become curves, surfaces and
//! volumes, fields become evaluable closures, charges and currents become
//! distributions.

use std::collections::{BTreeMap, BTreeSet};

use emcalc_core::calculus::{curl, divergence, gradient, DEFAULT_CURVE_N, DEFAULT_STEP, DEFAULT_SURFACE_N, DEFAULT_VOLUME_N};
use emcalc_core::domains::{
    ball, circle, cylinder_volume, disk, helix, parallelepiped, rectangle, segment, sphere_surface,
    triangle,
};
use emcalc_core::em::{b_field_with, e_field_with};
use emcalc_core::viz::PlaneSlice;
use emcalc_core::{
    ChargeDistribution, Curve, CurrentDistribution, Error, PhysicalConstants, Position, ScalarField,
    Surface, Vec3, VectorField, Volume,
};

use crate::expr::Expr;
use crate::scene::{
    Charge, Current, DomainKind, Expression, Field, FieldKind, Query, Scene, SceneError, SceneErrors,
    Shape, Slice, Triple,
};

/// Sample count per parameter used for load-time shape validation.
pub const VALIDATION_SAMPLES: usize = 16;

/// Slices available without declaring them: the coordinate planes through
/// the origin over `[-2, 2]²`.
pub const BUILTIN_SLICES: [(&str, Triple, Triple); 3] = [
    ("xy", [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
    ("yz", [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
    ("xz", [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
];

#[derive(Debug, Clone)]
pub enum Domain {
    Curve(Curve),
    Surface(Surface),
    Volume(Volume),
}

impl Domain {
    pub fn kind(&self) -> DomainKind {
        match self {
            Domain::Curve(_) => DomainKind::Curve,
            Domain::Surface(_) => DomainKind::Surface,
            Domain::Volume(_) => DomainKind::Volume,
        }
    }
}

#[derive(Debug, Clone)]
pub enum FieldValue {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl FieldValue {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldValue::Scalar(_) => FieldKind::Scalar,
            FieldValue::Vector(_) => FieldKind::Vector,
        }
    }
}

/// A scene with every name resolved.
#[derive(Debug, Clone)]
pub struct Model {
    pub constants: PhysicalConstants,
    pub charges: Vec<ChargeDistribution>,
    pub currents: Vec<CurrentDistribution>,
    pub named_charges: BTreeMap<String, ChargeDistribution>,
    pub named_currents: BTreeMap<String, CurrentDistribution>,
    pub shapes: BTreeMap<String, Domain>,
    pub fields: BTreeMap<String, FieldValue>,
    pub slices: BTreeMap<String, PlaneSlice>,
}

impl Model {
    /// Resolves and validates `scene`, collecting every problem found.
    pub fn build(scene: &Scene) -> Result<Model, SceneErrors> {
        let mut b = Builder { scene, errors: Vec::new(), shapes: BTreeMap::new(), fields: BTreeMap::new() };

        let constants = b.constants();
        for name in scene.shapes.keys() {
            b.shape(name, &mut BTreeSet::new());
        }
        let shapes: BTreeMap<String, Domain> =
            std::mem::take(&mut b.shapes).into_iter().filter_map(|(k, v)| v.map(|d| (k, d))).collect();
        for (name, d) in &shapes {
            let r = match d {
                Domain::Curve(c) => c.validate(VALIDATION_SAMPLES),
                Domain::Surface(s) => s.validate(VALIDATION_SAMPLES),
                Domain::Volume(v) => v.validate(VALIDATION_SAMPLES),
            };
            if let Err(e) = r {
                b.error(format!("shapes.{name}"), e.to_string());
            }
        }

        let mut named_charges = BTreeMap::new();
        let charges: Vec<ChargeDistribution> = scene
            .charges
            .iter()
            .enumerate()
            .filter_map(|(i, c)| b.charge(c, &format!("charges[{i}]"), &shapes, &mut named_charges))
            .collect();
        let mut named_currents = BTreeMap::new();
        let currents: Vec<CurrentDistribution> = scene
            .currents
            .iter()
            .enumerate()
            .filter_map(|(i, c)| b.current(c, &format!("currents[{i}]"), &shapes, &mut named_currents))
            .collect();

        let mut model = Model {
            constants,
            charges,
            currents,
            named_charges,
            named_currents,
            shapes,
            fields: BTreeMap::new(),
            slices: BTreeMap::new(),
        };
        for name in scene.fields.keys() {
            b.named_field(name, &model, &mut BTreeSet::new());
        }
        model.fields =
            std::mem::take(&mut b.fields).into_iter().filter_map(|(k, v)| v.map(|f| (k, f))).collect();
        for (name, s) in &scene.slices {
            if let Some(v) = b.slice(name, s) {
                model.slices.insert(name.clone(), v);
            }
        }
        for (i, q) in scene.queries.iter().enumerate() {
            b.query(i, q, &model);
        }

        if b.errors.is_empty() {
            Ok(model)
        } else {
            Err(SceneErrors(b.errors))
        }
    }

    /// A named field. `E` and `B` default to the field of all charges and
    /// all currents unless the scene defines them.
    pub fn field(&self, name: &str) -> Option<FieldValue> {
        if let Some(f) = self.fields.get(name) {
            return Some(f.clone());
        }
        match name {
            "E" => Some(FieldValue::Vector(e_field_with(
                &ChargeDistribution::Multiple(self.charges.clone()),
                &self.constants,
            ))),
            "B" => Some(FieldValue::Vector(b_field_with(
                &CurrentDistribution::Multiple(self.currents.clone()),
                &self.constants,
            ))),
            _ => None,
        }
    }

    /// Kind of a named field without building it.
    pub fn field_kind(&self, name: &str) -> Option<FieldKind> {
        match self.fields.get(name) {
            Some(f) => Some(f.kind()),
            None if name == "E" || name == "B" => Some(FieldKind::Vector),
            None => None,
        }
    }

    pub fn domain(&self, name: &str) -> Option<&Domain> {
        self.shapes.get(name)
    }

    /// A named slice; `xy`, `yz` and `xz` are predefined.
    pub fn slice(&self, name: &str) -> Option<PlaneSlice> {
        if let Some(s) = self.slices.get(name) {
            return Some(s.clone());
        }
        BUILTIN_SLICES.iter().find(|(n, ..)| *n == name).map(|(_, u, v)| {
            PlaneSlice::through(Position::ORIGIN, vec3(*u), vec3(*v), (-2.0, 2.0), (-2.0, 2.0))
                .expect("built-in slices are valid")
        })
    }
}

pub(crate) fn vec3(t: Triple) -> Vec3 {
    Vec3::new(t[0], t[1], t[2])
}

pub(crate) fn point(t: Triple) -> Position {
    Position::cartesian(t[0], t[1], t[2])
}

fn coords(p: Position) -> [f64; 3] {
    let (x, y, z) = p.cartesian_coordinates();
    [x, y, z]
}

/// Expression for a shape coordinate or limit; evaluation failures become
/// NaN, which shape validation rejects.
fn lenient(e: &Expr) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
    let e = e.clone();
    move |v| e.eval(v).unwrap_or(f64::NAN)
}

struct Builder<'a> {
    scene: &'a Scene,
    errors: Vec<SceneError>,
    /// `None` marks a shape that failed to build.
    shapes: BTreeMap<String, Option<Domain>>,
    fields: BTreeMap<String, Option<FieldValue>>,
}

impl Builder<'_> {
    fn error(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.errors.push(SceneError::new(location, message));
    }

    fn compile(&mut self, e: &Expression, vars: &[&str], loc: &str) -> Option<Expr> {
        match e {
            Expression::Number(v) if v.is_finite() => Some(Expr::constant(*v, vars.len())),
            Expression::Number(v) => {
                self.error(loc, format!("{v} is not a finite number"));
                None
            }
            Expression::Text(src) => match Expr::parse(src, vars) {
                Ok(x) => Some(x),
                Err(err) => {
                    self.error(loc, format!("in expression \"{src}\", {err}"));
                    None
                }
            },
        }
    }

    fn constant(&mut self, e: &Expression, loc: &str) -> Option<f64> {
        let x = self.compile(e, &[], loc)?;
        match x.eval(&[]) {
            Ok(v) => Some(v),
            Err(err) => {
                self.error(loc, err.to_string());
                None
            }
        }
    }

    fn constants(&mut self) -> PhysicalConstants {
        let mut c = PhysicalConstants::default();
        if let Some(over) = &self.scene.constants {
            for (name, value, slot) in
                [("epsilon0", over.epsilon0, &mut c.epsilon0), ("mu0", over.mu0, &mut c.mu0)]
            {
                match value {
                    Some(v) if v > 0.0 && v.is_finite() => *slot = v,
                    Some(v) => self.errors.push(SceneError::new(
                        format!("constants.{name}"),
                        format!("must be positive and finite, got {v}"),
                    )),
                    None => {}
                }
            }
        }
        c
    }

    fn shape(&mut self, name: &str, visiting: &mut BTreeSet<String>) -> Option<Domain> {
        if let Some(done) = self.shapes.get(name) {
            return done.clone();
        }
        let loc = format!("shapes.{name}");
        let spec = self.scene.shapes.get(name)?;
        if !visiting.insert(name.to_string()) {
            self.error(&loc, format!("shape '{name}' refers to itself"));
            return None;
        }
        let built = self.build_shape(spec, &loc, visiting);
        visiting.remove(name);
        self.shapes.insert(name.to_string(), built.clone());
        built
    }

    fn build_shape(&mut self, spec: &Shape, loc: &str, visiting: &mut BTreeSet<String>) -> Option<Domain> {
        let made: Result<Domain, Error> = match spec {
            Shape::Segment { from, to } => segment(point(*from), point(*to)).map(Domain::Curve),
            Shape::Circle { radius, center, axis } => {
                circle(*radius, point(*center), vec3(*axis)).map(Domain::Curve)
            }
            Shape::Helix { radius, pitch, turns, center, axis } => {
                helix(*radius, *pitch, *turns, point(*center), vec3(*axis)).map(Domain::Curve)
            }
            Shape::Curve { x, y, z, t } => {
                let vars = ["t"];
                let x = self.compile(x, &vars, &format!("{loc}.x"));
                let y = self.compile(y, &vars, &format!("{loc}.y"));
                let z = self.compile(z, &vars, &format!("{loc}.z"));
                let lo = self.constant(&t[0], &format!("{loc}.t[0]"));
                let hi = self.constant(&t[1], &format!("{loc}.t[1]"));
                let (x, y, z, lo, hi) = (x?, y?, z?, lo?, hi?);
                let (x, y, z) = (lenient(&x), lenient(&y), lenient(&z));
                Curve::new(move |t| Position::cartesian(x(&[t]), y(&[t]), z(&[t])), lo, hi).map(Domain::Curve)
            }
            Shape::Boundary { of } => {
                let of_loc = format!("{loc}.of");
                if !self.scene.shapes.contains_key(of) {
                    self.error(of_loc, format!("undefined shape '{of}'"));
                    return None;
                }
                match self.shape(of, visiting)? {
                    Domain::Surface(s) => Ok(Domain::Curve(s.boundary())),
                    other => {
                        self.error(of_loc, format!("'{of}' is a {}, expected a surface", other.kind()));
                        return None;
                    }
                }
            }
            Shape::Rectangle { corner, edge1, edge2 } => {
                rectangle(point(*corner), vec3(*edge1), vec3(*edge2)).map(Domain::Surface)
            }
            Shape::Triangle { vertices: [a, b, c] } => {
                triangle(point(*a), point(*b), point(*c)).map(Domain::Surface)
            }
            Shape::Disk { radius, center, axis } => disk(*radius, point(*center), vec3(*axis)).map(Domain::Surface),
            Shape::Sphere { radius, center } => sphere_surface(*radius, point(*center)).map(Domain::Surface),
            Shape::Surface { x, y, z, s, t } => {
                let vars = ["s", "t"];
                let x = self.compile(x, &vars, &format!("{loc}.x"));
                let y = self.compile(y, &vars, &format!("{loc}.y"));
                let z = self.compile(z, &vars, &format!("{loc}.z"));
                let s0 = self.constant(&s[0], &format!("{loc}.s[0]"));
                let s1 = self.constant(&s[1], &format!("{loc}.s[1]"));
                let t0 = self.compile(&t[0], &["s"], &format!("{loc}.t[0]"));
                let t1 = self.compile(&t[1], &["s"], &format!("{loc}.t[1]"));
                let (x, y, z, s0, s1, t0, t1) = (x?, y?, z?, s0?, s1?, t0?, t1?);
                let (x, y, z, t0, t1) = (lenient(&x), lenient(&y), lenient(&z), lenient(&t0), lenient(&t1));
                Surface::new(
                    move |s, t| Position::cartesian(x(&[s, t]), y(&[s, t]), z(&[s, t])),
                    s0,
                    s1,
                    move |s| t0(&[s]),
                    move |s| t1(&[s]),
                )
                .map(Domain::Surface)
            }
            Shape::Ball { radius, center } => ball(*radius, point(*center)).map(Domain::Volume),
            Shape::Cylinder { radius, height, center, axis } => {
                cylinder_volume(*radius, *height, point(*center), vec3(*axis)).map(Domain::Volume)
            }
            Shape::Parallelepiped { corner, edge1, edge2, edge3 } => {
                parallelepiped(point(*corner), vec3(*edge1), vec3(*edge2), vec3(*edge3)).map(Domain::Volume)
            }
            Shape::Volume { x, y, z, s, t, u } => {
                let vars = ["s", "t", "u"];
                let x = self.compile(x, &vars, &format!("{loc}.x"));
                let y = self.compile(y, &vars, &format!("{loc}.y"));
                let z = self.compile(z, &vars, &format!("{loc}.z"));
                let s0 = self.constant(&s[0], &format!("{loc}.s[0]"));
                let s1 = self.constant(&s[1], &format!("{loc}.s[1]"));
                let t0 = self.compile(&t[0], &["s"], &format!("{loc}.t[0]"));
                let t1 = self.compile(&t[1], &["s"], &format!("{loc}.t[1]"));
                let u0 = self.compile(&u[0], &["s", "t"], &format!("{loc}.u[0]"));
                let u1 = self.compile(&u[1], &["s", "t"], &format!("{loc}.u[1]"));
                let (x, y, z, s0, s1, t0, t1, u0, u1) = (x?, y?, z?, s0?, s1?, t0?, t1?, u0?, u1?);
                let (x, y, z) = (lenient(&x), lenient(&y), lenient(&z));
                let (t0, t1, u0, u1) = (lenient(&t0), lenient(&t1), lenient(&u0), lenient(&u1));
                Volume::new(
                    move |s, t, u| Position::cartesian(x(&[s, t, u]), y(&[s, t, u]), z(&[s, t, u])),
                    s0,
                    s1,
                    move |s| t0(&[s]),
                    move |s| t1(&[s]),
                    move |s, t| u0(&[s, t]),
                    move |s, t| u1(&[s, t]),
                )
                .map(Domain::Volume)
            }
        };
        match made {
            Ok(d) => Some(d),
            Err(e) => {
                self.error(loc, e.to_string());
                None
            }
        }
    }

    /// Looks up a shape of the given kind, reporting a missing or
    /// mismatched reference at `loc`.
    fn lookup<'m>(
        &mut self,
        shapes: &'m BTreeMap<String, Domain>,
        name: &str,
        want: DomainKind,
        loc: &str,
    ) -> Option<&'m Domain> {
        match shapes.get(name) {
            Some(d) if d.kind() == want => Some(d),
            Some(d) => {
                self.error(loc, format!("'{name}' is a {}, expected a {want}", d.kind()));
                None
            }
            None if self.scene.shapes.contains_key(name) => None,
            None => {
                self.error(loc, format!("undefined shape '{name}'"));
                None
            }
        }
    }

    fn density(&mut self, e: &Expression, loc: &str) -> Option<ScalarField> {
        let x = self.compile(e, &["x", "y", "z"], loc)?;
        let what = loc.to_string();
        Some(ScalarField::try_new(move |p| {
            x.eval(&coords(p))
                .map_err(|err| Error::Evaluation { at: Some(p), message: format!("{what}: {err}") })
        }))
    }

    fn samples(&mut self, n: Option<usize>, default: usize, loc: &str) -> Option<usize> {
        match n {
            Some(0) => {
                self.error(format!("{loc}.n"), "sample count must be positive");
                None
            }
            Some(n) => Some(n),
            None => Some(default),
        }
    }

    fn register<T: Clone>(&mut self, map: &mut BTreeMap<String, T>, name: Option<&str>, value: &T, loc: &str) {
        if let Some(name) = name {
            if map.insert(name.to_string(), value.clone()).is_some() {
                self.error(format!("{loc}.name"), format!("duplicate name '{name}'"));
            }
        }
    }

    fn charge(
        &mut self,
        c: &Charge,
        loc: &str,
        shapes: &BTreeMap<String, Domain>,
        named: &mut BTreeMap<String, ChargeDistribution>,
    ) -> Option<ChargeDistribution> {
        let built = match c {
            Charge::Point { q, at, .. } => {
                if !q.is_finite() {
                    self.error(format!("{loc}.q"), "charge must be finite");
                    return None;
                }
                Some(ChargeDistribution::point(*q, point(*at)))
            }
            Charge::Line { density, along, n, .. } => {
                let d = self.density(density, &format!("{loc}.density"));
                let s = self.lookup(shapes, along, DomainKind::Curve, &format!("{loc}.along"));
                let n = self.samples(*n, DEFAULT_CURVE_N, loc);
                match (d, s, n) {
                    (Some(density), Some(Domain::Curve(curve)), Some(samples)) => {
                        Some(ChargeDistribution::Line { density, curve: curve.clone(), samples })
                    }
                    _ => None,
                }
            }
            Charge::Surface { density, over, n, .. } => {
                let d = self.density(density, &format!("{loc}.density"));
                let s = self.lookup(shapes, over, DomainKind::Surface, &format!("{loc}.over"));
                let n = self.samples(*n, DEFAULT_SURFACE_N, loc);
                match (d, s, n) {
                    (Some(density), Some(Domain::Surface(surface)), Some(samples)) => {
                        Some(ChargeDistribution::Surface { density, surface: surface.clone(), samples })
                    }
                    _ => None,
                }
            }
            Charge::Volume { density, within, n, .. } => {
                let d = self.density(density, &format!("{loc}.density"));
                let s = self.lookup(shapes, within, DomainKind::Volume, &format!("{loc}.within"));
                let n = self.samples(*n, DEFAULT_VOLUME_N, loc);
                match (d, s, n) {
                    (Some(density), Some(Domain::Volume(volume)), Some(samples)) => {
                        Some(ChargeDistribution::Volume { density, volume: volume.clone(), samples })
                    }
                    _ => None,
                }
            }
            Charge::Multiple { members, .. } => {
                let mut out = Vec::with_capacity(members.len());
                let mut ok = true;
                for (i, m) in members.iter().enumerate() {
                    match self.charge(m, &format!("{loc}.members[{i}]"), shapes, named) {
                        Some(d) => out.push(d),
                        None => ok = false,
                    }
                }
                ok.then_some(ChargeDistribution::Multiple(out))
            }
        }?;
        self.register(named, c.name(), &built, loc);
        Some(built)
    }

    fn current(
        &mut self,
        c: &Current,
        loc: &str,
        shapes: &BTreeMap<String, Domain>,
        named: &mut BTreeMap<String, CurrentDistribution>,
    ) -> Option<CurrentDistribution> {
        let built = match c {
            Current::Line { current, along, n, .. } => {
                if !current.is_finite() {
                    self.error(format!("{loc}.current"), "current must be finite");
                }
                let s = self.lookup(shapes, along, DomainKind::Curve, &format!("{loc}.along"));
                let n = self.samples(*n, DEFAULT_CURVE_N, loc);
                match (s, n) {
                    (Some(Domain::Curve(curve)), Some(samples)) if current.is_finite() => {
                        Some(CurrentDistribution::Line { current: *current, curve: curve.clone(), samples })
                    }
                    _ => None,
                }
            }
            Current::Multiple { members, .. } => {
                let mut out = Vec::with_capacity(members.len());
                let mut ok = true;
                for (i, m) in members.iter().enumerate() {
                    match self.current(m, &format!("{loc}.members[{i}]"), shapes, named) {
                        Some(d) => out.push(d),
                        None => ok = false,
                    }
                }
                ok.then_some(CurrentDistribution::Multiple(out))
            }
        }?;
        self.register(named, c.name(), &built, loc);
        Some(built)
    }

    fn named_field(&mut self, name: &str, model: &Model, visiting: &mut BTreeSet<String>) -> Option<FieldValue> {
        if let Some(done) = self.fields.get(name) {
            return done.clone();
        }
        let spec = self.scene.fields.get(name)?;
        if !visiting.insert(name.to_string()) {
            self.error(format!("fields.{name}"), format!("field '{name}' depends on itself"));
            return None;
        }
        let built = self.field(name, spec, model, visiting);
        visiting.remove(name);
        self.fields.insert(name.to_string(), built.clone());
        built
    }

    /// Source of a derivative field, which must be of kind `want`.
    fn operand(
        &mut self,
        of: &str,
        want: FieldKind,
        step: Option<f64>,
        loc: &str,
        model: &Model,
        visiting: &mut BTreeSet<String>,
    ) -> Option<(FieldValue, f64)> {
        let step = step.unwrap_or(DEFAULT_STEP);
        if !(step > 0.0 && step.is_finite()) {
            self.error(format!("{loc}.step"), format!("step must be positive, got {step}"));
            return None;
        }
        let f = if self.scene.fields.contains_key(of) {
            self.named_field(of, model, visiting)?
        } else if let Some(f) = model.field(of) {
            f
        } else {
            self.error(format!("{loc}.of"), format!("undefined field '{of}'"));
            return None;
        };
        if f.kind() != want {
            self.error(format!("{loc}.of"), format!("'{of}' is a {}, expected a {want}", f.kind()));
            return None;
        }
        Some((f, step))
    }

    fn field(&mut self, name: &str, f: &Field, model: &Model, visiting: &mut BTreeSet<String>) -> Option<FieldValue> {
        let loc = format!("fields.{name}");
        let xyz = ["x", "y", "z"];
        match f {
            Field::EField { of } => {
                let dist = match of {
                    None => ChargeDistribution::Multiple(model.charges.clone()),
                    Some(names) => {
                        let mut parts = Vec::new();
                        for (i, n) in names.iter().enumerate() {
                            match model.named_charges.get(n) {
                                Some(d) => parts.push(d.clone()),
                                None => self.error(format!("{loc}.of[{i}]"), format!("undefined charge '{n}'")),
                            }
                        }
                        ChargeDistribution::Multiple(parts)
                    }
                };
                Some(FieldValue::Vector(e_field_with(&dist, &model.constants)))
            }
            Field::BField { of } => {
                let dist = match of {
                    None => CurrentDistribution::Multiple(model.currents.clone()),
                    Some(names) => {
                        let mut parts = Vec::new();
                        for (i, n) in names.iter().enumerate() {
                            match model.named_currents.get(n) {
                                Some(d) => parts.push(d.clone()),
                                None => self.error(format!("{loc}.of[{i}]"), format!("undefined current '{n}'")),
                            }
                        }
                        CurrentDistribution::Multiple(parts)
                    }
                };
                Some(FieldValue::Vector(b_field_with(&dist, &model.constants)))
            }
            Field::Vector { x, y, z } => {
                let cx = self.compile(x, &xyz, &format!("{loc}.x"));
                let cy = self.compile(y, &xyz, &format!("{loc}.y"));
                let cz = self.compile(z, &xyz, &format!("{loc}.z"));
                let (cx, cy, cz) = (cx?, cy?, cz?);
                let name = name.to_string();
                Some(FieldValue::Vector(VectorField::try_new(move |p| {
                    let v = coords(p);
                    let comp = |e: &Expr, c: &str| {
                        e.eval(&v).map_err(|err| Error::Evaluation {
                            at: Some(p),
                            message: format!("field '{name}', {c} component: {err}"),
                        })
                    };
                    Ok(Vec3::new(comp(&cx, "x")?, comp(&cy, "y")?, comp(&cz, "z")?))
                })))
            }
            Field::Curl { of, step } => match self.operand(of, FieldKind::Vector, *step, &loc, model, visiting)? {
                (FieldValue::Vector(v), d) => Some(FieldValue::Vector(curl(d, &v))),
                _ => None,
            },
            Field::Divergence { of, step } => {
                match self.operand(of, FieldKind::Vector, *step, &loc, model, visiting)? {
                    (FieldValue::Vector(v), d) => Some(FieldValue::Scalar(divergence(d, &v))),
                    _ => None,
                }
            }
            Field::Gradient { of, step } => match self.operand(of, FieldKind::Scalar, *step, &loc, model, visiting)? {
                (FieldValue::Scalar(f), d) => Some(FieldValue::Vector(gradient(d, &f))),
                _ => None,
            },
            Field::Scalar { value } => {
                let e = self.compile(value, &xyz, &format!("{loc}.value"))?;
                let name = name.to_string();
                Some(FieldValue::Scalar(ScalarField::try_new(move |p| {
                    e.eval(&coords(p)).map_err(|err| Error::Evaluation {
                        at: Some(p),
                        message: format!("field '{name}': {err}"),
                    })
                })))
            }
        }
    }

    fn slice(&mut self, name: &str, s: &Slice) -> Option<PlaneSlice> {
        let r = PlaneSlice::through(
            point(s.origin),
            vec3(s.u_axis),
            vec3(s.v_axis),
            (s.u[0], s.u[1]),
            (s.v[0], s.v[1]),
        );
        match r {
            Ok(p) => Some(p),
            Err(e) => {
                self.error(format!("slices.{name}"), e.to_string());
                None
            }
        }
    }

    fn field_ref(&mut self, model: &Model, name: &str, want: Option<FieldKind>, loc: String) {
        match model.field_kind(name) {
            None if self.scene.fields.contains_key(name) => {}
            None => self.error(loc, format!("undefined field '{name}'")),
            Some(k) => {
                if let Some(w) = want {
                    if k != w {
                        self.error(loc, format!("'{name}' is a {k}, expected a {w}"));
                    }
                }
            }
        }
    }

    fn domain_ref(&mut self, model: &Model, name: &str, want: DomainKind, loc: String) {
        match model.domain(name) {
            Some(d) if d.kind() != want => self.error(loc, format!("'{name}' is a {}, expected a {want}", d.kind())),
            Some(_) => {}
            None if self.scene.shapes.contains_key(name) => {}
            None => self.error(loc, format!("undefined shape '{name}'")),
        }
    }

    fn query(&mut self, i: usize, q: &Query, model: &Model) {
        let loc = |k: &str| format!("queries[{i}].{k}");
        let positive = |b: &mut Self, n: Option<usize>, key: &str| {
            if n == Some(0) {
                b.error(loc(key), "sample count must be positive");
            }
        };
        match q {
            Query::Eval { field, at } => {
                self.field_ref(model, field, None, loc("field"));
                if at.iter().flatten().any(|c| !c.is_finite()) {
                    self.error(loc("at"), "probe coordinates must be finite");
                }
            }
            Query::Integrate { kind, field, domain, n } => {
                let (fk, dk) = kind.arity();
                self.field_ref(model, field, Some(fk), loc("field"));
                self.domain_ref(model, domain, dk, loc("domain"));
                positive(self, *n, "n");
            }
            Query::Check { theorem, field, domain, step, curve_n, surface_n, volume_n, threshold, atol } => {
                let (fk, dk) = theorem.arity();
                self.field_ref(model, field, Some(fk), loc("field"));
                self.domain_ref(model, domain, dk, loc("domain"));
                positive(self, *curve_n, "curveN");
                positive(self, *surface_n, "surfaceN");
                positive(self, *volume_n, "volumeN");
                if matches!(step, Some(d) if !(*d > 0.0 && d.is_finite())) {
                    self.error(loc("step"), "step must be positive");
                }
                if matches!(threshold, Some(t) if !(*t > 0.0)) {
                    self.error(loc("threshold"), "threshold must be positive");
                }
                if matches!(atol, Some(a) if !(*a >= 0.0)) {
                    self.error(loc("atol"), "atol must be non-negative");
                }
            }
            Query::Plot { field, slice, n, .. } => {
                self.field_ref(model, field, Some(FieldKind::Vector), loc("field"));
                if model.slice(slice).is_none() && !self.scene.slices.contains_key(slice) {
                    self.error(loc("slice"), format!("undefined slice '{slice}'"));
                }
                if *n < 2 {
                    self.error(loc("n"), "grid needs at least 2 cells per side");
                }
            }
        }
    }
}
