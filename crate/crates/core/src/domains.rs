//! Parametric curves, surfaces and volumes, a small shape library, and
//! boundary extraction.
//!
//! Orientation conventions: a curve runs in the direction of increasing
//! parameter; a surface's normal is `∂f/∂s × ∂f/∂t`; the faces returned by
//! [`Volume::boundary`] have outward normals.
//!
//! Surfaces let the limits of `t` depend on `s`, and volumes let the limits of
//! `u` depend on `(s, t)`. Internally both are also addressed through
//! normalized coordinates in `[0, 1]`, which is how the samplers walk them.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::SurfaceApprox;
use crate::error::{Error, Result};
use crate::geometry::{Position, Vec3};
use crate::math::{cos, floor, sin, wrap_angle, PI, TAU};

type CurveFn = dyn Fn(f64) -> Position + Send + Sync;
type SurfaceFn = dyn Fn(f64, f64) -> Position + Send + Sync;
type VolumeFn = dyn Fn(f64, f64, f64) -> Position + Send + Sync;
type Limit1 = dyn Fn(f64) -> f64 + Send + Sync;
type Limit2 = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Relative tolerance used when deciding that two boundary pieces coincide or
/// that a piece has collapsed.
const COINCIDENCE_TOL: f64 = 1e-9;
const PROBES: usize = 16;

/// Interpolates between limits, landing exactly on `hi` at `w = 1`.
#[inline]
fn lerp(lo: f64, hi: f64, w: f64) -> f64 {
    if w == 1.0 {
        hi
    } else {
        lo + w * (hi - lo)
    }
}

/// A map `[start, end] -> space`.
#[derive(Clone)]
pub struct Curve {
    func: Arc<CurveFn>,
    start: f64,
    end: f64,
}

impl Curve {
    pub fn new(
        func: impl Fn(f64) -> Position + Send + Sync + 'static,
        start: f64,
        end: f64,
    ) -> Result<Self> {
        if !(start <= end) {
            return Err(Error::InvalidLimits { lo: start, hi: end });
        }
        Ok(Curve { func: Arc::new(func), start, end })
    }

    pub fn at(&self, t: f64) -> Position {
        (self.func)(t)
    }

    pub fn start_param(&self) -> f64 {
        self.start
    }

    pub fn end_param(&self) -> f64 {
        self.end
    }

    pub fn start_point(&self) -> Position {
        self.at(self.start)
    }

    pub fn end_point(&self) -> Position {
        self.at(self.end)
    }

    /// Evaluates at `m + 1` evenly spaced parameters and rejects non-finite
    /// positions.
    pub fn validate(&self, m: usize) -> Result<()> {
        let m = m.max(1);
        for k in 0..=m {
            let t = lerp(self.start, self.end, k as f64 / m as f64);
            if !self.at(t).is_finite() {
                return Err(Error::Degenerate("curve evaluates to a non-finite position"));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve").field("start", &self.start).field("end", &self.end).finish()
    }
}

/// A map of `(s, t)` into space with `s ∈ [s_lo, s_hi]` and
/// `t ∈ [t_lo(s), t_hi(s)]`.
#[derive(Clone)]
pub struct Surface {
    func: Arc<SurfaceFn>,
    s_lo: f64,
    s_hi: f64,
    t_lo: Arc<Limit1>,
    t_hi: Arc<Limit1>,
}

impl Surface {
    pub fn new(
        func: impl Fn(f64, f64) -> Position + Send + Sync + 'static,
        s_lo: f64,
        s_hi: f64,
        t_lo: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_hi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(s_lo <= s_hi) {
            return Err(Error::InvalidLimits { lo: s_lo, hi: s_hi });
        }
        Ok(Surface {
            func: Arc::new(func),
            s_lo,
            s_hi,
            t_lo: Arc::new(t_lo),
            t_hi: Arc::new(t_hi),
        })
    }

    /// A surface over a fixed parameter rectangle.
    pub fn rectangular(
        func: impl Fn(f64, f64) -> Position + Send + Sync + 'static,
        (s_lo, s_hi): (f64, f64),
        (t_lo, t_hi): (f64, f64),
    ) -> Result<Self> {
        if !(t_lo <= t_hi) {
            return Err(Error::InvalidLimits { lo: t_lo, hi: t_hi });
        }
        Surface::new(func, s_lo, s_hi, move |_| t_lo, move |_| t_hi)
    }

    pub fn at(&self, s: f64, t: f64) -> Position {
        (self.func)(s, t)
    }

    pub fn s_limits(&self) -> (f64, f64) {
        (self.s_lo, self.s_hi)
    }

    pub fn t_limits(&self, s: f64) -> (f64, f64) {
        ((self.t_lo)(s), (self.t_hi)(s))
    }

    /// Point at normalized coordinates `(a, b) ∈ [0, 1]²`.
    pub fn at_unit(&self, a: f64, b: f64) -> Position {
        let s = lerp(self.s_lo, self.s_hi, a);
        let (lo, hi) = self.t_limits(s);
        self.at(s, lerp(lo, hi, b))
    }

    /// Sampled check of `t_lo(s) ≤ t_hi(s)` and finiteness over an
    /// `(m + 1)²` grid.
    pub fn validate(&self, m: usize) -> Result<()> {
        let m = m.max(1);
        for i in 0..=m {
            let s = lerp(self.s_lo, self.s_hi, i as f64 / m as f64);
            let (lo, hi) = self.t_limits(s);
            if !(lo <= hi) {
                return Err(Error::InvalidLimits { lo, hi });
            }
            for j in 0..=m {
                if !self.at(s, lerp(lo, hi, j as f64 / m as f64)).is_finite() {
                    return Err(Error::Degenerate("surface evaluates to a non-finite position"));
                }
            }
        }
        Ok(())
    }

    /// The oriented boundary as one piecewise curve.
    ///
    /// The four edges are visited as: `t = t_lo` forward in `s`, `s = s_hi`
    /// forward in `t`, `t = t_hi` backward in `s`, `s = s_lo` backward in `t`.
    /// Edges that collapse to a point, and pairs of opposite edges that
    /// coincide (the seam of a periodic parametrization), contribute nothing
    /// and are skipped. Each remaining edge gets one unit of parameter, so a
    /// plain quadrilateral boundary runs over `[0, 4]`. A closed surface
    /// yields a curve over `[0, 0]`.
    pub fn boundary(&self) -> Curve {
        let edges: [fn(f64) -> (f64, f64); 4] = [
            |w| (w, 0.0),
            |w| (1.0, w),
            |w| (1.0 - w, 1.0),
            |w| (0.0, 1.0 - w),
        ];
        let probe = |e: usize| -> Vec<Position> {
            (0..=PROBES)
                .map(|k| {
                    let (a, b) = edges[e](k as f64 / PROBES as f64);
                    self.at_unit(a, b)
                })
                .collect()
        };
        let samples: Vec<Vec<Position>> = (0..4).map(probe).collect();
        let tol = COINCIDENCE_TOL * extent(samples.iter().flatten().copied());

        let mut keep = [true; 4];
        for (e, pts) in samples.iter().enumerate() {
            if pts.iter().all(|p| near(*p, pts[0], tol)) {
                keep[e] = false;
            }
        }
        // Opposite edges traverse in opposite directions; a seam shows up as
        // one edge retracing the other.
        for (e, f) in [(0, 2), (1, 3)] {
            let a = &samples[e];
            let b = &samples[f];
            if keep[e] && keep[f] && a.iter().zip(b.iter().rev()).all(|(p, q)| near(*p, *q, tol)) {
                keep[e] = false;
                keep[f] = false;
            }
        }

        let kept: Vec<usize> = (0..4).filter(|&e| keep[e]).collect();
        let surface = self.clone();
        if kept.is_empty() {
            let anchor = surface.at_unit(0.0, 0.0);
            return Curve { func: Arc::new(move |_| anchor), start: 0.0, end: 0.0 };
        }
        let pieces = kept.len();
        let func = move |tau: f64| {
            let idx = (floor(tau).max(0.0) as usize).min(pieces - 1);
            let local = tau - idx as f64;
            let (a, b) = edges[kept[idx]](local);
            surface.at_unit(a, b)
        };
        Curve { func: Arc::new(func), start: 0.0, end: pieces as f64 }
    }
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface").field("s_lo", &self.s_lo).field("s_hi", &self.s_hi).finish()
    }
}

/// A map of `(s, t, u)` into space with nested limits:
/// `s ∈ [s_lo, s_hi]`, `t ∈ [t_lo(s), t_hi(s)]`, `u ∈ [u_lo(s, t), u_hi(s, t)]`.
#[derive(Clone)]
pub struct Volume {
    func: Arc<VolumeFn>,
    s_lo: f64,
    s_hi: f64,
    t_lo: Arc<Limit1>,
    t_hi: Arc<Limit1>,
    u_lo: Arc<Limit2>,
    u_hi: Arc<Limit2>,
}

impl Volume {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        func: impl Fn(f64, f64, f64) -> Position + Send + Sync + 'static,
        s_lo: f64,
        s_hi: f64,
        t_lo: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_hi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        u_lo: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        u_hi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(s_lo <= s_hi) {
            return Err(Error::InvalidLimits { lo: s_lo, hi: s_hi });
        }
        Ok(Volume {
            func: Arc::new(func),
            s_lo,
            s_hi,
            t_lo: Arc::new(t_lo),
            t_hi: Arc::new(t_hi),
            u_lo: Arc::new(u_lo),
            u_hi: Arc::new(u_hi),
        })
    }

    /// A volume over a fixed parameter box.
    pub fn cuboidal(
        func: impl Fn(f64, f64, f64) -> Position + Send + Sync + 'static,
        s: (f64, f64),
        (t_lo, t_hi): (f64, f64),
        (u_lo, u_hi): (f64, f64),
    ) -> Result<Self> {
        for (lo, hi) in [(t_lo, t_hi), (u_lo, u_hi)] {
            if !(lo <= hi) {
                return Err(Error::InvalidLimits { lo, hi });
            }
        }
        Volume::new(func, s.0, s.1, move |_| t_lo, move |_| t_hi, move |_, _| u_lo, move |_, _| u_hi)
    }

    pub fn at(&self, s: f64, t: f64, u: f64) -> Position {
        (self.func)(s, t, u)
    }

    pub fn s_limits(&self) -> (f64, f64) {
        (self.s_lo, self.s_hi)
    }

    pub fn t_limits(&self, s: f64) -> (f64, f64) {
        ((self.t_lo)(s), (self.t_hi)(s))
    }

    pub fn u_limits(&self, s: f64, t: f64) -> (f64, f64) {
        ((self.u_lo)(s, t), (self.u_hi)(s, t))
    }

    /// Point at normalized coordinates `(a, b, c) ∈ [0, 1]³`.
    pub fn at_unit(&self, a: f64, b: f64, c: f64) -> Position {
        let s = lerp(self.s_lo, self.s_hi, a);
        let (tl, th) = self.t_limits(s);
        let t = lerp(tl, th, b);
        let (ul, uh) = self.u_limits(s, t);
        self.at(s, t, lerp(ul, uh, c))
    }

    /// Sampled check of the nested limit ordering and finiteness.
    pub fn validate(&self, m: usize) -> Result<()> {
        let m = m.max(1);
        let w = |k: usize| k as f64 / m as f64;
        for i in 0..=m {
            let s = lerp(self.s_lo, self.s_hi, w(i));
            let (tl, th) = self.t_limits(s);
            if !(tl <= th) {
                return Err(Error::InvalidLimits { lo: tl, hi: th });
            }
            for j in 0..=m {
                let t = lerp(tl, th, w(j));
                let (ul, uh) = self.u_limits(s, t);
                if !(ul <= uh) {
                    return Err(Error::InvalidLimits { lo: ul, hi: uh });
                }
                for k in 0..=m {
                    if !self.at(s, t, lerp(ul, uh, w(k))).is_finite() {
                        return Err(Error::Degenerate("volume evaluates to a non-finite position"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sign of the parametrization's Jacobian, estimated from a coarse
    /// signed-volume sum.
    fn is_right_handed(&self) -> bool {
        const M: usize = 4;
        let h = 1.0 / M as f64;
        let mut total = 0.0;
        for i in 0..M {
            for j in 0..M {
                for k in 0..M {
                    let (a, b, c) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h);
                    let [ea, eb, ec] = crate::calculus::cell_edges(self, a, b, c, h);
                    total += ea.dot(eb.cross(ec));
                }
            }
        }
        total >= 0.0
    }

    /// Boundary faces, each oriented with an outward normal and parametrized
    /// over `[0, 1]²`.
    ///
    /// Faces that collapse to zero area (a radial coordinate reaching zero,
    /// the poles of a sphere) and pairs of opposite faces that coincide (the
    /// seam of a periodic angle) are omitted, so a ball reports only its
    /// sphere and an axis-aligned box all six sides.
    pub fn boundary(&self) -> Vec<Surface> {
        let right = self.is_right_handed();
        // Each face: map (p, q) -> (a, b, c) with outward normal ∂p × ∂q for a
        // right-handed parametrization.
        let faces: [FaceMap; 6] = [
            |p, q| (0.0, q, p),
            |p, q| (1.0, p, q),
            |p, q| (p, 0.0, q),
            |p, q| (q, 1.0, p),
            |p, q| (q, p, 0.0),
            |p, q| (p, q, 1.0),
        ];
        const G: usize = 8;
        let grid: Vec<(f64, f64)> = (0..=G)
            .flat_map(|i| (0..=G).map(move |j| (i as f64 / G as f64, j as f64 / G as f64)))
            .collect();
        let images: Vec<Vec<Position>> = faces
            .iter()
            .map(|face| {
                grid.iter()
                    .map(|&(p, q)| {
                        let (a, b, c) = face(p, q);
                        self.at_unit(a, b, c)
                    })
                    .collect()
            })
            .collect();
        let scale = extent(images.iter().flatten().copied());
        let tol = COINCIDENCE_TOL * scale;

        let surfaces: Vec<Surface> = faces
            .iter()
            .map(|&face| {
                let vol = self.clone();
                let func = move |p: f64, q: f64| {
                    let (p, q) = if right { (p, q) } else { (q, p) };
                    let (a, b, c) = face(p, q);
                    vol.at_unit(a, b, c)
                };
                Surface::rectangular(func, (0.0, 1.0), (0.0, 1.0))
                    .expect("unit limits are ordered")
            })
            .collect();

        let mut keep = [true; 6];
        for (e, face) in surfaces.iter().enumerate() {
            let area: f64 = crate::calculus::surface_sample(G)
                .approximate(face)
                .iter()
                .map(|(_, da)| da.magnitude())
                .sum();
            if area <= 1e-12 * scale * scale {
                keep[e] = false;
            }
        }
        // Opposite faces are probed at the same (b, c) / (a, c) / (a, b)
        // points, so a seam means identical image grids.
        let seam_grid = |face: usize| -> Vec<(f64, f64, f64)> {
            grid.iter().map(|&(p, q)| faces[face](p, q)).collect()
        };
        for (lo, hi) in [(0, 1), (2, 3), (4, 5)] {
            if !(keep[lo] && keep[hi]) {
                continue;
            }
            let lo_pts = seam_grid(lo);
            let coincide = lo_pts.iter().all(|&(a, b, c)| {
                let (a2, b2, c2) = match lo {
                    0 => (1.0, b, c),
                    2 => (a, 1.0, c),
                    _ => (a, b, 1.0),
                };
                near(self.at_unit(a, b, c), self.at_unit(a2, b2, c2), tol)
            });
            if coincide {
                keep[lo] = false;
                keep[hi] = false;
            }
        }
        surfaces.into_iter().zip(keep).filter_map(|(s, k)| k.then_some(s)).collect()
    }
}

impl fmt::Debug for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Volume").field("s_lo", &self.s_lo).field("s_hi", &self.s_hi).finish()
    }
}


/// Largest coordinate-wise span of a point cloud (at least `f64::MIN_POSITIVE`).
fn extent(points: impl Iterator<Item = Position>) -> f64 {
    let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    for p in points {
        let v = p.to_vec();
        lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
        hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
    }
    let span = (hi - lo).max_abs();
    if span.is_finite() && span > 0.0 {
        span
    } else {
        f64::MIN_POSITIVE
    }
}

fn near(p: Position, q: Position, tol: f64) -> bool {
    (p.to_vec() - q.to_vec()).max_abs() <= tol
}

/// Orthonormal `(e1, e2, n)` with `e1 × e2 = n`. For `n = ẑ` this is
/// `(x̂, ŷ, ẑ)`.
/// Parameters `(p, q)` of a face to unit-cube coordinates `(a, b, c)`.
type FaceMap = fn(f64, f64) -> (f64, f64, f64);

pub fn frame(axis: Vec3) -> Result<(Vec3, Vec3, Vec3)> {
    let n = axis.normalize().map_err(|_| Error::Degenerate("zero axis"))?;
    let seed = Vec3::Y.cross(n);
    let e1 = if seed.magnitude() > 0.5 { seed.normalize()? } else { n.cross(Vec3::X).normalize()? };
    let e2 = n.cross(e1);
    Ok((e1, e2, n))
}

fn positive(value: f64, what: &'static str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Degenerate(what))
    }
}

/// Straight segment from `p0` (parameter 0) to `p1` (parameter 1).
pub fn segment(p0: Position, p1: Position) -> Result<Curve> {
    let d = p1.to_vec() - p0.to_vec();
    if d == Vec3::ZERO {
        return Err(Error::Degenerate("segment endpoints coincide"));
    }
    Curve::new(move |t| p0.shifted(t * d), 0.0, 1.0)
}

/// Circle of `radius` about `center` in the plane normal to `axis`,
/// counter-clockwise about `axis`, parameter `t ∈ [0, 2π]`.
pub fn circle(radius: f64, center: Position, axis: Vec3) -> Result<Curve> {
    positive(radius, "circle radius must be positive")?;
    let (e1, e2, _) = frame(axis)?;
    Curve::new(
        move |t| {
            let t = wrap_angle(t);
            center.shifted(radius * cos(t) * e1 + radius * sin(t) * e2)
        },
        0.0,
        TAU,
    )
}

/// Helix winding counter-clockwise about `axis`, rising `pitch` per turn.
pub fn helix(radius: f64, pitch: f64, turns: f64, center: Position, axis: Vec3) -> Result<Curve> {
    positive(radius, "helix radius must be positive")?;
    positive(turns, "helix turns must be positive")?;
    if !pitch.is_finite() {
        return Err(Error::Degenerate("helix pitch must be finite"));
    }
    let (e1, e2, n) = frame(axis)?;
    Curve::new(
        move |t| center.shifted(radius * cos(t) * e1 + radius * sin(t) * e2 + (pitch * t / TAU) * n),
        0.0,
        TAU * turns,
    )
}

/// Parallelogram `corner + s·edge1 + t·edge2`, `s, t ∈ [0, 1]`, normal
/// along `edge1 × edge2`.
pub fn rectangle(corner: Position, edge1: Vec3, edge2: Vec3) -> Result<Surface> {
    let n = edge1.cross(edge2);
    if n.magnitude() <= 1e-14 * edge1.magnitude() * edge2.magnitude() || n == Vec3::ZERO {
        return Err(Error::Degenerate("rectangle edges are parallel"));
    }
    Surface::rectangular(move |s, t| corner.shifted(s * edge1 + t * edge2), (0.0, 1.0), (0.0, 1.0))
}

/// Triangle `p0 + s(p1 − p0) + t(p2 − p0)` with `t ∈ [0, 1 − s]`.
pub fn triangle(p0: Position, p1: Position, p2: Position) -> Result<Surface> {
    let a = p1.to_vec() - p0.to_vec();
    let b = p2.to_vec() - p0.to_vec();
    if a.cross(b) == Vec3::ZERO {
        return Err(Error::Degenerate("triangle vertices are collinear"));
    }
    Surface::new(move |s, t| p0.shifted(s * a + t * b), 0.0, 1.0, |_| 0.0, |s| 1.0 - s)
}

/// Flat disk, polar parameters `(ρ, φ)`, normal along `axis`.
pub fn disk(radius: f64, center: Position, axis: Vec3) -> Result<Surface> {
    positive(radius, "disk radius must be positive")?;
    let (e1, e2, _) = frame(axis)?;
    Surface::rectangular(
        move |rho, phi| {
            let phi = wrap_angle(phi);
            center.shifted(rho * cos(phi) * e1 + rho * sin(phi) * e2)
        },
        (0.0, radius),
        (0.0, TAU),
    )
}

/// Sphere with outward normal, parameters `(θ, φ)`.
pub fn sphere_surface(radius: f64, center: Position) -> Result<Surface> {
    positive(radius, "sphere radius must be positive")?;
    Surface::rectangular(
        move |theta, phi| center.shifted(radius * spherical_unit(theta, phi)),
        (0.0, PI),
        (0.0, TAU),
    )
}

/// Solid ball, parameters `(r, θ, φ)`.
pub fn ball(radius: f64, center: Position) -> Result<Volume> {
    positive(radius, "ball radius must be positive")?;
    Volume::cuboidal(
        move |r, theta, phi| center.shifted(r * spherical_unit(theta, phi)),
        (0.0, radius),
        (0.0, PI),
        (0.0, TAU),
    )
}

/// Solid cylinder standing on `base_center`, extending `height` along `axis`;
/// parameters `(ρ, φ, h)`.
pub fn cylinder_volume(radius: f64, height: f64, base_center: Position, axis: Vec3) -> Result<Volume> {
    positive(radius, "cylinder radius must be positive")?;
    positive(height, "cylinder height must be positive")?;
    let (e1, e2, n) = frame(axis)?;
    Volume::cuboidal(
        move |rho, phi, h| {
            let phi = wrap_angle(phi);
            base_center.shifted(rho * cos(phi) * e1 + rho * sin(phi) * e2 + h * n)
        },
        (0.0, radius),
        (0.0, TAU),
        (0.0, height),
    )
}

/// `corner + a·edge1 + b·edge2 + c·edge3` over the unit cube.
pub fn parallelepiped(corner: Position, edge1: Vec3, edge2: Vec3, edge3: Vec3) -> Result<Volume> {
    let det = edge1.dot(edge2.cross(edge3));
    let scale = edge1.magnitude() * edge2.magnitude() * edge3.magnitude();
    if det.abs() <= 1e-14 * scale || det == 0.0 {
        return Err(Error::Degenerate("parallelepiped edges are coplanar"));
    }
    Volume::cuboidal(
        move |a, b, c| corner.shifted(a * edge1 + b * edge2 + c * edge3),
        (0.0, 1.0),
        (0.0, 1.0),
        (0.0, 1.0),
    )
}

fn spherical_unit(theta: f64, phi: f64) -> Vec3 {
    let phi = wrap_angle(phi);
    let st = sin(theta);
    Vec3::new(st * cos(phi), st * sin(phi), cos(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{curve_sample, surface_sample, volume_sample, CurveApprox, VolumeApprox};

    fn homework_rect() -> Surface {
        Surface::rectangular(|y, z| Position::cartesian(0.0, y, z), (0.0, 2.0), (-4.0, 4.0)).unwrap()
    }

    fn area(s: &Surface, n: usize) -> f64 {
        surface_sample(n).approximate(s).iter().map(|(_, da)| da.magnitude()).sum()
    }

    fn vector_area(s: &Surface, n: usize) -> Vec3 {
        surface_sample(n).approximate(s).iter().map(|(_, da)| *da).sum()
    }

    #[test]
    fn rect_boundary_hits_the_corners() {
        let b = homework_rect().boundary();
        assert_eq!((b.start_param(), b.end_param()), (0.0, 4.0));
        assert_eq!(b.at(0.0), Position::cartesian(0.0, 0.0, -4.0));
        assert_eq!(b.at(1.0), Position::cartesian(0.0, 2.0, -4.0));
        assert_eq!(b.at(2.0), Position::cartesian(0.0, 2.0, 4.0));
        assert_eq!(b.at(3.0), Position::cartesian(0.0, 0.0, 4.0));
        assert_eq!(b.at(4.0), Position::cartesian(0.0, 0.0, -4.0));
        assert_eq!(b.at(0.25), Position::cartesian(0.0, 0.5, -4.0));
    }

    #[test]
    fn disk_boundary_is_its_rim() {
        let d = disk(1.0, Position::ORIGIN, Vec3::Z).unwrap();
        let b = d.boundary();
        assert_eq!(b.end_param() - b.start_param(), 1.0);
        let length: f64 = curve_sample(1000).approximate(&b).iter().map(|(_, dl)| dl.magnitude()).sum();
        assert!((length - TAU).abs() < 0.01 * TAU);
        // Counter-clockwise seen from +z.
        let p = b.at(0.25);
        assert!(p.y() > 0.9);
    }

    #[test]
    fn closed_surface_has_empty_boundary() {
        let b = sphere_surface(2.0, Position::ORIGIN).unwrap().boundary();
        assert_eq!(b.start_param(), b.end_param());
    }

    #[test]
    fn triangle_drops_the_collapsed_edge() {
        let t = triangle(
            Position::ORIGIN,
            Position::cartesian(1.0, 0.0, 0.0),
            Position::cartesian(0.0, 1.0, 0.0),
        )
        .unwrap();
        let b = t.boundary();
        assert_eq!(b.end_param(), 3.0);
        assert_eq!(b.at(1.0), Position::cartesian(1.0, 0.0, 0.0));
        assert_eq!(b.at(2.0), Position::cartesian(0.0, 1.0, 0.0));
        assert!((area(&t, 10) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ball_boundary_is_one_sphere() {
        let faces = ball(1.0, Position::ORIGIN).unwrap().boundary();
        assert_eq!(faces.len(), 1);
        let a = area(&faces[0], 200);
        assert!((a - 4.0 * PI).abs() < 0.01 * 4.0 * PI);
        // Outward: the flux of the position field is positive.
        let p = faces[0].at_unit(0.5, 0.1);
        let da = surface_sample(4).approximate(&faces[0]);
        assert!(da.iter().map(|(q, a)| q.to_vec().dot(*a)).sum::<f64>() > 0.0);
        assert!(p.is_finite());
    }

    #[test]
    fn cube_boundary_has_six_unit_faces() {
        let cube = parallelepiped(Position::ORIGIN, Vec3::X, Vec3::Y, Vec3::Z).unwrap();
        let faces = cube.boundary();
        assert_eq!(faces.len(), 6);
        let mut total = Vec3::ZERO;
        for f in &faces {
            assert!((area(f, 10) - 1.0).abs() < 1e-12);
            let va = vector_area(f, 10);
            // Outward: the normal points away from the cube center.
            let c = f.at_unit(0.5, 0.5).to_vec() - Vec3::new(0.5, 0.5, 0.5);
            assert!(va.dot(c) > 0.0);
            total += va;
        }
        assert!(total.magnitude() < 1e-12);
    }

    #[test]
    fn left_handed_parametrization_still_faces_outward() {
        let cube = parallelepiped(Position::ORIGIN, Vec3::Y, Vec3::X, Vec3::Z).unwrap();
        for f in cube.boundary() {
            let c = f.at_unit(0.5, 0.5).to_vec() - Vec3::new(0.5, 0.5, 0.5);
            assert!(vector_area(&f, 4).dot(c) > 0.0);
        }
    }

    #[test]
    fn cylinder_boundary_tiles_its_surface() {
        let cyl = cylinder_volume(1.0, 2.0, Position::ORIGIN, Vec3::Z).unwrap();
        let faces = cyl.boundary();
        assert_eq!(faces.len(), 3);
        let total: f64 = faces.iter().map(|f| area(f, 200)).sum();
        let exact = 2.0 * PI + 2.0 * PI * 2.0;
        assert!((total - exact).abs() < 0.01 * exact);
        let closure: Vec3 = faces.iter().map(|f| vector_area(f, 50)).sum();
        assert!(closure.magnitude() < 1e-6 * total);
    }

    #[test]
    fn box_boundary_area_matches() {
        let b = parallelepiped(
            Position::cartesian(-1.0, 2.0, 0.5),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 3.0, 0.0),
            Vec3::new(0.0, 0.0, 0.5),
        )
        .unwrap();
        let total: f64 = b.boundary().iter().map(|f| area(f, 4)).sum();
        let exact = 2.0 * (6.0 + 1.0 + 1.5);
        assert!((total - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn shape_examples() {
        let s = segment(Position::ORIGIN, Position::cartesian(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(s.at(0.5), Position::cartesian(0.0, 0.0, 1.0));
        let c = circle(1.0, Position::ORIGIN, Vec3::Z).unwrap();
        let p = c.at(PI / 2.0);
        assert!(p.x().abs() < 1e-16 && p.y() == 1.0 && p.z() == 0.0);
        assert_eq!(c.at(TAU), c.at(0.0));
        let vol: f64 = volume_sample(40)
            .approximate(&ball(1.0, Position::ORIGIN).unwrap())
            .iter()
            .map(|(_, dv)| dv)
            .sum();
        assert!((vol - 4.0 * PI / 3.0).abs() < 0.01 * 4.0 * PI / 3.0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(segment(Position::ORIGIN, Position::ORIGIN).is_err());
        assert!(circle(0.0, Position::ORIGIN, Vec3::Z).is_err());
        assert!(circle(1.0, Position::ORIGIN, Vec3::ZERO).is_err());
        assert!(helix(1.0, 1.0, -1.0, Position::ORIGIN, Vec3::Z).is_err());
        assert!(rectangle(Position::ORIGIN, Vec3::X, Vec3::X * 2.0).is_err());
        assert!(disk(-1.0, Position::ORIGIN, Vec3::Z).is_err());
        assert!(sphere_surface(0.0, Position::ORIGIN).is_err());
        assert!(ball(-2.0, Position::ORIGIN).is_err());
        assert!(cylinder_volume(1.0, 0.0, Position::ORIGIN, Vec3::Z).is_err());
        assert!(parallelepiped(Position::ORIGIN, Vec3::X, Vec3::Y, Vec3::X + Vec3::Y).is_err());
        assert!(Curve::new(|_| Position::ORIGIN, 1.0, 0.0).is_err());
    }

    #[test]
    fn validation_catches_crossed_limits() {
        let s = Surface::new(|s, t| Position::cartesian(s, t, 0.0), 0.0, 1.0, |_| 0.0, |s| 0.5 - s).unwrap();
        assert!(matches!(s.validate(8), Err(Error::InvalidLimits { .. })));
        let c = Curve::new(|t| Position::cartesian(1.0 / t, 0.0, 0.0), 0.0, 1.0).unwrap();
        assert!(c.validate(4).is_err());
        assert!(ball(1.0, Position::ORIGIN).unwrap().validate(4).is_ok());
    }

    #[test]
    fn frames_are_right_handed() {
        for axis in [Vec3::Z, -Vec3::Z, Vec3::Y, -Vec3::Y, Vec3::X, Vec3::new(1.0, 2.0, -0.5)] {
            let (e1, e2, n) = frame(axis).unwrap();
            assert!((e1.cross(e2) - n).magnitude() < 1e-15);
            assert!(e1.dot(n).abs() < 1e-15);
        }
        assert_eq!(frame(Vec3::Z).unwrap(), (Vec3::X, Vec3::Y, Vec3::Z));
    }

    #[test]
    fn helix_climbs_one_pitch_per_turn() {
        let h = helix(1.0, 0.5, 3.0, Position::ORIGIN, Vec3::Z).unwrap();
        let end = h.end_point();
        assert!((end.z() - 1.5).abs() < 1e-12);
        assert!((end.x() - 1.0).abs() < 1e-12);
    }
}
