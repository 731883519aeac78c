//! Samplers, the nine line/surface/volume integrals, and finite-difference
//! differential operators.
//!
//! A sampler turns a domain into a list of weighted positions: curves into
//! `(position, dl)` pairs, surfaces into `(position, da)` pairs and volumes
//! into `(position, dv)` pairs. Every integral is a left-to-right sum over
//! that list, so results are bit-for-bit reproducible.

use alloc::vec::Vec;

use crate::domains::{Curve, Surface, Volume};
use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::geometry::{Position, Vec3};

/// Step used by the default differential operators.
pub const DEFAULT_STEP: f64 = 1e-6;
/// Default number of curve segments.
pub const DEFAULT_CURVE_N: usize = 1000;
/// Default surface grid size (cells per side; two triangles per cell).
pub const DEFAULT_SURFACE_N: usize = 200;
/// Default volume grid size (cells per side).
pub const DEFAULT_VOLUME_N: usize = 40;

/// Turns a curve into `(position, vector length)` samples.
pub trait CurveApprox {
    fn approximate(&self, curve: &Curve) -> Vec<(Position, Vec3)>;
}

/// Turns a surface into `(position, vector area)` samples.
pub trait SurfaceApprox {
    fn approximate(&self, surface: &Surface) -> Vec<(Position, Vec3)>;
}

/// Turns a volume into `(position, volume element)` samples.
pub trait VolumeApprox {
    fn approximate(&self, volume: &Volume) -> Vec<(Position, f64)>;
}

impl<F: Fn(&Curve) -> Vec<(Position, Vec3)>> CurveApprox for F {
    fn approximate(&self, curve: &Curve) -> Vec<(Position, Vec3)> {
        self(curve)
    }
}

impl<F: Fn(&Surface) -> Vec<(Position, Vec3)>> SurfaceApprox for F {
    fn approximate(&self, surface: &Surface) -> Vec<(Position, Vec3)> {
        self(surface)
    }
}

impl<F: Fn(&Volume) -> Vec<(Position, f64)>> VolumeApprox for F {
    fn approximate(&self, volume: &Volume) -> Vec<(Position, f64)> {
        self(volume)
    }
}

#[inline]
fn fraction(k: usize, n: usize) -> f64 {
    k as f64 / n as f64
}

#[inline]
fn lerp(lo: f64, hi: f64, w: f64) -> f64 {
    if w == 1.0 {
        hi
    } else {
        lo + w * (hi - lo)
    }
}

/// `n` segments of equal parameter width. Each sample sits at the segment's
/// parameter midpoint and carries the chord from its start to its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveSample {
    n: usize,
}

/// # Panics
///
/// If `n` is zero.
pub fn curve_sample(n: usize) -> CurveSample {
    assert!(n >= 1, "curve_sample needs at least one segment");
    CurveSample { n }
}

impl CurveSample {
    pub fn resolution(&self) -> usize {
        self.n
    }
}

impl CurveApprox for CurveSample {
    fn approximate(&self, c: &Curve) -> Vec<(Position, Vec3)> {
        let (a, b) = (c.start_param(), c.end_param());
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        let mut prev = c.at(a);
        for k in 0..n {
            let next = c.at(lerp(a, b, fraction(k + 1, n)));
            let mid = c.at(a + (k as f64 + 0.5) / n as f64 * (b - a));
            out.push((mid, next.to_vec() - prev.to_vec()));
            prev = next;
        }
        out
    }
}

/// An `n × n` grid over the (normalized) parameter domain, each cell cut into
/// two triangles along the `(0,0)–(1,1)` diagonal. A sample sits at the
/// centroid of the triangle's vertex images and carries
/// `½ (v1 − v0) × (v2 − v0)`, oriented along `∂s × ∂t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceSample {
    n: usize,
}

/// # Panics
///
/// If `n` is zero.
pub fn surface_sample(n: usize) -> SurfaceSample {
    assert!(n >= 1, "surface_sample needs at least one cell");
    SurfaceSample { n }
}

impl SurfaceSample {
    pub fn resolution(&self) -> usize {
        self.n
    }
}

impl SurfaceApprox for SurfaceSample {
    fn approximate(&self, s: &Surface) -> Vec<(Position, Vec3)> {
        let n = self.n;
        let stride = n + 1;
        let mut vertices = Vec::with_capacity(stride * stride);
        for i in 0..=n {
            for j in 0..=n {
                vertices.push(s.at_unit(fraction(i, n), fraction(j, n)).to_vec());
            }
        }
        let v = |i: usize, j: usize| vertices[i * stride + j];
        let triangle = |a: Vec3, b: Vec3, c: Vec3| {
            let centroid = Position::from_vec((a + b + c) / 3.0);
            (centroid, 0.5 * (b - a).cross(c - a))
        };
        let mut out = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                let (v00, v10, v11, v01) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
                out.push(triangle(v00, v10, v11));
                out.push(triangle(v00, v11, v01));
            }
        }
        out
    }
}

/// An `n × n × n` grid over the (normalized) parameter domain. Each sample
/// sits at the image of the cell's parameter midpoint; its volume element is
/// the absolute scalar triple product of the cell's three edge vectors, each
/// measured across the cell through its midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolumeSample {
    n: usize,
}

/// # Panics
///
/// If `n` is zero.
pub fn volume_sample(n: usize) -> VolumeSample {
    assert!(n >= 1, "volume_sample needs at least one cell");
    VolumeSample { n }
}

impl VolumeSample {
    pub fn resolution(&self) -> usize {
        self.n
    }
}

/// Image-space edge vectors of the cell of width `h` centred on normalized
/// coordinates `(a, b, c)`.
pub(crate) fn cell_edges(v: &Volume, a: f64, b: f64, c: f64, h: f64) -> [Vec3; 3] {
    let g = |a: f64, b: f64, c: f64| v.at_unit(a, b, c).to_vec();
    let half = 0.5 * h;
    [
        g(a + half, b, c) - g(a - half, b, c),
        g(a, b + half, c) - g(a, b - half, c),
        g(a, b, c + half) - g(a, b, c - half),
    ]
}

impl VolumeApprox for VolumeSample {
    fn approximate(&self, v: &Volume) -> Vec<(Position, f64)> {
        let n = self.n;
        let h = 1.0 / n as f64;
        let mid = |k: usize| (k as f64 + 0.5) * h;
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (mid(i), mid(j), mid(k));
                    let [ea, eb, ec] = cell_edges(v, a, b, c, h);
                    out.push((v.at_unit(a, b, c), ea.dot(eb.cross(ec)).abs()));
                }
            }
        }
        out
    }
}

/// Sums over pre-computed samples. The public integrals are these applied to
/// a sampler's output; field constructors in [`crate::em`] reuse them with
/// cached source samples.
pub mod sums {
    use super::*;

    /// `Σ f(p) |d|`
    pub fn scalar(
        samples: &[(Position, Vec3)],
        f: impl Fn(Position) -> Result<f64>,
    ) -> Result<f64> {
        samples.iter().try_fold(0.0, |acc, &(p, d)| {
            Ok(acc + f(p).map_err(|e| e.at_position(p))? * d.magnitude())
        })
    }

    /// `Σ F(p) |d|`
    pub fn vector(
        samples: &[(Position, Vec3)],
        f: impl Fn(Position) -> Result<Vec3>,
    ) -> Result<Vec3> {
        samples.iter().try_fold(Vec3::ZERO, |acc, &(p, d)| {
            Ok(acc + f(p).map_err(|e| e.at_position(p))? * d.magnitude())
        })
    }

    /// `Σ F(p) · d`
    pub fn dotted(
        samples: &[(Position, Vec3)],
        f: impl Fn(Position) -> Result<Vec3>,
    ) -> Result<f64> {
        samples.iter().try_fold(0.0, |acc, &(p, d)| {
            Ok(acc + f(p).map_err(|e| e.at_position(p))?.dot(d))
        })
    }

    /// `Σ F(p) × d`
    pub fn crossed(
        samples: &[(Position, Vec3)],
        f: impl Fn(Position) -> Result<Vec3>,
    ) -> Result<Vec3> {
        samples.iter().try_fold(Vec3::ZERO, |acc, &(p, d)| {
            Ok(acc + f(p).map_err(|e| e.at_position(p))?.cross(d))
        })
    }

    /// `Σ f(p) w`
    pub fn scalar_weighted(
        samples: &[(Position, f64)],
        f: impl Fn(Position) -> Result<f64>,
    ) -> Result<f64> {
        samples
            .iter()
            .try_fold(0.0, |acc, &(p, w)| Ok(acc + f(p).map_err(|e| e.at_position(p))? * w))
    }

    /// `Σ F(p) w`
    pub fn vector_weighted(
        samples: &[(Position, f64)],
        f: impl Fn(Position) -> Result<Vec3>,
    ) -> Result<Vec3> {
        samples
            .iter()
            .try_fold(Vec3::ZERO, |acc, &(p, w)| Ok(acc + f(p).map_err(|e| e.at_position(p))? * w))
    }
}

/// `∫_C f dℓ`
pub fn scalar_line_integral(approx: &impl CurveApprox, f: &ScalarField, c: &Curve) -> Result<f64> {
    sums::scalar(&approx.approximate(c), |p| f.eval(p))
}

/// `∫_C F dℓ`
pub fn vector_line_integral(approx: &impl CurveApprox, f: &VectorField, c: &Curve) -> Result<Vec3> {
    sums::vector(&approx.approximate(c), |p| f.eval(p))
}

/// `∫_C F · dℓ`
pub fn dotted_line_integral(approx: &impl CurveApprox, f: &VectorField, c: &Curve) -> Result<f64> {
    sums::dotted(&approx.approximate(c), |p| f.eval(p))
}

/// `∫_C F × dℓ`
pub fn crossed_line_integral(approx: &impl CurveApprox, f: &VectorField, c: &Curve) -> Result<Vec3> {
    sums::crossed(&approx.approximate(c), |p| f.eval(p))
}

/// `∫_S f da`
pub fn scalar_surface_integral(
    approx: &impl SurfaceApprox,
    f: &ScalarField,
    s: &Surface,
) -> Result<f64> {
    sums::scalar(&approx.approximate(s), |p| f.eval(p))
}

/// `∫_S F da`
pub fn vector_surface_integral(
    approx: &impl SurfaceApprox,
    f: &VectorField,
    s: &Surface,
) -> Result<Vec3> {
    sums::vector(&approx.approximate(s), |p| f.eval(p))
}

/// `∫_S F · da`, the flux of `F` through `S`.
pub fn dotted_surface_integral(
    approx: &impl SurfaceApprox,
    f: &VectorField,
    s: &Surface,
) -> Result<f64> {
    sums::dotted(&approx.approximate(s), |p| f.eval(p))
}

/// `∫_V f dv`
pub fn scalar_volume_integral(
    approx: &impl VolumeApprox,
    f: &ScalarField,
    v: &Volume,
) -> Result<f64> {
    sums::scalar_weighted(&approx.approximate(v), |p| f.eval(p))
}

/// `∫_V F dv`
pub fn vector_volume_integral(
    approx: &impl VolumeApprox,
    f: &VectorField,
    v: &Volume,
) -> Result<Vec3> {
    sums::vector_weighted(&approx.approximate(v), |p| f.eval(p))
}

/// Central difference `(f(t + dt/2) − f(t − dt/2)) / dt`.
pub fn derivative(dt: f64, f: impl Fn(f64) -> f64, t: f64) -> f64 {
    (f(t + dt / 2.0) - f(t - dt / 2.0)) / dt
}

fn check_step(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep(d))
    }
}

const AXES: [Vec3; 3] = [Vec3::X, Vec3::Y, Vec3::Z];

/// Central-difference partials `[∂x F, ∂y F, ∂z F]`.
fn jacobian_columns(d: f64, f: &VectorField, p: Position) -> Result<[Vec3; 3]> {
    let mut cols = [Vec3::ZERO; 3];
    for (col, axis) in cols.iter_mut().zip(AXES) {
        let h = axis * (d / 2.0);
        *col = (f.eval(p.shifted(h))? - f.eval(p.shifted(-h))?) / d;
    }
    Ok(cols)
}

/// `∇f` by central differences of width `d` along the Cartesian axes.
/// Evaluations fail with [`Error::InvalidStep`] unless `d > 0`.
pub fn gradient(d: f64, f: &ScalarField) -> VectorField {
    let f = f.clone();
    VectorField::try_new(move |p| {
        check_step(d)?;
        let mut g = [0.0; 3];
        for (gi, axis) in g.iter_mut().zip(AXES) {
            let h = axis * (d / 2.0);
            *gi = (f.eval(p.shifted(h))? - f.eval(p.shifted(-h))?) / d;
        }
        Ok(Vec3::new(g[0], g[1], g[2]))
    })
}

/// `∇ · F` by central differences.
pub fn divergence(d: f64, f: &VectorField) -> ScalarField {
    let f = f.clone();
    ScalarField::try_new(move |p| {
        check_step(d)?;
        let [dx, dy, dz] = jacobian_columns(d, &f, p)?;
        Ok(dx.x + dy.y + dz.z)
    })
}

/// `∇ × F` by central differences.
pub fn curl(d: f64, f: &VectorField) -> VectorField {
    let f = f.clone();
    VectorField::try_new(move |p| {
        check_step(d)?;
        let [dx, dy, dz] = jacobian_columns(d, &f, p)?;
        Ok(Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x))
    })
}
