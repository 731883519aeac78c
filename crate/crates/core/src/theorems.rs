//! Numerical checks of the gradient theorem, Stokes' theorem and the
//! divergence theorem. Each check evaluates both sides independently and
//! reports the residual.

use crate::calculus::{
    curl, divergence, dotted_line_integral, dotted_surface_integral, gradient,
    scalar_volume_integral, CurveApprox, SurfaceApprox, VolumeApprox,
};
use crate::domains::{Curve, Surface, Volume};
use crate::error::Result;
use crate::field::{ScalarField, VectorField};
use crate::geometry::Vec3;

/// Floor for the relative-residual denominator.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Quantities a report can compare.
pub trait Quantity: Copy + core::fmt::Debug + PartialEq {
    fn distance(self, other: Self) -> f64;
    fn norm(self) -> f64;
}

impl Quantity for f64 {
    fn distance(self, other: f64) -> f64 {
        (self - other).abs()
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl Quantity for Vec3 {
    fn distance(self, other: Vec3) -> f64 {
        (self - other).magnitude()
    }
    fn norm(self) -> f64 {
        self.magnitude()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremReport<T = f64> {
    pub lhs: T,
    pub rhs: T,
    pub absolute_residual: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1e-300)`; two zeros report 0.
    pub relative_residual: f64,
}

impl<T: Quantity> TheoremReport<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        let absolute_residual = lhs.distance(rhs);
        let denom = lhs.norm().max(rhs.norm()).max(RESIDUAL_FLOOR);
        TheoremReport { lhs, rhs, absolute_residual, relative_residual: absolute_residual / denom }
    }

    pub fn holds_within(&self, threshold: f64) -> bool {
        self.relative_residual < threshold
    }
}

/// `∫_C ∇f · dℓ = f(end) − f(start)`.
pub fn check_gradient_theorem(
    f: &ScalarField,
    c: &Curve,
    d: f64,
    sampler: &impl CurveApprox,
) -> Result<TheoremReport> {
    let lhs = dotted_line_integral(sampler, &gradient(d, f), c)?;
    let rhs = f.eval(c.end_point())? - f.eval(c.start_point())?;
    Ok(TheoremReport::new(lhs, rhs))
}

/// `∫_S (∇ × F) · da = ∮_{∂S} F · dℓ`.
pub fn check_stokes(
    f: &VectorField,
    s: &Surface,
    d: f64,
    surface_sampler: &impl SurfaceApprox,
    curve_sampler: &impl CurveApprox,
) -> Result<TheoremReport> {
    let lhs = dotted_surface_integral(surface_sampler, &curl(d, f), s)?;
    let rhs = dotted_line_integral(curve_sampler, f, &s.boundary())?;
    Ok(TheoremReport::new(lhs, rhs))
}

/// `∫_V ∇ · F dv = ∮_{∂V} F · da`.
pub fn check_divergence_theorem(
    f: &VectorField,
    v: &Volume,
    d: f64,
    volume_sampler: &impl VolumeApprox,
    surface_sampler: &impl SurfaceApprox,
) -> Result<TheoremReport> {
    let lhs = scalar_volume_integral(volume_sampler, &divergence(d, f), v)?;
    let rhs = v
        .boundary()
        .iter()
        .try_fold(0.0, |acc, face| Ok(acc + dotted_surface_integral(surface_sampler, f, face)?))?;
    Ok(TheoremReport::new(lhs, rhs))
}
