//! Scalar and vector fields as shareable functions over space.
//!
//! Evaluation is fallible so that singular sources and expression errors can
//! surface instead of producing infinities.

use alloc::sync::Arc;
use core::fmt;

use crate::error::Result;
use crate::geometry::{Position, Vec3};

type ScalarFn = dyn Fn(Position) -> Result<f64> + Send + Sync;
type VectorFn = dyn Fn(Position) -> Result<Vec3> + Send + Sync;

/// A function `Position -> R`.
#[derive(Clone)]
pub struct ScalarField(Arc<ScalarFn>);

/// A function `Position -> Vec3`.
#[derive(Clone)]
pub struct VectorField(Arc<VectorFn>);

impl ScalarField {
    pub fn new(f: impl Fn(Position) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField(Arc::new(move |p| Ok(f(p))))
    }

    pub fn try_new(f: impl Fn(Position) -> Result<f64> + Send + Sync + 'static) -> Self {
        ScalarField(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(move |_| c)
    }

    pub fn eval(&self, p: Position) -> Result<f64> {
        (self.0)(p)
    }
}

impl VectorField {
    pub fn new(f: impl Fn(Position) -> Vec3 + Send + Sync + 'static) -> Self {
        VectorField(Arc::new(move |p| Ok(f(p))))
    }

    pub fn try_new(f: impl Fn(Position) -> Result<Vec3> + Send + Sync + 'static) -> Self {
        VectorField(Arc::new(f))
    }

    pub fn constant(v: Vec3) -> Self {
        VectorField::new(move |_| v)
    }

    pub fn zero() -> Self {
        VectorField::constant(Vec3::ZERO)
    }

    /// The field `p ↦ p − origin`.
    pub fn position() -> Self {
        VectorField::new(Position::to_vec)
    }

    pub fn eval(&self, p: Position) -> Result<Vec3> {
        (self.0)(p)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &VectorField) -> VectorField {
        let (a, b) = (self.clone(), other.clone());
        VectorField::try_new(move |p| Ok(a.eval(p)? + b.eval(p)?))
    }

    /// Pointwise scaling by a constant.
    pub fn scale(&self, c: f64) -> VectorField {
        let a = self.clone();
        VectorField::try_new(move |p| Ok(c * a.eval(p)?))
    }

    /// Pointwise dot product with another field.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::try_new(move |p| Ok(a.eval(p)?.dot(b.eval(p)?)))
    }

    pub fn magnitude(&self) -> ScalarField {
        let a = self.clone();
        ScalarField::try_new(move |p| Ok(a.eval(p)?.magnitude()))
    }
}

impl ScalarField {
    /// `f(p) · F(p)`.
    pub fn times(&self, v: &VectorField) -> VectorField {
        let (f, v) = (self.clone(), v.clone());
        VectorField::try_new(move |p| Ok(f.eval(p)? * v.eval(p)?))
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField")
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorField")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{unit_basis, Basis};

    #[test]
    fn combinators_are_pointwise() {
        let p = Position::cartesian(1.0, 2.0, 3.0);
        let f = VectorField::position().add(&VectorField::constant(Vec3::X)).scale(2.0);
        assert_eq!(f.eval(p).unwrap(), Vec3::new(4.0, 4.0, 6.0));
        let d = VectorField::position().dot(&unit_basis(Basis::ZHat));
        assert_eq!(d.eval(p).unwrap(), 3.0);
        let m = VectorField::constant(Vec3::new(3.0, 4.0, 0.0)).magnitude();
        assert_eq!(m.eval(p).unwrap(), 5.0);
        let g = ScalarField::new(|p| p.x()).times(&VectorField::constant(Vec3::Y));
        assert_eq!(g.eval(p).unwrap(), Vec3::Y);
    }

    #[test]
    fn errors_propagate_through_combinators() {
        let r = unit_basis(Basis::RHat).add(&VectorField::zero());
        assert!(r.eval(Position::ORIGIN).is_err());
    }
}
