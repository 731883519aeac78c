//! Numerical vector calculus and electro/magnetostatics over 3-space.
//!
//! Scalar and vector fields are first-class values (`Position -> R` and
//! `Position -> Vec3`). Curves, surfaces and volumes are parametric maps with
//! nested parameter limits; samplers discretize them into weighted points, and
//! the nine line/surface/volume integrals are sums over those samples.
//! Electric fields come from Coulomb superposition over charge distributions
//! and magnetic fields from the Biot-Savart law over line currents.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, plotting output and
//! the command-line interface live in the `emcalc` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calculus;
pub mod domains;
pub mod em;
mod error;
pub mod field;
pub mod geometry;
pub mod math;
pub mod theorems;
pub mod viz;

pub use calculus::{
    crossed_line_integral, curl, curve_sample, derivative, divergence, dotted_line_integral,
    dotted_surface_integral, gradient, scalar_line_integral, scalar_surface_integral,
    scalar_volume_integral, surface_sample, vector_line_integral, vector_surface_integral,
    vector_volume_integral, volume_sample, CurveApprox, CurveSample, SurfaceApprox,
    SurfaceSample, VolumeApprox, VolumeSample,
};
pub use domains::{Curve, Surface, Volume};
pub use em::{
    b_field, b_field_from_line_current, e_field, total_charge, ChargeDistribution,
    CurrentDistribution, PhysicalConstants,
};
pub use error::{Error, Result};
pub use field::{ScalarField, VectorField};
pub use geometry::{displacement, unit_basis, Basis, Position, Vec3};

/// Real numbers are IEEE-754 doubles throughout.
pub type R = f64;
