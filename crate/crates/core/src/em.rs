//! Charge and current distributions and the fields they produce.
//!
//! Electric fields follow Coulomb superposition; magnetic fields follow the
//! Biot-Savart law for line currents,
//!
//! ```text
//! B(r) = -(μ0 I / 4π) ∫_C (r − r') / |r − r'|³ × dℓ'
//! ```
//!
//! Continuous sources are sampled once when the field is built; each field
//! evaluation sums over those samples. Evaluating within [`SINGULARITY_RADIUS`]
//! of a point charge or a source sample is an error, never an infinity.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::calculus::{
    curve_sample, scalar_line_integral, scalar_surface_integral, scalar_volume_integral, sums,
    surface_sample, volume_sample, CurveApprox, SurfaceApprox, VolumeApprox, DEFAULT_CURVE_N,
    DEFAULT_SURFACE_N, DEFAULT_VOLUME_N,
};
use crate::domains::{Curve, Surface, Volume};
use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::geometry::{displacement, Position, Vec3};
use crate::math::PI;

/// Probes closer than this (in meters) to a source point are singular.
pub const SINGULARITY_RADIUS: f64 = 1e-12;

/// Vacuum permittivity, F/m (CODATA 2018).
pub const EPSILON0: f64 = 8.8541878128e-12;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 4e-7 * PI;

/// SI constants used by the field laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub epsilon0: f64,
    pub mu0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants { epsilon0: EPSILON0, mu0: MU0 }
    }
}

impl PhysicalConstants {
    /// Coulomb constant `1 / (4π ε0)`.
    pub fn coulomb(&self) -> f64 {
        1.0 / (4.0 * PI * self.epsilon0)
    }
}

#[derive(Debug, Clone)]
pub enum ChargeDistribution {
    /// `charge` coulombs at a point.
    Point { charge: f64, at: Position },
    /// Linear density (C/m) along a curve, sampled with `samples` segments.
    Line { density: ScalarField, curve: Curve, samples: usize },
    /// Surface density (C/m²), sampled on an `samples × samples` grid.
    Surface { density: ScalarField, surface: Surface, samples: usize },
    /// Volume density (C/m³), sampled on an `samples³` grid.
    Volume { density: ScalarField, volume: Volume, samples: usize },
    /// Superposition; may be empty.
    Multiple(Vec<ChargeDistribution>),
}

impl ChargeDistribution {
    pub fn point(charge: f64, at: Position) -> Self {
        ChargeDistribution::Point { charge, at }
    }

    pub fn line(density: ScalarField, curve: Curve) -> Self {
        ChargeDistribution::Line { density, curve, samples: DEFAULT_CURVE_N }
    }

    pub fn surface(density: ScalarField, surface: Surface) -> Self {
        ChargeDistribution::Surface { density, surface, samples: DEFAULT_SURFACE_N }
    }

    pub fn volume(density: ScalarField, volume: Volume) -> Self {
        ChargeDistribution::Volume { density, volume, samples: DEFAULT_VOLUME_N }
    }
}

#[derive(Debug, Clone)]
pub enum CurrentDistribution {
    /// `current` amperes flowing along a curve in the direction of
    /// increasing parameter.
    Line { current: f64, curve: Curve, samples: usize },
    Multiple(Vec<CurrentDistribution>),
}

impl CurrentDistribution {
    pub fn line(current: f64, curve: Curve) -> Self {
        CurrentDistribution::Line { current, curve, samples: DEFAULT_CURVE_N }
    }
}

/// `d / |d|³` for `d = r − r'`, or a singularity error at the probe `r`.
fn inverse_square(source: Position, probe: Position) -> Result<Vec3> {
    let d = displacement(source, probe);
    let m = d.magnitude();
    if m < SINGULARITY_RADIUS {
        return Err(Error::FieldSingularity { at: probe });
    }
    Ok(d / (m * m * m))
}

/// Electric field with the default constants.
pub fn e_field(dist: &ChargeDistribution) -> VectorField {
    e_field_with(dist, &PhysicalConstants::default())
}

pub fn e_field_with(dist: &ChargeDistribution, constants: &PhysicalConstants) -> VectorField {
    let k = constants.coulomb();
    match dist {
        ChargeDistribution::Point { charge, at } => {
            let (q, at) = (*charge, *at);
            VectorField::try_new(move |r| Ok(k * q * inverse_square(at, r)?))
        }
        ChargeDistribution::Line { density, curve, samples } => {
            let src = Arc::new(curve_sample(*samples).approximate(curve));
            directed_source(k, density.clone(), src)
        }
        ChargeDistribution::Surface { density, surface, samples } => {
            let src = Arc::new(surface_sample(*samples).approximate(surface));
            directed_source(k, density.clone(), src)
        }
        ChargeDistribution::Volume { density, volume, samples } => {
            let src = Arc::new(volume_sample(*samples).approximate(volume));
            let rho = density.clone();
            VectorField::try_new(move |r| {
                let integral = sums::vector_weighted(&src, |rp| Ok(rho.eval(rp)? * inverse_square(rp, r)?))?;
                Ok(k * integral)
            })
        }
        ChargeDistribution::Multiple(parts) => {
            superpose(parts.iter().map(|d| e_field_with(d, constants)).collect())
        }
    }
}

/// Line and surface charges: `k ∫ λ(r') (r − r')/|r − r'|³ |dℓ'|`.
fn directed_source(k: f64, density: ScalarField, src: Arc<Vec<(Position, Vec3)>>) -> VectorField {
    VectorField::try_new(move |r| {
        let integral = sums::vector(&src, |rp| Ok(density.eval(rp)? * inverse_square(rp, r)?))?;
        Ok(k * integral)
    })
}

fn superpose(fields: Vec<VectorField>) -> VectorField {
    VectorField::try_new(move |r| {
        fields.iter().try_fold(Vec3::ZERO, |acc, f| Ok(acc + f.eval(r)?))
    })
}

/// Biot-Savart field of a line current (default constants, 1000 segments).
pub fn b_field_from_line_current(current: f64, curve: &Curve) -> VectorField {
    line_current_field(current, curve, DEFAULT_CURVE_N, &PhysicalConstants::default())
}

fn line_current_field(current: f64, curve: &Curve, samples: usize, c: &PhysicalConstants) -> VectorField {
    let coeff = -c.mu0 * current / (4.0 * PI);
    let src = Arc::new(curve_sample(samples).approximate(curve));
    VectorField::try_new(move |r| {
        let integral = sums::crossed(&src, |rp| inverse_square(rp, r))?;
        Ok(coeff * integral)
    })
}

/// Magnetic field with the default constants.
pub fn b_field(dist: &CurrentDistribution) -> VectorField {
    b_field_with(dist, &PhysicalConstants::default())
}

pub fn b_field_with(dist: &CurrentDistribution, constants: &PhysicalConstants) -> VectorField {
    match dist {
        CurrentDistribution::Line { current, curve, samples } => {
            line_current_field(*current, curve, *samples, constants)
        }
        CurrentDistribution::Multiple(parts) => {
            superpose(parts.iter().map(|d| b_field_with(d, constants)).collect())
        }
    }
}

/// Total charge in coulombs.
pub fn total_charge(dist: &ChargeDistribution) -> Result<f64> {
    match dist {
        ChargeDistribution::Point { charge, .. } => Ok(*charge),
        ChargeDistribution::Line { density, curve, samples } => {
            scalar_line_integral(&curve_sample(*samples), density, curve)
        }
        ChargeDistribution::Surface { density, surface, samples } => {
            scalar_surface_integral(&surface_sample(*samples), density, surface)
        }
        ChargeDistribution::Volume { density, volume, samples } => {
            scalar_volume_integral(&volume_sample(*samples), density, volume)
        }
        ChargeDistribution::Multiple(parts) => parts.iter().try_fold(0.0, |acc, d| Ok(acc + total_charge(d)?)),
    }
}
