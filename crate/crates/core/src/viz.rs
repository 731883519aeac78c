//! Gradient visualization: a grid of fixed-length arrows on a plane slice,
//! where field strength is encoded only by arrow darkness.
//!
//! This module samples the grid and computes directions and intensities;
//! the SVG writer lives in the `emcalc` crate.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::domains::frame;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geometry::{Position, Vec3};
use crate::math::{cbrt, log1p, sqrt};

type EmbedFn = dyn Fn(f64, f64) -> Position + Send + Sync;
type ProjectFn = dyn Fn(Vec3) -> (f64, f64) + Send + Sync;

/// A plane seen through 2-D coordinates `(u, v)`.
#[derive(Clone)]
pub struct PlaneSlice {
    embed: Arc<EmbedFn>,
    project: Arc<ProjectFn>,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
}

impl PlaneSlice {
    pub fn new(
        embed: impl Fn(f64, f64) -> Position + Send + Sync + 'static,
        project: impl Fn(Vec3) -> (f64, f64) + Send + Sync + 'static,
        u_range: (f64, f64),
        v_range: (f64, f64),
    ) -> Result<Self> {
        for (lo, hi) in [u_range, v_range] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidLimits { lo, hi });
            }
        }
        Ok(PlaneSlice { embed: Arc::new(embed), project: Arc::new(project), u_range, v_range })
    }

    /// The plane through `origin` spanned by `u_axis` and `v_axis`; vectors
    /// are projected onto the two (normalized) axes.
    pub fn through(
        origin: Position,
        u_axis: Vec3,
        v_axis: Vec3,
        u_range: (f64, f64),
        v_range: (f64, f64),
    ) -> Result<Self> {
        let eu = u_axis.normalize()?;
        let ev = v_axis.normalize()?;
        if eu.cross(ev).magnitude() < 1e-12 {
            return Err(Error::Degenerate("slice axes are parallel"));
        }
        PlaneSlice::new(
            move |u, v| origin.shifted(u * eu + v * ev),
            move |f| (f.dot(eu), f.dot(ev)),
            u_range,
            v_range,
        )
    }

    /// The plane through `origin` with normal `axis`, using the same
    /// in-plane frame as the shape library.
    pub fn normal_to(origin: Position, axis: Vec3, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Self> {
        let (e1, e2, _) = frame(axis)?;
        PlaneSlice::through(origin, e1, e2, u_range, v_range)
    }

    pub fn embed(&self, u: f64, v: f64) -> Position {
        (self.embed)(u, v)
    }

    pub fn project(&self, f: Vec3) -> (f64, f64) {
        (self.project)(f)
    }
}

impl fmt::Debug for PlaneSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneSlice").field("u_range", &self.u_range).field("v_range", &self.v_range).finish()
    }
}

/// Monotone map applied to field magnitudes before shading.
#[derive(Clone, Default)]
pub enum Scale {
    Linear,
    /// `x ↦ x^{1/3}`, the default.
    #[default]
    Cbrt,
    Log1p,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Scale {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Scale::Linear => x,
            Scale::Cbrt => cbrt(x),
            Scale::Log1p => log1p(x),
            Scale::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Linear => f.write_str("Linear"),
            Scale::Cbrt => f.write_str("Cbrt"),
            Scale::Log1p => f.write_str("Log1p"),
            Scale::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// One grid cell with a drawable arrow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrow {
    /// Column index, along `u`.
    pub col: usize,
    /// Row index, along `v`.
    pub row: usize,
    pub center: (f64, f64),
    /// Unit direction in slice coordinates.
    pub direction: (f64, f64),
    /// Field magnitude `|F|` at the cell center.
    pub magnitude: f64,
    /// 0 (white) to 1 (black).
    pub intensity: f64,
}

/// A cell left empty because the field is singular there.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub col: usize,
    pub row: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrowGrid {
    pub n: usize,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub arrows: Vec<Arrow>,
    pub warnings: Vec<Warning>,
    /// Largest `|F|` over the sampled cells.
    pub max_magnitude: f64,
}

impl ArrowGrid {
    /// Cells without an arrow (singular or zero projected field).
    pub fn omitted(&self) -> usize {
        self.n * self.n - self.arrows.len()
    }
}

/// Samples `field` at the centers of an `n × n` grid over the slice.
///
/// Arrow darkness is `scale(|F|)` mapped linearly so that zero magnitude is
/// white and the grid maximum is black. Cells whose projected field vanishes
/// are omitted; cells where the field is singular are omitted with a warning.
/// Any other evaluation error aborts.
pub fn arrow_grid(scale: &Scale, n: usize, slice: &PlaneSlice, field: &VectorField) -> Result<ArrowGrid> {
    if n < 2 {
        return Err(Error::Degenerate("arrow grid needs at least 2 cells per side"));
    }
    let (u0, u1) = slice.u_range;
    let (v0, v1) = slice.v_range;
    let (du, dv) = ((u1 - u0) / n as f64, (v1 - v0) / n as f64);

    let mut raw = Vec::with_capacity(n * n);
    let mut warnings = Vec::new();
    let mut max_magnitude: f64 = 0.0;
    for row in 0..n {
        for col in 0..n {
            let center = (u0 + (col as f64 + 0.5) * du, v0 + (row as f64 + 0.5) * dv);
            match field.eval(slice.embed(center.0, center.1)) {
                Ok(f) => {
                    let magnitude = f.magnitude();
                    max_magnitude = max_magnitude.max(magnitude);
                    let (pu, pv) = slice.project(f);
                    let len = sqrt(pu * pu + pv * pv);
                    if len > 0.0 && len.is_finite() {
                        raw.push(Arrow {
                            col,
                            row,
                            center,
                            direction: (pu / len, pv / len),
                            magnitude,
                            intensity: 0.0,
                        });
                    }
                }
                Err(error @ Error::FieldSingularity { .. }) => warnings.push(Warning { col, row, error }),
                Err(e) => return Err(e),
            }
        }
    }

    let floor = scale.apply(0.0);
    let span = scale.apply(max_magnitude) - floor;
    for a in &mut raw {
        a.intensity = if span > 0.0 { ((scale.apply(a.magnitude) - floor) / span).clamp(0.0, 1.0) } else { 1.0 };
    }
    Ok(ArrowGrid { n, u_range: slice.u_range, v_range: slice.v_range, arrows: raw, warnings, max_magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::circle;
    use crate::em::b_field_from_line_current;

    fn yz(half: f64) -> PlaneSlice {
        PlaneSlice::through(Position::ORIGIN, Vec3::Y, Vec3::Z, (-half, half), (-half, half)).unwrap()
    }

    #[test]
    fn uniform_field_gives_identical_arrows() {
        let xz = PlaneSlice::through(Position::ORIGIN, Vec3::X, Vec3::Z, (-1.0, 1.0), (-1.0, 1.0)).unwrap();
        let g = arrow_grid(&Scale::default(), 5, &xz, &VectorField::constant(Vec3::Z)).unwrap();
        assert_eq!(g.arrows.len(), 25);
        assert!(g.arrows.iter().all(|a| a.direction == (0.0, 1.0) && a.intensity == 1.0));
    }

    #[test]
    fn zero_field_gives_no_arrows() {
        let g = arrow_grid(&Scale::Linear, 4, &yz(1.0), &VectorField::zero()).unwrap();
        assert!(g.arrows.is_empty());
        assert_eq!(g.omitted(), 16);
    }

    #[test]
    fn out_of_plane_field_is_omitted() {
        let g = arrow_grid(&Scale::Linear, 3, &yz(1.0), &VectorField::constant(Vec3::X)).unwrap();
        assert!(g.arrows.is_empty());
        assert_eq!(g.max_magnitude, 1.0);
    }

    #[test]
    fn singular_cells_are_skipped_with_a_warning() {
        let f = crate::em::e_field(&crate::em::ChargeDistribution::point(1.0, Position::ORIGIN));
        let g = arrow_grid(&Scale::default(), 3, &yz(1.5), &f).unwrap();
        assert_eq!(g.arrows.len(), 8);
        assert_eq!(g.warnings.len(), 1);
        assert_eq!((g.warnings[0].col, g.warnings[0].row), (1, 1));
    }

    #[test]
    fn grid_needs_two_cells() {
        assert!(arrow_grid(&Scale::Linear, 1, &yz(1.0), &VectorField::zero()).is_err());
    }

    #[test]
    fn loop_field_is_darkest_beside_the_wire() {
        let b = b_field_from_line_current(1.0, &circle(1.0, Position::ORIGIN, Vec3::Z).unwrap());
        let g = arrow_grid(&Scale::default(), 20, &yz(2.0), &b).unwrap();
        let darkest = g.arrows.iter().max_by(|a, b| a.intensity.total_cmp(&b.intensity)).unwrap();
        let (u, v) = darkest.center;
        assert!(((u.abs() - 1.0).abs() - 0.1).abs() < 1e-9 && (v.abs() - 0.1).abs() < 1e-9);
    }

    #[test]
    fn monotone_rescaling_keeps_the_darkest_cell() {
        let b = b_field_from_line_current(1.0, &circle(1.0, Position::ORIGIN, Vec3::Z).unwrap());
        let argmax = |s: &Scale| {
            let g = arrow_grid(s, 12, &yz(2.0), &b).unwrap();
            let a = g.arrows.iter().max_by(|a, b| a.intensity.total_cmp(&b.intensity)).unwrap();
            (a.col, a.row)
        };
        let base = argmax(&Scale::Linear);
        assert_eq!(base, argmax(&Scale::Cbrt));
        assert_eq!(base, argmax(&Scale::Log1p));
        assert_eq!(base, argmax(&Scale::Custom(Arc::new(|x| x * x * 1e12))));
    }
}
