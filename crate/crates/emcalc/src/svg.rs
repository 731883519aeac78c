//! SVG output for arrow grids.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use emcalc_core::viz::{arrow_grid, ArrowGrid, PlaneSlice, Scale};
use emcalc_core::VectorField;

/// Pixels per grid cell.
pub const CELL_PX: f64 = 32.0;

/// Arrow length as a fraction of the cell side.
pub const DEFAULT_ARROW_LENGTH: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub scale: Scale,
    pub grid_n: usize,
    pub output_path: PathBuf,
    /// Fraction of the cell side.
    pub arrow_length: f64,
}

impl RenderSpec {
    pub fn new(grid_n: usize, output_path: impl Into<PathBuf>) -> Self {
        RenderSpec {
            scale: Scale::default(),
            grid_n,
            output_path: output_path.into(),
            arrow_length: DEFAULT_ARROW_LENGTH,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error(transparent)]
    Field(#[from] emcalc_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Gray level for an intensity in `[0, 1]`: 255 is white, 0 is black.
pub fn gray_level(intensity: f64) -> u8 {
    (255.0 * (1.0 - intensity)).round().clamp(0.0, 255.0) as u8
}

/// Samples the grid and writes it to `spec.output_path`. Returns the grid,
/// including warnings for cells left empty at singularities.
pub fn render_vector_field(spec: &RenderSpec, slice: &PlaneSlice, field: &VectorField) -> Result<ArrowGrid, RenderError> {
    let grid = arrow_grid(&spec.scale, spec.grid_n, slice, field)?;
    write_svg(&spec.output_path, &grid, spec.arrow_length)?;
    Ok(grid)
}

pub fn write_svg(path: &Path, grid: &ArrowGrid, arrow_length: f64) -> Result<(), RenderError> {
    std::fs::write(path, to_svg(grid, arrow_length))
        .map_err(|source| RenderError::Io { path: path.to_path_buf(), source })
}

/// The SVG document for a grid. Row 0 (smallest `v`) is drawn at the bottom.
pub fn to_svg(grid: &ArrowGrid, arrow_length: f64) -> String {
    let side = grid.n as f64 * CELL_PX;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(
        s,
        "<desc>arrow grid {n}x{n}, u in [{:e}, {:e}], v in [{:e}, {:e}], max |F| = {:e}</desc>",
        grid.u_range.0,
        grid.u_range.1,
        grid.v_range.0,
        grid.v_range.1,
        grid.max_magnitude,
        n = grid.n
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{side}" height="{side}" fill="white"/>"#);

    let len = arrow_length * CELL_PX;
    let head = 0.3 * len;
    let half_width = 0.15 * len;
    for a in &grid.arrows {
        let cx = (a.col as f64 + 0.5) * CELL_PX;
        let cy = side - (a.row as f64 + 0.5) * CELL_PX;
        // Screen y grows downward.
        let (dx, dy) = (a.direction.0, -a.direction.1);
        let (tx, ty) = (cx - 0.5 * len * dx, cy - 0.5 * len * dy);
        let (hx, hy) = (cx + 0.5 * len * dx, cy + 0.5 * len * dy);
        let (bx, by) = (hx - head * dx, hy - head * dy);
        let (ox, oy) = (-dy * half_width, dx * half_width);
        let k = gray_level(a.intensity);
        let _ = writeln!(
            s,
            r#"<g class="arrow" data-col="{}" data-row="{}" stroke="rgb({k},{k},{k})" fill="rgb({k},{k},{k})"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="2"/><path d="M {} {} L {} {} L {} {} Z" stroke-width="1"/></g>"#,
            a.col,
            a.row,
            px(tx),
            px(ty),
            px(bx),
            px(by),
            px(hx),
            px(hy),
            px(bx + ox),
            px(by + oy),
            px(bx - ox),
            px(by - oy),
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Pixel coordinate with three decimals; never prints `-0.000`.
fn px(v: f64) -> String {
    let t = format!("{v:.3}");
    if t == "-0.000" {
        "0.000".to_string()
    } else {
        t
    }
}
