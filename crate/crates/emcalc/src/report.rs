//! Fixed text formats for command output.

use emcalc_core::Vec3;

/// A double at 17 significant digits (`8.987551787368176e0`); zero of
/// either sign prints as `0`.
pub fn number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn vector(v: Vec3) -> String {
    format!("{} {} {}", number(v.x), number(v.y), number(v.z))
}

pub fn triple(t: [f64; 3]) -> String {
    format!("{} {} {}", number(t[0]), number(t[1]), number(t[2]))
}
