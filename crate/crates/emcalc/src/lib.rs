//! Scene files, SVG rendering and the command-line front end for
//! [`emcalc_core`].

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod expr;
pub mod model;
pub mod report;
pub mod scene;
pub mod svg;

pub use model::Model;
pub use scene::{parse_scene, serialize_scene, Scene, SceneError, SceneErrors};
