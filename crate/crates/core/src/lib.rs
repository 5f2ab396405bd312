//! Numerical laboratory for directional maximal averages in the plane.
//!
//! Functions on the unit square are sampled on a square raster and
//! zero-extended. The crate builds the directional and eccentricity maximal
//! operators, their linearizations through a per-pixel rectangle selector,
//! the explicit `TT*` kernels, and lower-bound operator-norm estimates, and
//! it ships a catalog of checks that measure the constants in each pointwise
//! domination used to bound those norms.

pub mod error;
pub mod experiments;
pub mod families;
pub mod geometry;
pub mod grid;
pub mod kernels;
pub mod normest;
pub mod operators;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{rect_intersection_area, DirectionSet, Point, Rect};
pub use grid::{rect_average_exact, GridField, SummedAreaTable};
pub use normest::NormEstimate;
pub use operators::{RectFamily, ScaleGrid, Selector};
