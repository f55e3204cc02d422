//! Affine types of quadrangles, their 3-self-affine families, dissection
//! systems and verified self-affine dissections.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod cli;
pub mod constructions;
pub mod dissection;
pub mod families;
pub mod geometry;
pub mod params;
pub mod poly;
pub mod render;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{AffineMap2, Point2, QuadKind, Quadrangle, DEFAULT_TOL};
