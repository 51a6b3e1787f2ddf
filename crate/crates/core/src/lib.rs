//! Construction, tracing, and verification of the carpenter's-square
//! trisectrix.
//!
//! The crate is layered bottom-up:
//!
//! - [`geom`]: plane primitives, intersections, and a real-cubic solver.
//! - [`curve`]: the implicit curve, its drawn branch, and ray intersection.
//! - [`linkage`]: kinematics of the drawing compass and the carpenter's-square
//!   placement as a scalar root-find.
//! - [`construct`]: the two trisection pipelines plus their certificates.
//! - [`cli`]: CSV, SVG, and JSON emission behind the `trisectrix` binary.

// Negated float comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod construct;
pub mod curve;
pub mod geom;
pub mod linkage;
