//! Side-disk intersection graphs of convex polygons.
//!
//! The side disk of a polygon side is the disk having that side as a
//! diameter. This crate builds width-3 tree decompositions of the side-disk
//! intersection graph directly from the medial axis, derives the graph from
//! the decomposition, solves maximum independent set over it, and provides
//! the polygon constructions (extremal families, outerplanar realizations)
//! together with brute-force oracles for every fast path.

pub mod bench;
pub mod constructions;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod medial_axis;
pub mod mis;
pub mod realizer;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, Disk, IntersectionMode, Point, Tolerance};
