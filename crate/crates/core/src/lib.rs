//! Polygonal iterated function systems whose attractors are dendrites:
//! validation, arcs between points, and Hölder certificates for the
//! bounded turning property.

pub mod arcs;
pub mod attractor;
pub mod fixtures;
pub mod geometry;
pub mod holder;
pub mod io;
pub mod polysys;
pub mod report;

pub use report::VERSION;
