//! Canonical lattices of rational fans.
//!
//! `fanlat` computes, in exact integer arithmetic, the ray lattice and the
//! relation lattice of a rational fan, the lattices of relations supported
//! on stars of cones, and the codimension filtration they generate. It also
//! decomposes global relations into star-local pieces, performs stellar
//! subdivisions and compares filtration depths across refinements.

pub mod corpus;
pub mod fan;
pub mod filtration;
pub mod intlin;
pub mod io;
pub mod lattices;
pub mod refine;

pub use fan::{build_fan, primitive, ConeRef, Fan, FanError, FanOptions, QuotientFan, Star, Validation};
pub use intlin::{IntMatrix, IntVector, LatticeIndex, Sublattice};
pub use filtration::{Decomposition, Depth, FiltrationError, FiltrationProfile};
pub use io::FanFile;
pub use lattices::{RelLattice, SupportPolicy};
pub use refine::{stellar_subdivide, ConjectureScan, RefineError, Verdict};
