//! Exact canonical desingularization of conical complexes.
//!
//! The crate is organised bottom-up: [`exactlin`] supplies big-integer linear
//! algebra, [`cone`] the per-cone lattice geometry, [`complex`] the glued
//! complexes and star subdivisions, [`marking`] the vertex orders that make
//! center choice canonical, and [`resolve`] / [`relative`] the two resolution
//! drivers. [`valuation`] interprets each center as a blow-up via
//! piecewise-linear functions and monomial ideals.

pub mod complex;
pub mod cone;
pub mod exactlin;
pub mod fixtures;
pub mod io;
pub mod marking;
pub mod par;
pub mod relative;
pub mod resolve;
pub mod valuation;

pub use complex::{CellId, ComplexError, ComplexMap, ConicalComplex, MapKind, StarCenter};
pub use cone::{Cone, ConeError};
pub use exactlin::{IntMatrix, IntVector, RatVector};
pub use marking::Marking;
pub use par::Exec;
pub use relative::RelativeComplex;
pub use resolve::{ResolveError, ResolveOptions, SubdivisionTrace};
