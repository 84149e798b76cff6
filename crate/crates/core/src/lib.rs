//! Exact-arithmetic machinery for relating geometric triangulations by
//! verified sequences of stellar and bistellar moves.
//!
//! The crate is organized around [`GeometricComplex`]: an abstract simplicial
//! complex together with exact rational vertex coordinates in a model chart
//! (Euclidean, Klein ball, or gnomonic plane). On top of that sit:
//!
//! - [`moves`]: stellar subdivisions/welds, bistellar moves, derived and
//!   interpolating subdivisions, and replayable flip sequences,
//! - [`regularity`]: height functions, the strict-convexity regularity test,
//!   and an exact linear-feasibility search for certifying heights,
//! - [`sweep`]: the cone-and-sweep engine that extracts a bistellar flip
//!   sequence connecting two triangulations of a star-convex flat polyhedron,
//! - [`charts`] and [`overlay`]: model-space charts, exact simplex
//!   intersection, and common refinement of two triangulations,
//! - [`periodic`]: flat-torus complexes (lattice-periodic Euclidean data),
//! - [`pipeline`]: the end-to-end connector for two triangulations of the
//!   same support, plus the CLI-facing orchestration types.
//!
//! Every predicate in the crate is decided by exact rational sign
//! computations; there are no floating-point code paths.


pub mod charts;
pub mod complex;

pub mod linalg;
pub mod lp;
pub mod moves;



pub mod overlay;
pub mod rat;
pub mod regularity;

pub mod subdivide;


pub use complex::{
    complexes_equal, AbstractSimplex, Complex, GeometricComplex, Model, Point, Subcomplex,
    ValidationReport, VertexId, Violation,
};
pub use rat::Rat;
