//! Exact rational convex geometry: polytopes, half-space slicing,
//! lattice-point enumeration, volumes and piecewise polynomials.

pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod piecewise;
pub mod polytope;

pub use lattice::LatticeRegion;
pub use piecewise::{sliced_volume_function, Extension, PiecewisePolynomial, Polynomial};
pub use polytope::{AffineFunctional, Inequality, PolytopeSpec, RationalPolytope};
