//! Exact computations on finite-dimensional convex effect algebras.
//!
//! Algebras are order intervals `[0, u]` in ordered vector spaces over ℚ:
//! classical simplices, arbitrary polyhedral cones, and spin factors. All
//! polyhedral work (double description, simplex, vertex enumeration) is done
//! in exact rational arithmetic, so every predicate is decided without
//! tolerances.

pub mod algebra;
pub mod cone;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod spectral;
pub mod states;

pub use algebra::{
    complement, effect_sum, is_extremal, is_one_dimensional, is_sharp, leq, make_algebra, mix,
    order_unit_norm, scale, AlgebraKind, AlgebraSpec, Effect, EffectAlgebra,
};
pub use cone::{cone_contains, dd_convert, dual_cone, Cone};
pub use error::{Error, Result};
pub use linalg::RatMatrix;
pub use lp::{lp_solve, polytope_vertices, HPolytope, LpSolution, Sense};
pub use rational::{RatVector, Rational};
