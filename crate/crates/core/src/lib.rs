//! Scalability analysis for finite frames.
//!
//! A frame {φᵢ} in ℝ^d or ℂ^d is *scalable* when nonnegative weights w make
//! Σ wᵢ φᵢφᵢ* the identity, i.e. when rescaling the vectors by √wᵢ produces a
//! Parseval frame. This crate decides scalability, computes the scaling, and
//! describes the set of all scalings:
//!
//! - When the outer products {φᵢφᵢ*} are linearly independent (the generic
//!   situation for n ≤ d², resp. n ≤ d(d+1)/2 over ℝ), the scaling is unique
//!   if it exists and one least-squares solve settles the question
//!   ([`scaling::solve_unique_scaling`]).
//! - Otherwise the scalings of a unit-norm frame form a bounded polytope whose
//!   vertices are exactly the minimal scalings;
//!   [`scaling::enumerate_minimal_scalings`] lists them and
//!   [`scaling::decompose_scaling`] writes any scaling as a convex combination
//!   of vertices.
//!
//! Frame diagnostics that interact with these questions — frame bounds, spark,
//! full spark, the complement property, outer-product spark — live in
//! [`frame`]. The supporting real-vectorization of Hermitian matrices and the
//! numerical primitives live in [`hermitian`] and [`linalg`].

pub mod error;
pub mod frame;
pub mod hermitian;
pub mod linalg;
pub mod scaling;

pub use error::{Error, Result};
pub use frame::{
    complement_property, frame_operator, is_full_spark, normalize_frame, outer_spark,
    outer_products_independent, random_frame, spark, tightness, Frame, SubsetGuard, TightnessInfo,
};
pub use hermitian::{
    outer_product, trace_inner, HermitianMatrix, RealVectorization, ScalarField, Tolerances,
};
pub use linalg::{least_squares, nonneg_least_squares, numerical_rank};
pub use scaling::{
    build_scaling_matrix, caratheodory_reduce, decompose_scaling, enumerate_minimal_scalings,
    is_minimal_scaling, is_scalable, scalability, solve_unique_scaling, verify_scaling,
    ScalingKind, ScalingMatrix, ScalingOutcome, ScalingPolytope, ScalingStatus, ScalingVector,
};
