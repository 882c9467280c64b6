//! Exact enumeration and counting for triangular fractal approximating graphs.
//!
//! The checked pattern `F_n` colours the upward unit triangles of an
//! order-`n` triangular grid dark; `F_n(k)` replaces every dark tile by a
//! contracted copy of `F_n`, `k - 1` times. Two graphs hang off the dark
//! tiles of `F_n(k)`:
//!
//! * the Overall Graph `O_n(k)` on their corners and sides, and
//! * the Inscribed Graph `I_n^k` on their centroids, joining tiles that touch.
//!
//! This crate builds both graphs, enumerates covering paths and cycles on them
//! by pruned backtracking, classifies well-formed paths by how many of their
//! edges can bend into v-shapes, and evaluates the closed and recursive
//! counting formulas with exact integer arithmetic.

pub mod classify;
pub mod direction;
pub mod enumerate;
pub mod export;
pub mod formulas;
pub mod graph;
pub mod lattice;
pub mod paths;
pub mod pattern;
pub mod reference;
pub mod scalar;
pub mod sizes;
pub mod transform;
pub mod verify;

/// Formula output in arbitrary precision.
pub type BigCount = formulas::CountValue<num_bigint::BigUint>;
/// Formula output in a machine word; overflow is reported, never wrapped.
pub type WordCount = formulas::CountValue<u128>;
/// Exact planar position.
pub type ExactPoint = lattice::Point<num_rational::Rational64>;
/// Planar position for drawing.
pub type FloatPoint = lattice::Point<f64>;
