//! Exact deep-hole lattices of planar lattices.
//!
//! Planar lattices are described up to similarity by a point `tau = a + b i`
//! of the strip `0 <= a <= 1/2`, `|tau| >= 1`. The deep-hole lattice
//! `H(L) = span(x1, z)` of a reduced lattice, with `z` its fundamental deep
//! hole, maps `tau` to `1/2 + (a^2 + b^2 - a)/(2b) i`; iterating reaches a
//! well-rounded class in logarithmically many steps. Everything is computed in
//! exact quadratic-field arithmetic ([`exact::ExactReal`]).
//!
//! * [`lattice`]: reduction, classification, covering radius, deep holes.
//! * [`sequence`]: the deep-hole sequence and its termination bound.
//! * [`isogeny`]: orders, isogeny degrees and a numeric j-invariant.
//! * [`counting`]: classes with a prescribed deep hole and their asymptotic count.

pub mod corpus;
pub mod counting;
pub mod error;
pub mod exact;
pub mod isogeny;
pub mod lattice;
pub mod sequence;

pub use error::{Error, Result};
pub use exact::{ExactReal, Integer, Rational};
pub use lattice::{ClassLabel, Lattice2, Tau, Vec2};
