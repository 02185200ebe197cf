//! Enumeration and verification toolkit for two-row set-valued standard
//! Young tableaux and the objects in bijection with them: 321-avoiding
//! permutations, bicolored Motzkin and ballotlike paths, and set-valued
//! linear extensions of finite posets.
//!
//! Everything is exact. Counts are big integers, q-analogs are integer
//! polynomials, and generating functions are truncated series over integer
//! polynomial rings. Each closed form has a brute-force counterpart in
//! [`enumerate`] that it is tested against.

pub mod biject;
pub mod closedform;
pub mod domain;
pub mod enumerate;
pub mod poly;
pub mod posets;
pub mod series;
pub mod stats;

pub use domain::{
    path_family, validate_svsyt, ColoredPath, LinearExtension, OrderMasks, Partition, PathTag,
    Permutation, SetValuedFilling, SetValuedTableau, SkewShape, Step,
};
pub use poly::{Marker, MultiPoly, QPoly, Rational};
pub use series::TSeries;
