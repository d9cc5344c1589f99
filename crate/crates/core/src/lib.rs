//! Exact computations in the graded Lie algebra of derivations of free
//! associative algebras and free Lie algebras.
//!
//! The crate covers
//!
//! * exact sparse linear algebra over the rationals ([`linalg`]),
//! * words, non-commutative polynomials and cyclic words ([`tensor`], [`cyclic`]),
//! * derivations, their bracket and their action on cyclic words ([`derivation`]),
//! * the non-commutative divergence and a generic coboundary checker ([`divergence`]),
//! * a solver for degree-zero 1-cocycles ([`solver`]),
//! * symplectic derivations of free Lie algebras and the Enomoto–Satoh trace
//!   ([`symplectic`]).
//!
//! Everything is exact: scalars are arbitrary precision rationals and every
//! check is an equality test.

pub mod cyclic;
pub mod derivation;
pub mod divergence;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod lincomb;
pub mod random;
pub mod solver;
pub mod symplectic;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::Rational;
