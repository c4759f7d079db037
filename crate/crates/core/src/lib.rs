//! Lyndon words, the free Lie algebra on two letters, the Ihara bracket, the
//! dual Lie coalgebra of `L[1;x]`, small commutative dg models built from it,
//! and closed lifts in their reduced bar constructions.

pub mod colie;
pub mod barlift;
pub mod dgcore;
pub mod error;
pub mod freelie;
pub mod ihara;
pub mod linalg;
pub mod rational;
pub mod suites;
pub mod words;

pub use error::{Error, Result};
pub use rational::Q;
