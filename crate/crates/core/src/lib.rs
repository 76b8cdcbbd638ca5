//! Exact computations with jet schemes, twisted jets, commutative vertex
//! algebras and their orbifold coinvariants.

pub mod cyclo;
pub mod error;
pub mod jetpoly;
pub mod jetscheme;
pub mod linalg;
pub mod rational;

pub use error::{Error, Result};
pub mod report;
pub mod twisted;
pub mod va;
pub mod quasiconf;
pub mod coinv;
pub mod parse;
pub mod suite;
pub mod cli;
