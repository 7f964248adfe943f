//! Exact chain-level constructions for shifted symplectic structures on
//! quasi-free commutative differential graded algebras over ℚ.

pub mod cdga;
pub mod constructions;
pub mod derham;
pub mod dsl;
pub mod fixtures;
pub mod invariants;
pub mod kernel;
pub mod ncw;
pub mod symplectic;
