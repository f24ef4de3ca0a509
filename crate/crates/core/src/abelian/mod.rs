//! Finite abelian p-groups, their elements and homomorphisms.

mod group;
pub mod local;
mod qz;

pub use group::{homology, is_prime, GElem, Hom, PGroup, Subquotient};
pub use qz::Qz;
