//! Exact computations with linking forms, C_p-modules, finite-group
//! cohomology and algebraic models of degree-p coverings.

pub mod abelian;
pub mod cohom;
pub mod error;
pub mod covering;
pub mod cpmod;
pub mod linkform;
pub mod ring;

pub use error::{Error, Result};
