//! Numerical checks of (p,q)-Brunn-Minkowski type inequalities for
//! log-concave measures on symmetric convex bodies in R^n, 2 <= n <= 6.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and threads live in the companion `pqbm` crate.
#![no_std]
// std float methods shadow the libm-backed trait whenever std is linked
#![allow(unused_imports)]

extern crate alloc;

mod error;

pub mod bodies;
pub mod conditions;
pub mod boundary;
pub mod measures;
pub mod polytope;
pub mod geom;
pub mod global;
pub mod quad;

pub use error::{Error, Result};
