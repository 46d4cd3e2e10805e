//! Diameter binary programs.
//!
//! Given a feasible binary program, the diameter program searches over pairs
//! of its optimal solutions and returns two that are as far apart (in Hamming
//! distance) as possible. This crate builds and exactly solves that program,
//! and verifies the dimension and facet structure of its polytope by exact
//! enumeration and rational rank computations. Front ends for the linear
//! ordering problem and the symmetric traveling salesman problem are included.

pub mod bpcore;
pub mod diameter;
pub mod error;
mod instance;
pub mod lop;
pub mod polytope;
pub mod rational;
pub mod ratlinalg;
pub mod tsp;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
