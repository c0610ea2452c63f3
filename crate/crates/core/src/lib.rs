//! Homomorphic public-key cryptosystems over finite groups.
//!
//! * [`cyclic`]: the m-th residue system over `Z_m`, with the trapdoor
//!   inversion and the factoring reduction.
//! * [`freeprod`] and [`general`]: the system over an arbitrary finite group,
//!   built on a free product of cyclic systems.
//! * [`circuit`], [`barrington`] and [`encsim`]: compiling boolean circuits to
//!   group programs and evaluating them on encrypted data.

pub mod barrington;
pub mod circuit;
pub mod cli;
pub mod cyclic;
pub mod encsim;
pub mod error;
pub mod freeprod;
pub mod general;
pub mod group;
pub mod numtheory;

mod text;

pub use error::{Error, Result};
