//! Exact-arithmetic workbench for algebras with polynomial identities.

pub mod algebra;
pub mod error;
pub mod budget;
pub mod freealg;
pub mod generic;
pub mod identities;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod repsym;
pub mod series;
pub mod upoly;
pub mod vpart;

pub use error::{Error, Result};
pub use rational::Q;
