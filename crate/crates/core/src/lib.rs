//! Multigraded apolarity for the toric surfaces `P1xP1` and `F1`.
//!
//! Catalecticants and orthogonal ideals are computed over exact rationals;
//! decompositions and the case pipelines run in complex floating point with
//! seeded, reproducible randomness.

pub mod apolarity;
pub mod case22;
pub mod case33;
pub mod casef1;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod io;
pub mod linalg;
pub mod multigraded;
pub mod poly;
pub mod report;
pub mod rng;
pub mod secant;
pub mod sylvester;

pub use error::{Error, Result};
