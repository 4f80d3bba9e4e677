//! Entanglement analysis of quantum states built from binary linear codes
//! and bipolar sequences.

pub mod anf;
pub mod apf;
pub mod cyclotomic;
pub mod entanglement;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod random;
pub mod real;
pub mod state;
pub mod transforms;

pub use error::{Error, Result};
