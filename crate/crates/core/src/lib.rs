//! Exact independent-set sequences of graphs, the entropy and partition-function
//! bounds around them, hypercube structure and estimates, partial-unimodality
//! checks, and percolation experiments.

pub mod bounds;
pub mod count;
pub mod cube;
pub mod error;
pub mod estimates;
pub mod graph;
pub mod numeric;
pub mod percolation;
pub mod report;
pub mod seq;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
