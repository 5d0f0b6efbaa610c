//! Exact computations for cooperative games on interaction graphs: covering
//! and packing optima, width parameters, VC-dimension and the allocation
//! algorithms that relate them.

pub mod config;
pub mod discrete;
pub mod error;
pub mod games;
pub mod graph;
pub mod lp;
pub mod rational;
pub mod report;
pub mod stability;
pub mod vc;
pub mod width;

pub use config::Limits;
pub use error::{Error, Result};
