//! Reproducibility analysis of BioCompute Object (IEEE 2791-2020)
//! documents through the PRIMAD model.

pub mod aspects;
pub mod bco;
pub mod diagnostics;
pub mod mapping;
pub mod path;
pub mod primad;
pub mod reconfigure;
pub mod report;
pub mod severity;

pub use severity::Severity;
