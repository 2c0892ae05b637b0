//! Spectral spread workbench for `K_{s,t}`-minor-free graphs.

pub mod canon;
pub mod eigen;
pub mod enumerate;
pub mod error;
pub mod expansion;
pub mod extremal;
pub mod fixed;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod minor;
pub mod psi;
pub mod rational;
pub mod spectra;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, Family, Graph};
