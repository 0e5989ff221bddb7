//! Exact computations with mixed Hodge and mixed twistor structures.

pub mod exact;
pub mod filtration;
pub mod hodge;
pub mod homotopy;
pub mod io;
pub mod rees;
pub mod spectral;
pub mod splitting;
