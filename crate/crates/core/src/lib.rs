//! Wigner fields and displacement overlaps of coherent-state superpositions
//! for the Heisenberg–Weyl and SU(2) groups.

pub mod analysis;
pub mod error;
pub mod field;
pub mod hw;
pub mod oracle;
pub mod specfn;
pub mod state;
pub mod su2;

pub use error::{Error, Result};
pub use num_complex::Complex64;
