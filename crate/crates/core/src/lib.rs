//! Exact verification of polarized Hodge structures, nilpotent orbits and
//! sl2-Hodge data over the Gaussian rationals.

pub mod error;
pub mod exact;
pub mod filtration;
pub mod harness;
pub mod hodge;
pub mod nilpotent;
pub mod report;
pub mod signcalc;
pub mod sl2hodge;

pub use error::{HodgeError, Result};
pub use exact::{Matrix, Scalar, Subquotient, Subspace};
pub use filtration::{DecreasingFiltration, IncreasingFiltration};
pub use report::{CheckReport, Finding, Witness};
