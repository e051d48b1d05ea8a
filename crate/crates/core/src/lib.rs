//! Verification routines for torsion computations on line bundles over
//! moduli of abelian varieties.

pub mod bounds;
pub mod error;
pub mod intmat;
pub mod picard;
pub mod poly;
pub mod report;
pub mod residue;
pub mod special_maps;
pub mod symplectic;
pub mod zmod_linalg;

pub use error::{Error, Result};
pub use report::{Outcome, Status};

/// Version stamped into every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
