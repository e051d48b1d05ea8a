//! Command-line front end: check registry, suite files and reports.

pub mod error;
pub mod params;
pub mod registry;
pub mod report;
pub mod runner;
pub mod suite;

pub use error::CliError;
