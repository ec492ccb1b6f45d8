//! Command-line pipeline around `elliptic_core`: manifests, reports and the
//! catalog of free groups.

pub mod catalog;
pub mod manifest;
pub mod pipeline;

pub use pipeline::CliError;
