//! Command implementations behind the `cimlab` binary.

pub mod census;
pub mod classify;
pub mod construct;
pub mod error;
pub mod groupfile;

pub use classify::{Caps, Mode};
pub use error::CliError;
pub use groupfile::GroupFile;
