//! Command-line front end for `zpgabor-core`: JSON formats, resumable
//! search runs and the `zpgabor` subcommands.

pub mod checkpoint;
pub mod commands;
pub mod error;
pub mod formats;
pub mod runner;

pub use error::CliError;
