//! Document format, command dispatch and reporting for the `mfkit` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod examples;

pub use commands::{run, Cli, Command, Format, Output};
pub use document::Document;
pub use error::CliError;
