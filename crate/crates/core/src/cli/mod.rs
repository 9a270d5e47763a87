//! Command-line surface: instance files, the `solve`, `reduce`, `verify`
//! and `render` commands, and SVG stack diagrams.

pub mod commands;
pub mod format;
pub mod svg;

pub use commands::{run, CliError, Command};
