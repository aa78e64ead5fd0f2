//! File formats, configuration and the command-line driver around
//! [`nearfield_core`].

pub mod cli;
pub mod config;
pub mod formats;
pub mod presets;

pub use cli::{run, Cli, CliError};
