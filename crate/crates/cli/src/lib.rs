//! Library side of the `zeno-ctl` command-line tool: configuration loading,
//! the data-producing commands and the verification suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use config::Config;
pub use error::{CliError, ExitCode};
