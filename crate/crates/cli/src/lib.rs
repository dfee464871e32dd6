//! Command-line front end for `waring-core`: configuration, CSV/JSON
//! reports, set files and the acceptance suite.

pub mod acceptance;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod setfile;

pub use cli::{execute, Invocation};
pub use error::{CliError, CliResult, ErrorKind};
pub use report::comparable;
