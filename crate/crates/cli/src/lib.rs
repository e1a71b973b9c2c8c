//! Library half of the `nuqet` command-line tool.

pub mod angle;
pub mod config;
pub mod error;
pub mod figure;
pub mod model;
pub mod report;
pub mod selfcheck;
pub mod sweep;
pub mod table;

pub use error::{CliError, CliResult};
