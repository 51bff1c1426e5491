//! File formats and the command-line driver for `nielsen-core`.

pub mod cli;
pub mod error;
pub mod format;

pub use cli::{run, Cli};
pub use error::CliError;
pub use format::{format_endomorphism, parse_endomorphism, ParseError, ParseOptions};
