//! Configuration, dispatch and report rendering behind the `schurdirac`
//! binary.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, parse_config_for, Command, ConfigError, OutputFormat, RunConfig};
pub use report::Report;
pub use run::{run, Outcome, RunError};
