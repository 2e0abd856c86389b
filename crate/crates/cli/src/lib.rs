//! Configuration, run orchestration, reports, snapshots and plot scripts for
//! the `msdd` binary.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod plots;
pub mod snapshot;

pub use commands::{simulate, snapshot_cmd, spectrum, verify, Check, Report, Suite, Task};
pub use config::{load_config, parse_config, RunConfig};
pub use error::{CliError, Result};
