//! File formats, experiment configs and the subcommands behind the
//! `brickcomp` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod run_dir;

pub use commands::{run_command, Outcome, Subcommand};
pub use config::ExperimentConfig;
pub use run_dir::RunDir;
