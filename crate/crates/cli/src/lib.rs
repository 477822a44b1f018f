//! Experiment runner for BIG sampling: configuration, report emission and
//! reproductions of the built-in worked examples.

pub mod cli;
pub mod config;
pub mod reproduce;
pub mod run;

pub use cli::{execute, exit_code, Cli};
pub use config::ExperimentConfig;
pub use run::{run, Artifact, RunOutput};
