//! Command-line driver for the fsifeti benchmarks: flat-text configuration,
//! benchmark orchestration and deterministic result files.

pub mod config;
pub mod run;

pub use config::{parse_config, Benchmark, ConfigError, Frame, RunConfig};
pub use run::{run, RunError, RunOutcome, BUILD_ID};
