//! Simulation harness behind the `swiptlink` binary: run configuration
//! parsing, the mode runners, and CSV emission. Exposed as a library so the
//! integration and acceptance suites drive the same code paths as the CLI.

pub mod config_file;
pub mod csv_out;
pub mod run;
