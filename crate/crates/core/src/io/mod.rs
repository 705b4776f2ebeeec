//! Configuration parsing, CSV output and the verification report.

pub mod config;
pub mod csv;
pub mod verify;

pub use config::{parse_config_text, read_config_file, Command, Job, RunConfig};
pub use csv::{format_real, CsvTable};
pub use verify::{verify_all, VerifyOptions, VerifyReport};
