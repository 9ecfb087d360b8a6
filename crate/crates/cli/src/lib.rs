//! Spec-file format and command surface for the `ainfty` tool.

pub mod commands;
pub mod error;
pub mod spec;

pub use commands::{run, run_from, Cli, Command, Mode, Outcome};
pub use error::{CliError, ParseError};
pub use spec::{emit_spec, parse_spec, parse_spec_in, FilteredHeader, MapTarget, SpecDocument};
