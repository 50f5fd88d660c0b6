//! Batch front end: instance documents in, result documents out.

pub mod document;
pub mod error;
pub mod result;
pub mod run;

pub use document::{emit_instance, parse_instance, Instance, InstanceDocument, Num};
pub use error::{CliError, CliResult};
pub use result::{emit_result, parse_result, Format, ResultDocument};
pub use run::{run, Command, Flags, Output, CAP_ENV};
