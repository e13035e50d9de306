//! Command-line front end for `kframe-core`: JSON inputs in, certificate
//! reports out.

pub mod error;
pub mod golden;
pub mod io;
pub mod jobs;
pub mod report;

pub use error::CliError;
pub use jobs::{run_job, Command, JobSpec};
pub use report::{Report, Verdict};
