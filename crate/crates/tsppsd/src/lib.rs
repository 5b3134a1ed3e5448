//! Command-line front end for `tsppsd-core`: file formats, JSON and CSV
//! reports, and the verification suites.

pub mod cli;
pub mod error;
pub mod format;
pub mod specfile;
pub mod suites;

pub use cli::run;
