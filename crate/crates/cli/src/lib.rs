//! Input parsing and report types for the command-line driver, exposed as a
//! library so integration tests can exercise the document formats and the
//! JSON schema directly.

pub mod input;
pub mod report;
