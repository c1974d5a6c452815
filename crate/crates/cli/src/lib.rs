//! Command-line front end for `taufn`: JSON documents, the `taufn` commands
//! and the acceptance self-test.

pub mod app;
pub mod json;
pub mod selftest;

pub use app::{run, Outcome};
