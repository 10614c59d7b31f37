//! Command-line front end for the `sixflow` library.

pub mod app;
pub mod format;

pub use app::{run, Exit, Outcome};
