//! Command-line front end: equation syntax, problem files, and commands.

pub mod commands;
pub mod dsl;
pub mod format;
pub mod problem;
