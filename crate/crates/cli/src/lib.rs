//! Expression parsing and subcommands behind the `steenrod` binary.

pub mod app;
pub mod commands;
pub mod corpus;
pub mod expr;
