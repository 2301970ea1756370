//! Command-line companion to `pepgrad-core`: argument parsing, table
//! rendering, JSON/CSV file formats, and the subcommand implementations.

// `!(a < b)` rejects NaN flag values; `a >= b` would let them through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;
pub mod table;
