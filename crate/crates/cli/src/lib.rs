//! Library side of the `treegreen` binary: config parsing, the command
//! implementations and output formatting.

pub mod commands;
pub mod config;
pub mod format;
