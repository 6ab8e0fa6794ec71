//! Library half of the `grs-chase` command-line tool.

pub mod bench;
pub mod config;
pub mod decode;
pub mod sim;
