//! Library half of the `critscat` command-line tool.
//!
//! The binary in `main.rs` is a thin argument-parsing layer; everything it
//! does goes through here so that configuration handling and artifact
//! formatting stay testable in isolation.

pub mod commands;
pub mod config;
pub mod output;
