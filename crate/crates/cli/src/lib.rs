//! Library surface of the `nfsar` command-line tool: config parsing,
//! artifact emit/ingest, and the subcommand implementations. The binary in
//! `main.rs` is a thin clap wrapper over [`pipeline`].

pub mod config;
pub mod emit;
pub mod error;
pub mod pipeline;
