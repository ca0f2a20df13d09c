//! Configuration ingestion and the command-line interface.

mod commands;
mod config;
pub mod output;

pub use config::{
    load_config, parse_config, write_config, ConfigDocument, LoadedConfig, SizingBounds,
};
pub use commands::{run, run_with_output};
