//! Storage, file formats, LLM gateway and the command-line pipeline around
//! `topicscope-core`.

pub mod artifacts;
pub mod cli;
pub mod error;
pub mod fsutil;
pub mod gateway;
pub mod manifest;
pub mod pipeline;
pub mod store;
pub mod synth;
pub mod tables;
pub mod vectors;

pub use error::{AppError, Result};
