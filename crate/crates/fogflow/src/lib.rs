//! File formats, configuration and experiment commands around
//! [`fogflow_core`].
//!
//! - [`config`]: TOML experiment configuration
//! - [`formats`]: corpus, trace, learning-curve and result CSVs
//! - [`checkpoint`]: plain-text policy checkpoints
//! - [`commands`]: `generate`, `train`, `evaluate`, `compare`, `oracle`

pub mod checkpoint;
pub mod commands;
pub mod config;
mod error;
pub mod formats;

pub use error::{Error, Result};
