//! Fingerprint image-quality metrics, synthetic fixtures, and
//! verification-performance evaluation.

pub mod config;
pub mod error;
pub mod evaluation;
pub mod globalmetrics;
pub mod imagecore;
pub mod localmetrics;
pub mod report;
pub mod synth;

pub use config::ToolConfig;
pub use error::{Error, Result};
pub use report::{assess, Analysis, Metric, QualityReport};
