use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("density is not strictly increasing at x = {0:?}")]
    NonMonotoneDensity(Vec<f64>),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("evaluation of `{name}` failed: {reason}")]
    Evaluation { name: String, reason: String },

    #[error("unknown function descriptor `{0}`")]
    UnknownDescriptor(String),

    #[error("unknown Young function `{0}`")]
    UnknownYoung(String),

    #[error("`{name}`: the {flag} flag is unknown, cannot produce {what}")]
    FlagUnknown { name: String, flag: &'static str, what: &'static str },

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
