use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is out of range (1..=64)")]
    Modulus(u32),
    #[error("order {0} must be odd")]
    EvenOrder(u32),
    #[error("residue {residue} is not in Z_{v}")]
    Residue { residue: u32, v: u32 },
    #[error("duplicate residue {0}")]
    DuplicateResidue(u32),
    #[error("multiplier {u} is not a unit modulo {v}")]
    NonUnit { u: u32, v: u32 },
    #[error("no symmetric subset of size {k} exists in Z_{v}")]
    SymmetricSize { v: u32, k: u32 },
    #[error("blocks {i} and {j} have different sizes and cannot be exchanged")]
    IllegalExchange { i: usize, j: usize },
    #[error("family has symmetry type {found}, expected {expected}")]
    TypeMismatch { expected: String, found: String },
    #[error("block {index} does not match its declared tag '{tag}'")]
    TagMismatch { index: usize, tag: char },
    #[error("parameter mismatch: {0}")]
    Parameters(String),
    #[error("inputs too large for brute-force matching ({0} quadruples)")]
    SizeGuard(u128),
    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
