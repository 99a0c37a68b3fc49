//! Crate-wide error type.
//!
//! Errors fall into two families that the command-line tool maps to distinct
//! process exit codes: configuration/usage problems (exit 2) and
//! numerical or physical-validity problems (exit 3).

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent configuration (unknown keys, bad values).
    #[error("config: {0}")]
    Config(String),

    /// Filesystem failure while reading config or writing outputs.
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Operands of incompatible dimension were combined.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A truncated state dropped more probability than the caller allowed.
    #[error(
        "truncation leakage {leakage:.3e} exceeds {limit:.1e} at fock_dim {fock_dim}; \
         raise fock_dim"
    )]
    Truncation {
        leakage: f64,
        limit: f64,
        fock_dim: usize,
    },

    /// The iterative Hermitian eigensolver did not converge.
    #[error("eigensolver failed for {context} (dim {dim})")]
    Eigensolver { context: &'static str, dim: usize },

    /// Operating point violates the dispersive-regime requirement.
    #[error(
        "non-dispersive operating point: |detuning|/g = {ratio:.3} < {required}; \
         rerun with --allow-nondispersive to proceed anyway"
    )]
    NonDispersive { ratio: f64, required: f64 },

    /// A pulse schedule could not be constructed from the given parameters.
    #[error("schedule: {0}")]
    Schedule(String),

    /// Power-law fit was given an unusable window or data.
    #[error("fit: {0}")]
    Fit(String),
}

impl Error {
    /// Exit code for the command-line tool: 2 for configuration/usage
    /// errors, 3 for numerical or physical-validity failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } => 2,
            _ => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_config_from_numerical() {
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        let io = Error::Io {
            path: PathBuf::from("/nope"),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "gone"),
        };
        assert_eq!(io.exit_code(), 2);
        assert_eq!(
            Error::Truncation {
                leakage: 1e-3,
                limit: 1e-6,
                fock_dim: 8
            }
            .exit_code(),
            3
        );
        assert_eq!(
            Error::NonDispersive {
                ratio: 4.0,
                required: 10.0
            }
            .exit_code(),
            3
        );
    }

    #[test]
    fn truncation_message_names_the_remedy() {
        let msg = Error::Truncation {
            leakage: 2.5e-4,
            limit: 1e-6,
            fock_dim: 12,
        }
        .to_string();
        assert!(msg.contains("raise fock_dim"), "got: {msg}");
        assert!(msg.contains("2.500e-4"), "got: {msg}");
    }
}
