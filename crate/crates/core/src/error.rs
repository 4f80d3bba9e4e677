use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{what} is {got}, above the supported limit of {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("state vector is identically zero")]
    ZeroVector,

    #[error("measurement outcome {outcome} on qubit {qubit} has probability zero")]
    ZeroProbability { qubit: usize, outcome: u8 },

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("generator rows are linearly dependent")]
    DependentRows,

    #[error("state is not a bipartite quadratic bipolar state: {0}")]
    NotBipartiteQuadratic(String),

    #[error("symbolic Hadamard on qubit {qubit} is not covered by the closed-form rewrite rules")]
    UnsupportedRewrite { qubit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn guard(what: &'static str, got: usize, limit: usize) -> Result<()> {
        if got > limit {
            Err(Error::TooLarge { what, got, limit })
        } else {
            Ok(())
        }
    }
}
