use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid algebra `{name}`: {reason}")]
    InvalidAlgebra { name: String, reason: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("element index {index} out of range for `{algebra}` (size {size})")]
    IndexOutOfRange {
        algebra: String,
        index: usize,
        size: usize,
    },

    #[error("unknown operation symbol `{0}`")]
    UnknownOp(String),

    #[error("operation `{op}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("term parse error at byte {pos}: {msg}")]
    TermParse { pos: usize, msg: String },

    #[error("map {dom} -> {cod} is not a homomorphism: {reason}")]
    NotHomomorphism {
        dom: String,
        cod: String,
        reason: String,
    },

    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),

    #[error("not a congruence of `{algebra}`: {reason}")]
    NotCongruence { algebra: String, reason: String },

    #[error("not a subuniverse of `{algebra}`: {reason}")]
    NotSubuniverse { algebra: String, reason: String },

    #[error("joint generation failed, input not Mal'tsev at this instance: {0}")]
    NotMalcev(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("strategy `{strategy}` not applicable: {reason}")]
    Strategy { strategy: String, reason: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
