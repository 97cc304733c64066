use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid alpha {0}: expected 3 < alpha <= 4.755")]
    InvalidAlpha(f64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("complexity value overflow: a finite value would exceed {max}")]
    ValueOverflow { max: u8 },

    #[error("convolution exactness bound exceeded: coefficient may reach {bound}, modulus is {modulus}")]
    TransformOverflow { bound: u128, modulus: u64 },

    #[error("memory budget exceeded: {needed} entries requested, budget is {budget}")]
    MemoryBudget { needed: u128, budget: u128 },

    #[error("window invariant breached: {0}")]
    WindowInvariant(String),

    #[error("choice records missing: recompute the table with choice recording enabled")]
    MissingChoices,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("runtime budget exhausted")]
    BudgetExhausted,

    #[error("malformed table file: {0}")]
    TableFormat(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
