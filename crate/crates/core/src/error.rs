use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inversion of zero in GF({q})")]
    ZeroInverse { q: u32 },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("unsupported matrix shape {rows}x{cols}: {reason}")]
    UnsupportedShape {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    /// A neighbor of `x` matched none of the six partition patterns.
    #[error("vertex {vertex} matches no partition class (distance to y = {dist}, n- = {n_minus}, n+ = {n_plus})")]
    StructuralViolation {
        vertex: String,
        dist: usize,
        n_minus: usize,
        n_plus: usize,
    },

    #[error("counts from class O{class} are not constant: vertex {vertex} sees {found:?}, expected {expected:?}")]
    EquitabilityViolation {
        class: usize,
        vertex: String,
        expected: Vec<u64>,
        found: Vec<u64>,
    },

    #[error("internal inconsistency in table {table}: {detail}")]
    Inconsistency { table: &'static str, detail: String },

    #[error("configuration too large for {what}: {estimate} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        estimate: String,
        limit: String,
    },

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
