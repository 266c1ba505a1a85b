use num_bigint::BigUint;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("gcd undefined for (0, 0)")]
    GcdUndefined,

    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: BigUint, m: BigUint },

    #[error("residue {a} out of range for modulus {m}")]
    ResidueOutOfRange { a: BigUint, m: BigUint },

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("sequence length {got} does not match block length {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("oracle scale exceeded: n = {0} (limit {1})")]
    OracleScaleExceeded(usize, usize),

    #[error("key generation failed: {0}")]
    Keygen(String),

    #[error("empty block: the all-zero block cannot be encrypted")]
    EmptyBlock,

    #[error("invalid ciphertext: candidate budget exhausted after {0} shifts")]
    InvalidCiphertext(u64),

    #[error("payload too long: {got} bits, capacity {cap}")]
    PayloadTooLong { got: usize, cap: usize },

    #[error("payload width too small: n - r = {0}, need at least 8")]
    PayloadTooSmall(i64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("missing debug fields: key was not generated with the test profile")]
    MissingDebugFields,

    #[error("invalid lattice manner: {0}")]
    InvalidManner(String),

    #[error("dependent rows in lattice basis")]
    DependentRows,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
