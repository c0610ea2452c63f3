use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // arithmetic
    #[error("value is not a unit modulo its modulus")]
    NotAUnit,
    #[error("Jacobi symbol requires an odd modulus >= 3")]
    EvenModulus,
    #[error("moduli are not coprime")]
    NotCoprime,
    #[error("exhausted retry budget while searching for {0}")]
    ExhaustedRetries(&'static str),

    // finite groups
    #[error("multiplication table is not square or has out-of-range entries")]
    BadTable,
    #[error("multiplication table is not a Latin square")]
    NotLatinSquare,
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("group too large: {0}")]
    TooLarge(String),
    #[error("unknown group element `{0}`")]
    UnknownElement(String),

    // cryptosystems
    #[error("plaintext group order must be at least 2, got {0}")]
    BadOrder(u64),
    #[error("plaintext {plaintext} out of range for Z_{order}")]
    PlaintextRange { plaintext: u64, order: u64 },
    #[error("ciphertext lies outside the encryption image")]
    NotInImage,
    #[error("inversion oracle misbehaved: {0}")]
    OracleFailure(String),
    #[error("letter of factor {0} is not an element of its residue group")]
    LetterOutOfGroup(usize),
    #[error("no trapdoor available for factor {0}")]
    MissingTrapdoor(usize),
    #[error("plaintext group must be nontrivial")]
    IdentityGroup,
    #[error("malformed ciphertext word: {0}")]
    MalformedWord(String),
    #[error("secret key does not match public key")]
    KeyMismatch,
    #[error("invalid key: {0}")]
    InvalidKey(String),

    // circuits and programs
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined wire `{name}` at line {line}")]
    UndefinedWire { name: String, line: usize },
    #[error("wire `{name}` defined twice (line {line})")]
    DuplicateWire { name: String, line: usize },
    #[error("circuit has no OUTPUT line")]
    NoOutput,
    #[error("expected {expected} input bits, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("Barrington compilation needs an unsolvable group")]
    SolvableGroup,
    #[error("no pair of conjugate order-5 elements with an order-5 commutator")]
    NoCommutatorPair,
    #[error("circuit depth {depth} exceeds the compiler cap {cap}")]
    DepthExceeded { depth: usize, cap: usize },
    #[error("program or circuit is over a different group than the key")]
    GroupMismatch,
    #[error("decrypted output {0} is neither the identity nor the target")]
    UnexpectedValue(String),

    // text formats and IO
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
