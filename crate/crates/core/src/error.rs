use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pair {{{0}, {1}}} has no arc")]
    MissingPair(usize, usize),
    #[error("pair {{{0}, {1}}} is oriented more than once")]
    DuplicatePair(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("pattern has {pattern} vertices but the host only {host}")]
    PatternLargerThanHost { pattern: usize, host: usize },
    #[error("need at least {needed} vertices, got {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("{0} -> {1} is not an arc")]
    NotAnArc(usize, usize),
    #[error("invalid labels: {0}")]
    BadLabels(String),
    #[error("unknown builtin flag {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("flag types differ")]
    TypeMismatch,
    #[error("cannot expand from size {from} down to {to}")]
    ShrinkNotAllowed { from: usize, to: usize },
    #[error("flag vector is already unlabelled")]
    AlreadyUnlabelled,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not congruent to 3 mod 4")]
    BadResidueClass(u64),
    #[error("rotational tournaments need an odd order, got {0}")]
    EvenOrder(usize),
    #[error("exact census of size {k} is bounded to {bound} vertices, got {n}")]
    ExactBound { k: usize, n: usize, bound: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
