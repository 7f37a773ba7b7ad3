use std::path::PathBuf;

use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected symbol {0:?} in word")]
    BadSymbol(char),
    #[error("empty word token (use `_` for the empty word)")]
    EmptyToken,
    #[error("malformed clause {0:?}: expected `lhs -> w1|w2|...`")]
    Clause(String),
    #[error("malformed literal group {0:?}: expected `[-v +w ...]`")]
    LiteralGroup(String),
    #[error("dimacs line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClauseError {
    #[error("clause has {arity} right-hand-side words, bound is k = {k}")]
    ArityExceeded { arity: usize, k: usize },
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("arity bound k must be at least 1")]
    ZeroArity,
    #[error("census polynomial must exceed 1 everywhere, but p({n}) = {value}")]
    CensusPolyTooSmall { n: usize, value: u128 },
    #[error("polynomial is not monotone nondecreasing at n = {n}")]
    NotMonotone { n: usize },
    #[error("density {0} outside [0, 1]")]
    BadDensity(f64),
    #[error("census violated: S has {count} words of length <= {n}, bound p({n}) = {bound}")]
    CensusViolated { n: usize, count: usize, bound: u128 },
    #[error("word of length {len} exceeds the covered range n_max = {n_max}")]
    OutOfRange { len: usize, n_max: usize },
    #[error("n_max = {0} exceeds the desk-scale limit of {max}", max = crate::world::MAX_N_MAX)]
    NMaxTooLarge(usize),
    #[error("reduction of {x}: {msg}")]
    ReductionBound { x: Word, msg: String },
    #[error(transparent)]
    Clause(#[from] ClauseError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("scenario format: {0}")]
    Format(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("packing precondition violated: {0}")]
    PackingPrecondition(String),
    #[error("internal consistency: the pass bound {bound} of the learning loop was exhausted")]
    LoopExhausted { bound: u128 },
    #[error(
        "internal consistency: step 5 found no underived clause in the counterexample's formula"
    )]
    NoUnderivedClause,
    #[error("internal consistency: {passes} while passes at length {i} exceed the bound {bound}")]
    PassBoundExceeded {
        i: usize,
        passes: usize,
        bound: u128,
    },
    #[error("clause weight overflows 128 bits")]
    WeightOverflow,
    #[error("word of length {len} is beyond the horizon {horizon}")]
    BeyondHorizon { len: usize, horizon: usize },
    #[error(transparent)]
    Clause(#[from] ClauseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("m = {0} is not of the form 2*3^l")]
    BadDegree(usize),
    #[error("m = {0} is beyond the supported field sizes (m <= 18)")]
    DegreeTooLarge(usize),
    #[error("modulus of degree {0} failed the irreducibility check")]
    NotIrreducible(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation points are not pairwise distinct")]
    Singular,
    #[error("{us} evaluation points but {vs} values")]
    LengthMismatch { us: usize, vs: usize },
    #[error("no m = 2*3^l up to {max} satisfies 2^m / p >= {n}", max = crate::field::MAX_SEARCH_M)]
    NoSuitableM { n: usize },
    #[error("forced m = {m} violates 2^m / p(n', m) >= n for n = {n}")]
    ForcedMTooSmall { m: usize, n: usize },
    #[error("formula has no variables")]
    NoVariables,
    #[error("no candidate word yielded a satisfying assignment")]
    NoAssignmentFound,
    #[error("every candidate produced a coefficient outside {{0, 1}}")]
    FieldValueNotBoolean,
    #[error("instance violates its bounds: {0}")]
    InstanceBound(String),
}
