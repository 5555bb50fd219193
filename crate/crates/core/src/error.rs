use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element id {0:?}")]
    DuplicateId(String),
    #[error("unknown element id {0:?}")]
    UnknownId(String),
    #[error("relation contains a cycle through {0:?} and {1:?}")]
    Cycle(String, String),
    #[error("pair ({0:?}, {1:?}) is not a cover relation of its own closure")]
    RedundantCover(String, String),
    #[error("{0:?} is not below {1:?}")]
    NotLeq(String, String),
    #[error("map is not an order automorphism")]
    NotAutomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("not a matching on the Hasse diagram: {0}")]
    NotMatching(String),
    #[error("matching is not special: cover ({0:?}, {1:?}) violates the condition")]
    NotSpecial(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZirconError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("poset is not bounded")]
    NotBounded,
    #[error("automorphism fixes no element")]
    NoFixedPoints,
    #[error("transformed matching M_{index} is not special at cover ({p:?}, {q:?})")]
    TransformedNotSpecial { index: usize, p: String, q: String },
    #[error("component of {0:?} has no unique {1} element")]
    NonUniqueExtremum(String, &'static str),
    #[error("fixed point {0:?} is neither minimal nor maximal in its component")]
    FixedPointNotExtremal(String),
    #[error("fixed-point matching is invalid: {0}")]
    InvalidResult(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("invalid Coxeter type spec {0:?}")]
    InvalidType(String),
    #[error("group order {0} exceeds the cap {1}")]
    OrderCap(usize, usize),
    #[error("inconsistent group model: {0}")]
    Model(String),
    #[error("invalid diagram automorphism: {0}")]
    InvalidDiagramAutomorphism(String),
    #[error("generator s{0} is not a {1} descent of {2}")]
    NotDescent(usize, &'static str, String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("exhaustive enumeration is capped at n = {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("density must lie in [0, 1], got {0}")]
    Density(f64),
}
