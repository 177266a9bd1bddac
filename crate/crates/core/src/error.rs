use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime >= 3")]
    NotPrime(u64),
    #[error("{0} is not prime")]
    NotPrimeValue(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("subspace vector lies outside the ambient span: {0}")]
    OutsideAmbient(String),
    #[error("p-adic valuation of zero is undefined")]
    ValuationOfZero,
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("exponent out of range for generator {gen}: {exp}")]
    InvalidExponent { gen: String, exp: i64 },
    #[error("degree window is infinite-dimensional along {0}")]
    InfiniteDegree(String),
    #[error("no coaction given for generator {0}")]
    MissingCoaction(String),
    #[error("rule image {monomial} of {from} lies outside page E^{r} at ({s},{t})")]
    OutsidePage {
        r: u64,
        s: i64,
        t: i64,
        from: String,
        monomial: String,
    },
    #[error("rule d^{r} sends {from} to bidegree {got:?}, expected {expected:?}")]
    WrongBidegree {
        r: u64,
        from: String,
        got: (i64, i64),
        expected: (i64, i64),
    },
    #[error("d^{r} o d^{r} is nonzero on {0}", r = .1)]
    NonzeroSquare(String, u64),
    #[error("homology at ({0},{1}) has no monomial representatives")]
    NoMonomialRepresentatives(i64, i64),
    #[error("pages are not comparable: {0}")]
    Incomparable(String),
    #[error("monomial lies in more than one summand: {0}")]
    Overlap(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
