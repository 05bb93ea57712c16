use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q must lie strictly inside (0, 1), got {0}")]
    InvalidQ(f64),

    #[error("q-Pochhammer base must be positive, got {0}")]
    InvalidPochhammerBase(f64),

    #[error("invalid class parameters: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("pole of (1 + Az)/(1 + Bz) at z = {0}")]
    JanowskiPole(Complex64),

    #[error("D_q^l f vanishes at z = {0}")]
    DenominatorZero(Complex64),

    #[error("A - B p(z) vanishes at z = {0}")]
    MarginDenominatorZero(Complex64),

    #[error("series is not a member of the class (coefficient slack {slack})")]
    NotMember { slack: f64 },

    #[error("series is a member of the class; no violation to witness")]
    IsMember,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid Schwarz function: {0}")]
    InvalidSchwarz(String),
}
