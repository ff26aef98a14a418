use thiserror::Error;

/// Which side of a bilateral Jackson sum failed to converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Nodes `q^n / a` with `n -> +inf` (towards the origin).
    Lower,
    /// Nodes `q^-n / a` with `n -> +inf` (towards infinity).
    Upper,
}

impl std::fmt::Display for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::Lower => write!(f, "lower"),
            Tail::Upper => write!(f, "upper"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {terms} terms: {what}")]
    NonConvergence { what: String, terms: usize },

    #[error("{tail} tail of improper Jackson sum did not converge after {terms} terms")]
    TailNonConvergence { tail: Tail, terms: usize },

    #[error("non-finite integrand value at node x = {x}")]
    NonFinite { x: f64 },

    #[error("pole: denominator vanishes at q = {0}")]
    Pole(String),

    #[error("indeterminate at q = 1; caller must cancel (1-q) factors first")]
    Indeterminate,

    #[error("size guard: {what} would produce {predicted} items (limit {limit})")]
    SizeGuard {
        what: String,
        predicted: u128,
        limit: u128,
    },

    #[error("series truncated at order {order}, requested q^{requested}")]
    BeyondTruncation { order: usize, requested: usize },

    #[error("inexact polynomial division (arithmetic bug)")]
    InexactDivision,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
