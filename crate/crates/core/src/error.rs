use alloc::string::String;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The predicted work exceeds the configured budget.
    #[error("budget exceeded for {what}: estimated cost {estimated} > limit {limit}")]
    Budget {
        what: &'static str,
        estimated: u128,
        limit: u128,
    },

    /// A checked 64-bit computation would have wrapped.
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// A prime window needed by a construction contains no primes.
    #[error("empty prime window at level {level}: [{lo}, {hi}]")]
    EmptyWindow { level: usize, lo: u64, hi: u64 },

    /// A set element shares a factor with a prime that must be coprime to it.
    #[error("element {element} is not coprime to {prime}")]
    NotCoprime { element: u64, prime: u64 },

    /// Bisection found no sign change on the bracket.
    #[error("no sign change on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    /// Exact division by a modulus failed; the difference identity forbids this.
    #[error("coefficient {coefficient} of degree {degree} not divisible by {modulus}")]
    Divisibility {
        degree: usize,
        coefficient: String,
        modulus: String,
    },

    /// Input is degenerate for the requested fit or reduction.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A required input value was not supplied.
    #[error("missing input: {0}")]
    Missing(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
