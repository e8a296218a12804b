use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model or simulation parameter violates its invariant.
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// An argument lies outside the domain of the function it was passed to.
    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    /// A root bracket did not contain a sign change.
    #[error("no sign change on [{lo}, {hi}] while solving {what}")]
    Bracket { what: &'static str, lo: f64, hi: f64 },

    /// A construction produced a value that contradicts a proven property.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::Domain {
            what,
            value,
            domain: format!("[{lo}, {hi}]"),
        }
    }
}
