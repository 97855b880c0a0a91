use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("blocks overlap: {0}")]
    Overlap(String),
    #[error("blocks leave a gap: {0}")]
    Gap(String),
    #[error("pattern is not tree-generated: no crossing-free midline cut at {0}")]
    NotTreeGenerated(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("cell count mismatch: {0} source vs {1} target")]
    CountMismatch(usize, usize),
    #[error("index shift by {shift} drives {letter} negative")]
    NegativeIndex { letter: String, shift: i64 },
    #[error("generator family {0} has no interpretation")]
    UnsupportedFamily(String),
    #[error("operation supports dimension 2 only, got {0}")]
    DimUnsupported(usize),
    #[error("no rewrite rule configured for {0}")]
    NoRuleConfigured(String),
    #[error("rule {lhs} := {rhs} is not an identity")]
    RuleVerificationFailed { lhs: String, rhs: String },
    #[error("cell count {0} exceeds experiment cap {1}")]
    CapExceeded(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
