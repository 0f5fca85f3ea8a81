use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("odd-index Bernoulli number B_{0} requested (it vanishes)")]
    OddBernoulli(u32),

    #[error("sigma_a(0) is undefined")]
    SigmaOfZero,

    #[error("invalid Eisenstein weight {0}: weight must be even and >= 4 (use e2() for weight 2)")]
    EisensteinWeight(i64),

    #[error("tau table too short: tau({index}) needs a table of length {required}, have {available}")]
    TauTableTooShort {
        index: usize,
        required: usize,
        available: usize,
    },

    #[error("insufficient precision for {what}: need {needed}, have {have}")]
    Precision {
        what: &'static str,
        needed: usize,
        have: usize,
    },

    #[error("not modular of weight {weight}: {detail}")]
    NotModular { weight: u32, detail: String },

    #[error("quasimodular input rejected by {0}")]
    Quasimodular(&'static str),

    #[error("seed admissibility violated: {0}")]
    Admissibility(String),

    #[error("Eisenstein factor weight too small: E_{0} would be required")]
    EisensteinFactor(i64),

    #[error("weight {0} carries cusp forms; use the weight-12 reduction instead")]
    HasCuspForms(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear system has no exact solution: {0}")]
    Inconsistent(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("weight mismatch {0} vs {1}")]
    WeightMismatch(u32, u32),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unsupported L-series query: {0}")]
    UnsupportedQuery(String),
}
