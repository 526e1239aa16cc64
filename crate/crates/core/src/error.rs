use thiserror::Error;

use crate::element::Carrier;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("carrier mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: Carrier, found: Carrier },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("scale factor {0} outside [0,1]")]
    ScaleOutOfRange(f64),

    #[error("capacity not monotone: mu({smaller:?}) > mu({larger:?})")]
    NotMonotone {
        smaller: Vec<usize>,
        larger: Vec<usize>,
    },

    #[error("capacity boundary violated: {0}")]
    BadBoundary(String),

    #[error("capacity table misses subset {0:?}")]
    MissingSubset(Vec<usize>),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("permutation {0:?} is not admissible for the input")]
    NotAdmissiblePermutation(Vec<usize>),

    #[error("{count} admissible permutations exceed the materialization limit {limit}")]
    TooManyTies { count: u128, limit: usize },

    #[error("unknown kernel: {0}")]
    UnknownKernel(String),

    #[error("unknown operation: {0}")]
    UnknownOp(String),

    #[error("unknown dissimilarity: {0}")]
    UnknownDissimilarity(String),

    #[error("kernel {kernel} produced {value}, which is outside K")]
    KernelOutOfRange { kernel: String, value: String },

    #[error("alpha {0} outside (0,1)")]
    AlphaOutOfRange(f64),

    #[error("reconstructed interval [{lower}, {upper}] leaves [0,1]")]
    ReconstructionOutOfK { lower: f64, upper: f64 },

    #[error("no witness found: {0}")]
    NoWitnessFound(String),

    #[error("hypothesis of {law} violated: {detail}")]
    HypothesisViolated { law: String, detail: String },

    #[error("oracle disagreement on {law}: conditions say {conditions}, brute force says {oracle}")]
    OracleDisagreement {
        law: String,
        conditions: String,
        oracle: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake-case tag for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::KindMismatch { .. } => "kind_mismatch",
            Error::InvalidElement(_) => "invalid_element",
            Error::InvalidOrder(_) => "invalid_order",
            Error::ScaleOutOfRange(_) => "scale_out_of_range",
            Error::NotMonotone { .. } => "not_monotone",
            Error::BadBoundary(_) => "bad_boundary",
            Error::MissingSubset(_) => "missing_subset",
            Error::BadParameter(_) => "bad_parameter",
            Error::NotAdmissiblePermutation(_) => "not_admissible_permutation",
            Error::TooManyTies { .. } => "too_many_ties",
            Error::UnknownKernel(_) => "unknown_kernel",
            Error::UnknownOp(_) => "unknown_op",
            Error::UnknownDissimilarity(_) => "unknown_dissimilarity",
            Error::KernelOutOfRange { .. } => "kernel_out_of_range",
            Error::AlphaOutOfRange(_) => "alpha_out_of_range",
            Error::ReconstructionOutOfK { .. } => "reconstruction_out_of_k",
            Error::NoWitnessFound(_) => "no_witness_found",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::OracleDisagreement { .. } => "oracle_disagreement",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
