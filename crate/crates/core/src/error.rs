use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex count {0} outside supported range 1..={max}", max = crate::graph::MAX_VERTICES)]
    VertexCount(usize),

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge list parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("set size {k} out of range for graph on {n} vertices")]
    SetSize { k: usize, n: usize },

    #[error("exact count of C({n},{k}) = {subsets} subsets needs {work} units of work, over the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        k: usize,
        subsets: String,
        work: String,
        budget: u64,
    },

    #[error("sample count must be positive")]
    NoTrials,

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("variance {value} is negative beyond rounding tolerance (second moment {second_moment})")]
    NegativeVariance { value: f64, second_moment: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
