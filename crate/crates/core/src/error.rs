//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} outside the allowed range")]
    InvalidProbability(f64),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex set is not a clique")]
    NotAClique,
    #[error("coloring leaves vertex {0} uncolored")]
    PartialColoring(usize),
    #[error("coloring covers {got} vertices, graph has {expected}")]
    ColoringSize { expected: usize, got: usize },
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pseudo-partition failed in all {attempts} attempts ({a_failures} short A, {b_failures} short B)")]
    PartitionExhausted {
        attempts: usize,
        a_failures: usize,
        b_failures: usize,
    },
    #[error("repair budget of {budget} recolorings exhausted with {remaining} monochromatic cliques left")]
    RepairBudgetExhausted { budget: usize, remaining: usize },
    #[error("series needs {terms} terms, limit is {limit}")]
    SeriesTooLong { terms: u64, limit: u64 },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// True for the errors that signal an exhausted search or repair budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::RepairBudgetExhausted { .. } | Error::PartitionExhausted { .. }
        )
    }
}
