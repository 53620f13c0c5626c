use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("demand pair ({0}, {1}) listed twice")]
    DuplicateDemand(usize, usize),

    #[error("demand pair ({0}, {0}) has identical endpoints")]
    TrivialDemand(usize),

    #[error("no path from {s} to {t}")]
    NoPath { s: usize, t: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("LP numerical failure: {0}")]
    Numerical(String),

    #[error("malformed LP model: {0}")]
    Model(String),

    #[error("randomized rounding failed after {rounds} rounds")]
    RoundingExhausted { rounds: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
