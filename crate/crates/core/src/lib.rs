//! Projected answer-set counting for ground disjunctive programs by dynamic
//! programming over tree decompositions of the primal graph.

pub mod alg;
pub mod dp;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod program;
pub mod proj;
pub mod solve;

#[doc(hidden)]
pub mod fixtures;

pub use program::{Atom, ClassKind, Program};
pub use solve::{count, solve, AlgorithmChoice, SolveOptions, Solution, TdSource};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] io::ParseDiagnostic),
    #[error("invalid tree decomposition: {0}")]
    InvalidTd(String),
    #[error("algorithm {algorithm} does not support {class} programs")]
    ClassMismatch { algorithm: &'static str, class: ClassKind },
    #[error(transparent)]
    OracleLimit(#[from] oracle::OracleLimit),
    #[error(transparent)]
    Dp(#[from] dp::DpError),
    #[error(transparent)]
    Proj(#[from] proj::ProjError),
}
