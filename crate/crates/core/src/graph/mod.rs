//! Primal graphs, tree decompositions and their nice normal form.

mod decompose;
mod nice;
mod primal;
mod td;

pub use decompose::{decompose, elimination_order, td_from_order, Heuristic};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
pub use primal::{primal_graph, PrimalGraph};
pub use td::{validate_td, TdViolation, TreeDecomposition};
