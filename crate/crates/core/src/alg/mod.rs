//! Table algorithms run by the dynamic-programming driver.

mod phc;
mod phc_tight;
mod prim;

pub use phc::{consistent, gp, ords, Phc, PhcRow, Sequence};
pub use phc_tight::{consistent_tight, gp_unordered, PhcTight, PhcTightRow};
pub use prim::{prim_solution_rows, Prim, PrimRow};
