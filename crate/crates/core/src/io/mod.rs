//! Text formats: ground programs and PACE-style tree decompositions.

mod parse;
mod td_format;

pub use parse::{parse_program, ParseDiagnostic};
pub use td_format::{read_td, write_td};
