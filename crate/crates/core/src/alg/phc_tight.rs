//! The ordering-free variant of the head-cycle-free algorithm, for tight
//! programs. Rows are `⟨I, P⟩`.

use std::collections::HashMap;

use smallvec::smallvec;

use super::phc::render_set;
use crate::dp::{bit, insert_bit, remove_bit, LocalRule, NodeContext, OriginSeq, TableAlgorithm, TabledTreeDecomposition};
use crate::graph::NodeKind;
use crate::program::{Atom, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhcTightRow {
    pub interp: u64,
    pub proven: u64,
}

impl PhcTightRow {
    pub const EMPTY: PhcTightRow = PhcTightRow { interp: 0, proven: 0 };
}

/// Atoms of `interp` with a rule whose body holds and whose other head
/// atoms are false.
pub fn gp_unordered(interp: u64, rules: &[LocalRule]) -> u64 {
    let mut proven = 0;
    for r in rules {
        if r.pos & !interp != 0 || r.neg & interp != 0 {
            continue;
        }
        let true_heads = r.head & interp;
        if true_heads.count_ones() == 1 {
            proven |= true_heads;
        }
    }
    proven
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PhcTight;

impl TableAlgorithm for PhcTight {
    type Row = PhcTightRow;

    fn name(&self) -> &'static str {
        "phc-tight"
    }

    fn transition(&self, ctx: &NodeContext<'_>, children: &[&[PhcTightRow]]) -> Vec<(PhcTightRow, OriginSeq)> {
        let mut out = Vec::new();
        match ctx.kind {
            NodeKind::Leaf => out.push((PhcTightRow::EMPTY, OriginSeq::new())),
            NodeKind::Introduce(a) => {
                let p = ctx.position(a);
                for (k, row) in children[0].iter().enumerate() {
                    let without = insert_bit(row.interp, p);
                    let proven = insert_bit(row.proven, p);
                    for interp in [without, without | bit(p)] {
                        if ctx.satisfies_all(interp) {
                            let proven = proven | gp_unordered(interp, ctx.rules);
                            out.push((PhcTightRow { interp, proven }, smallvec![k as u32]));
                        }
                    }
                }
            }
            NodeKind::Remove(a) => {
                let p = ctx.bag.binary_search(&a).unwrap_err();
                for (k, row) in children[0].iter().enumerate() {
                    if row.interp & bit(p) != 0 && row.proven & bit(p) == 0 {
                        continue;
                    }
                    let next = PhcTightRow {
                        interp: remove_bit(row.interp, p),
                        proven: remove_bit(row.proven, p),
                    };
                    out.push((next, smallvec![k as u32]));
                }
            }
            NodeKind::Join => {
                let mut right: HashMap<u64, Vec<(usize, u64)>> = HashMap::new();
                for (k, row) in children[1].iter().enumerate() {
                    right.entry(row.interp).or_default().push((k, row.proven));
                }
                for (i, row) in children[0].iter().enumerate() {
                    for &(j, proven) in right.get(&row.interp).into_iter().flatten() {
                        let next = PhcTightRow {
                            interp: row.interp,
                            proven: row.proven | proven,
                        };
                        out.push((next, smallvec![i as u32, j as u32]));
                    }
                }
            }
        }
        out
    }

    fn interpretation(&self, row: &PhcTightRow) -> u64 {
        row.interp
    }

    fn render(&self, row: &PhcTightRow, bag: &[Atom], program: &Program) -> String {
        format!("<{}, {}>", render_set(row.interp, bag, program), render_set(row.proven, bag, program))
    }
}

pub fn consistent_tight(ttd: &TabledTreeDecomposition<'_, PhcTightRow>) -> bool {
    ttd.root_table().find(&PhcTightRow::EMPTY).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::run_dp;
    use crate::graph::{decompose, make_nice, primal_graph, Heuristic};
    use crate::io::parse_program;

    #[test]
    fn single_fact() {
        let p = parse_program("a.").unwrap();
        let td = make_nice(&decompose(&primal_graph(&p), Heuristic::MinFill, 0));
        let ttd = run_dp(&PhcTight, &p, &td).unwrap();
        let intro = td.nodes().iter().position(|n| matches!(n.kind, NodeKind::Introduce(_))).unwrap();
        assert_eq!(ttd.table(intro).rows, vec![PhcTightRow { interp: 1, proven: 1 }]);
        assert_eq!(ttd.root_table().rows, vec![PhcTightRow::EMPTY]);
        assert!(consistent_tight(&ttd));
    }

    #[test]
    fn unsupported_atom_is_dropped() {
        let p = parse_program("a :- b.\nb | c.").unwrap();
        let td = make_nice(&decompose(&primal_graph(&p), Heuristic::MinFill, 0));
        assert!(consistent_tight(&run_dp(&PhcTight, &p, &td).unwrap()));
        let p = parse_program("a :- not a.").unwrap();
        let td = make_nice(&decompose(&primal_graph(&p), Heuristic::MinFill, 0));
        assert!(!consistent_tight(&run_dp(&PhcTight, &p, &td).unwrap()));
    }
}
