//! Witness/counter-witness table algorithm for arbitrary disjunctive
//! programs. A row `⟨M, C⟩` pairs the bag part of a model `M̂` of the
//! program below the node with the bag parts of the interpretations that
//! are proper subsets of `M̂` and model the reduct relative to `M̂`.

use std::collections::HashMap;

use smallvec::smallvec;

use super::phc::render_set;
use crate::dp::{bit, insert_bit, remove_bit, NodeContext, OriginSeq, TableAlgorithm, TabledTreeDecomposition};
use crate::graph::NodeKind;
use crate::program::{Atom, Program};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimRow {
    pub witness: u64,
    /// Sorted, duplicate-free.
    pub counter: Vec<u64>,
}

impl PrimRow {
    pub fn empty() -> Self {
        PrimRow {
            witness: 0,
            counter: Vec::new(),
        }
    }

    fn new(witness: u64, mut counter: Vec<u64>) -> Self {
        counter.sort_unstable();
        counter.dedup();
        PrimRow { witness, counter }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Prim;

impl TableAlgorithm for Prim {
    type Row = PrimRow;

    fn name(&self) -> &'static str {
        "prim"
    }

    fn transition(&self, ctx: &NodeContext<'_>, children: &[&[PrimRow]]) -> Vec<(PrimRow, OriginSeq)> {
        let mut out = Vec::new();
        match ctx.kind {
            NodeKind::Leaf => out.push((PrimRow::empty(), OriginSeq::new())),
            NodeKind::Introduce(a) => {
                let p = ctx.position(a);
                let reduct_ok = |witness: u64, n: u64| ctx.rules.iter().all(|r| r.reduct_satisfied_by(witness, n));
                for (k, row) in children[0].iter().enumerate() {
                    let old = insert_bit(row.witness, p);
                    for witness in [old, old | bit(p)] {
                        if !ctx.satisfies_all(witness) {
                            continue;
                        }
                        let with_a = witness & bit(p) != 0;
                        let mut counter = Vec::new();
                        for &n in &row.counter {
                            let n = insert_bit(n, p);
                            if reduct_ok(witness, n) {
                                counter.push(n);
                            }
                            if with_a && reduct_ok(witness, n | bit(p)) {
                                counter.push(n | bit(p));
                            }
                        }
                        if with_a && reduct_ok(witness, old) {
                            counter.push(old);
                        }
                        out.push((PrimRow::new(witness, counter), smallvec![k as u32]));
                    }
                }
            }
            NodeKind::Remove(a) => {
                let p = ctx.bag.binary_search(&a).unwrap_err();
                for (k, row) in children[0].iter().enumerate() {
                    let counter = row.counter.iter().map(|&n| remove_bit(n, p)).collect();
                    out.push((PrimRow::new(remove_bit(row.witness, p), counter), smallvec![k as u32]));
                }
            }
            NodeKind::Join => {
                let mut right: HashMap<u64, Vec<usize>> = HashMap::new();
                for (k, row) in children[1].iter().enumerate() {
                    right.entry(row.witness).or_default().push(k);
                }
                for (i, left) in children[0].iter().enumerate() {
                    for &j in right.get(&left.witness).into_iter().flatten() {
                        let right = &children[1][j];
                        let m = left.witness;
                        let mut counter: Vec<u64> = left
                            .counter
                            .iter()
                            .copied()
                            .filter(|n| right.counter.binary_search(n).is_ok())
                            .collect();
                        if left.counter.binary_search(&m).is_ok() || right.counter.binary_search(&m).is_ok() {
                            counter.push(m);
                        }
                        out.push((PrimRow::new(m, counter), smallvec![i as u32, j as u32]));
                    }
                }
            }
        }
        out
    }

    fn interpretation(&self, row: &PrimRow) -> u64 {
        row.witness
    }

    fn render(&self, row: &PrimRow, bag: &[Atom], program: &Program) -> String {
        let counter: Vec<String> = row.counter.iter().map(|&n| render_set(n, bag, program)).collect();
        format!("<{}, {{{}}}>", render_set(row.witness, bag, program), counter.join(","))
    }
}

/// Root rows without a surviving counter-witness: `{⟨∅, ∅⟩} ∩ τ(root)`.
pub fn prim_solution_rows(ttd: &TabledTreeDecomposition<'_, PrimRow>) -> Vec<usize> {
    ttd.root_table().find(&PrimRow::empty()).into_iter().collect()
}
