//! Table algorithm for head-cycle-free programs. Rows are `⟨I, P, σ⟩`: the
//! bag part of a model, the bag atoms already proven, and an ordering of
//! `I` under which the proofs were made.

use std::collections::HashMap;

use smallvec::{smallvec, SmallVec};

use crate::dp::{bit, insert_bit, remove_bit, LocalRule, NodeContext, OriginSeq, TableAlgorithm, TabledTreeDecomposition};
use crate::graph::NodeKind;
use crate::program::{Atom, Program};

pub type Sequence = SmallVec<[Atom; 8]>;

/// Right-hand join rows keyed by `(I, σ)`, with their index and `P`.
type JoinIndex<'r> = HashMap<(u64, &'r [Atom]), Vec<(usize, u64)>>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhcRow {
    pub interp: u64,
    pub proven: u64,
    pub seq: Sequence,
}

impl PhcRow {
    pub fn empty() -> Self {
        PhcRow {
            interp: 0,
            proven: 0,
            seq: SmallVec::new(),
        }
    }

    /// `(I, P)` as atom lists for the given bag.
    pub fn atoms(&self, bag: &[Atom]) -> (Vec<Atom>, Vec<Atom>) {
        (mask_atoms(self.interp, bag), mask_atoms(self.proven, bag))
    }
}

pub(crate) fn mask_atoms(mask: u64, bag: &[Atom]) -> Vec<Atom> {
    bag.iter()
        .enumerate()
        .filter(|(i, _)| mask & bit(*i) != 0)
        .map(|(_, &a)| a)
        .collect()
}

pub(crate) fn render_set(mask: u64, bag: &[Atom], program: &Program) -> String {
    let names: Vec<&str> = mask_atoms(mask, bag).into_iter().map(|a| program.name(a)).collect();
    format!("{{{}}}", names.join(","))
}

/// Bag atoms provable from `interp` under the ordering `seq`: some rule has
/// its positive body true and ordered before the atom, its negative body
/// false, and no other head atom true. Only atoms of `interp` qualify.
pub fn gp(bag: &[Atom], interp: u64, seq: &[Atom], rules: &[LocalRule]) -> u64 {
    let mut rank = [u8::MAX; 64];
    for (i, a) in seq.iter().enumerate() {
        if let Ok(p) = bag.binary_search(a) {
            rank[p] = i as u8;
        }
    }
    let mut proven = 0u64;
    for r in rules {
        if r.pos & !interp != 0 || r.neg & interp != 0 {
            continue;
        }
        let true_heads = r.head & interp;
        if true_heads.count_ones() != 1 {
            continue;
        }
        let h = true_heads.trailing_zeros() as usize;
        let mut body = r.pos;
        let mut ordered = rank[h] != u8::MAX;
        while ordered && body != 0 {
            let b = body.trailing_zeros() as usize;
            body &= body - 1;
            ordered = rank[b] < rank[h];
        }
        if ordered {
            proven |= bit(h);
        }
    }
    proven
}

/// `σ` itself when there is nothing to insert, otherwise every insertion
/// of `atom` into `σ`.
pub fn ords(seq: &[Atom], atom: Option<Atom>) -> Vec<Sequence> {
    match atom {
        None => vec![seq.iter().copied().collect()],
        Some(a) => (0..=seq.len())
            .map(|i| {
                let mut s: Sequence = seq.iter().copied().collect();
                s.insert(i, a);
                s
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Phc;

impl TableAlgorithm for Phc {
    type Row = PhcRow;

    fn name(&self) -> &'static str {
        "phc"
    }

    fn transition(&self, ctx: &NodeContext<'_>, children: &[&[PhcRow]]) -> Vec<(PhcRow, OriginSeq)> {
        let mut out = Vec::new();
        match ctx.kind {
            NodeKind::Leaf => out.push((PhcRow::empty(), OriginSeq::new())),
            NodeKind::Introduce(a) => {
                let p = ctx.position(a);
                for (k, row) in children[0].iter().enumerate() {
                    let without = insert_bit(row.interp, p);
                    let proven = insert_bit(row.proven, p);
                    for interp in [without, without | bit(p)] {
                        if !ctx.satisfies_all(interp) {
                            continue;
                        }
                        let new_atom = (interp & bit(p) != 0).then_some(a);
                        for seq in ords(&row.seq, new_atom) {
                            let proven = proven | gp(ctx.bag, interp, &seq, ctx.rules);
                            out.push((PhcRow { interp, proven, seq }, smallvec![k as u32]));
                        }
                    }
                }
            }
            NodeKind::Remove(a) => {
                let child_bag_pos = ctx.bag.binary_search(&a).unwrap_err();
                for (k, row) in children[0].iter().enumerate() {
                    let set = row.interp & bit(child_bag_pos) != 0;
                    let proven = row.proven & bit(child_bag_pos) != 0;
                    if set && !proven {
                        continue;
                    }
                    let seq = row.seq.iter().copied().filter(|&x| x != a).collect();
                    out.push((
                        PhcRow {
                            interp: remove_bit(row.interp, child_bag_pos),
                            proven: remove_bit(row.proven, child_bag_pos),
                            seq,
                        },
                        smallvec![k as u32],
                    ));
                }
            }
            NodeKind::Join => {
                let mut right: JoinIndex<'_> = HashMap::new();
                for (k, row) in children[1].iter().enumerate() {
                    right.entry((row.interp, &row.seq[..])).or_default().push((k, row.proven));
                }
                for (i, row) in children[0].iter().enumerate() {
                    if let Some(matches) = right.get(&(row.interp, &row.seq[..])) {
                        for &(j, proven) in matches {
                            out.push((
                                PhcRow {
                                    interp: row.interp,
                                    proven: row.proven | proven,
                                    seq: row.seq.clone(),
                                },
                                smallvec![i as u32, j as u32],
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    fn interpretation(&self, row: &PhcRow) -> u64 {
        row.interp
    }

    fn render(&self, row: &PhcRow, bag: &[Atom], program: &Program) -> String {
        let seq: Vec<&str> = row.seq.iter().map(|&a| program.name(a)).collect();
        format!(
            "<{}, {}, <{}>>",
            render_set(row.interp, bag, program),
            render_set(row.proven, bag, program),
            seq.join(",")
        )
    }
}

/// A program has an answer set iff the root table holds `⟨∅, ∅, ⟨⟩⟩`.
pub fn consistent(ttd: &TabledTreeDecomposition<'_, PhcRow>) -> bool {
    ttd.root_table().find(&PhcRow::empty()).is_some()
}
