//! Post-order dynamic programming over nice tree decompositions, origin
//! links between rows of neighbouring tables, and purging.
//!
//! Rows are stored bag-local: bit `i` of a mask refers to `bag[i]` of the
//! node the row belongs to. Each table is a sorted, duplicate-free row list,
//! and `origins[k]` lists the child-row index sequences that produce row `k`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::hash::Hash;

use smallvec::SmallVec;

use crate::graph::{NiceTreeDecomposition, NodeKind};
use crate::program::{Atom, Program};

/// Child-row indices, one per child of the node.
pub type OriginSeq = SmallVec<[u32; 2]>;

/// Largest bag the mask representation supports.
pub const MAX_BAG: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DpError {
    #[error("bag of node {node} has {size} atoms, at most {MAX_BAG} are supported")]
    BagTooLarge { node: usize, size: usize },
    #[error("row is not in the table of node {node}")]
    RowNotPresent { node: usize },
}

#[inline]
pub fn bit(pos: usize) -> u64 {
    1u64 << pos
}

/// Makes room for a new bit at `pos`, shifting higher bits up.
#[inline]
pub fn insert_bit(mask: u64, pos: usize) -> u64 {
    let low = mask & (bit(pos) - 1);
    low | ((mask >> pos) << (pos + 1))
}

/// Drops bit `pos`, shifting higher bits down.
#[inline]
pub fn remove_bit(mask: u64, pos: usize) -> u64 {
    let low = mask & (bit(pos) - 1);
    low | ((mask >> (pos + 1)) << pos)
}

/// A rule of the bag-program in bag-local masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRule {
    pub head: u64,
    pub pos: u64,
    pub neg: u64,
}

impl LocalRule {
    #[inline]
    pub fn satisfied_by(&self, interp: u64) -> bool {
        (self.head | self.neg) & interp != 0 || self.pos & !interp != 0
    }

    /// Whether `interp` satisfies the reduct of this rule relative to
    /// `witness` (vacuous when the rule is deleted by the reduct).
    #[inline]
    pub fn reduct_satisfied_by(&self, witness: u64, interp: u64) -> bool {
        self.neg & witness != 0 || self.head & interp != 0 || self.pos & !interp != 0
    }
}

/// Everything a table algorithm may look at when computing one table.
#[derive(Debug, Clone, Copy)]
pub struct NodeContext<'a> {
    pub id: usize,
    pub kind: NodeKind,
    pub bag: &'a [Atom],
    pub rules: &'a [LocalRule],
}

impl NodeContext<'_> {
    pub fn position(&self, a: Atom) -> usize {
        self.bag.binary_search(&a).expect("atom in bag")
    }

    pub fn satisfies_all(&self, interp: u64) -> bool {
        self.rules.iter().all(|r| r.satisfied_by(interp))
    }
}

/// A local table algorithm in the sense of the post-order driver.
pub trait TableAlgorithm {
    type Row: Clone + Ord + Hash + fmt::Debug;

    fn name(&self) -> &'static str;

    /// Rows of node `ctx.id` from the child tables, each with the child-row
    /// indices it was produced from. Duplicates are allowed.
    fn transition(&self, ctx: &NodeContext<'_>, children: &[&[Self::Row]]) -> Vec<(Self::Row, OriginSeq)>;

    /// Interpretation part of a row, as a bag-local mask.
    fn interpretation(&self, row: &Self::Row) -> u64;

    fn render(&self, row: &Self::Row, bag: &[Atom], program: &Program) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table<R> {
    pub rows: Vec<R>,
    pub origins: Vec<Vec<OriginSeq>>,
}

impl<R: Ord> Table<R> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn find(&self, row: &R) -> Option<usize> {
        self.rows.binary_search(row).ok()
    }

    fn from_emissions(mut emitted: Vec<(R, OriginSeq)>) -> Self {
        emitted.sort_unstable();
        emitted.dedup();
        let mut rows: Vec<R> = Vec::new();
        let mut origins: Vec<Vec<OriginSeq>> = Vec::new();
        for (row, origin) in emitted {
            if rows.last() != Some(&row) {
                rows.push(row);
                origins.push(Vec::new());
            }
            origins.last_mut().unwrap().push(origin);
        }
        Table { rows, origins }
    }
}

/// A nice decomposition with one table per node.
#[derive(Debug, Clone)]
pub struct TabledTreeDecomposition<'a, R> {
    pub td: &'a NiceTreeDecomposition,
    pub tables: Vec<Table<R>>,
}

impl<R: Ord> TabledTreeDecomposition<'_, R> {
    pub fn table(&self, t: usize) -> &Table<R> {
        &self.tables[t]
    }

    pub fn root_table(&self) -> &Table<R> {
        &self.tables[self.td.root()]
    }

    pub fn max_table_size(&self) -> usize {
        self.tables.iter().map(Table::len).max().unwrap_or(0)
    }

    /// `orig(t, u)` for the row with index `row`.
    pub fn origins(&self, t: usize, row: usize) -> Result<&[OriginSeq], DpError> {
        self.tables[t]
            .origins
            .get(row)
            .map(Vec::as_slice)
            .ok_or(DpError::RowNotPresent { node: t })
    }

    /// `orig(t, u)` looked up by row content.
    pub fn origins_of(&self, t: usize, row: &R) -> Result<&[OriginSeq], DpError> {
        let idx = self.tables[t].find(row).ok_or(DpError::RowNotPresent { node: t })?;
        self.origins(t, idx)
    }

    /// Union of the origins of a set of rows.
    pub fn origins_table(&self, t: usize, rows: &[usize]) -> Result<BTreeSet<OriginSeq>, DpError> {
        let mut out = BTreeSet::new();
        for &r in rows {
            out.extend(self.origins(t, r)?.iter().cloned());
        }
        Ok(out)
    }
}

/// Rule indices of the bag-program `{ r : at(r) ⊆ χ(t) }` for every node.
pub fn bag_programs(program: &Program, td: &NiceTreeDecomposition) -> Vec<Vec<usize>> {
    let rule_atoms: Vec<Vec<Atom>> = program.rules().iter().map(|r| r.atoms()).collect();
    let mut by_min_atom: Vec<Vec<usize>> = vec![Vec::new(); program.num_atoms()];
    let mut atomless = Vec::new();
    for (i, atoms) in rule_atoms.iter().enumerate() {
        match atoms.first() {
            Some(a) => by_min_atom[a.index()].push(i),
            None => atomless.push(i),
        }
    }
    td.nodes()
        .iter()
        .map(|node| {
            let mut rules = atomless.clone();
            for a in &node.bag {
                for &r in &by_min_atom[a.index()] {
                    if rule_atoms[r].iter().all(|x| node.bag.binary_search(x).is_ok()) {
                        rules.push(r);
                    }
                }
            }
            rules.sort_unstable();
            rules
        })
        .collect()
}

pub fn local_rule(program: &Program, rule: usize, bag: &[Atom]) -> LocalRule {
    let r = &program.rules()[rule];
    let mask = |atoms: &[Atom]| {
        atoms
            .iter()
            .fold(0u64, |m, a| m | bit(bag.binary_search(a).expect("rule fits bag")))
    };
    LocalRule {
        head: mask(&r.head),
        pos: mask(&r.pos_body),
        neg: mask(&r.neg_body),
    }
}

/// Runs `alg` on every node in post-order.
pub fn run_dp<'a, A: TableAlgorithm>(
    alg: &A,
    program: &Program,
    td: &'a NiceTreeDecomposition,
) -> Result<TabledTreeDecomposition<'a, A::Row>, DpError> {
    let bag_rules = bag_programs(program, td);
    let mut tables: Vec<Table<A::Row>> = Vec::with_capacity(td.len());
    for (t, node) in td.nodes().iter().enumerate() {
        if node.bag.len() > MAX_BAG {
            return Err(DpError::BagTooLarge {
                node: t,
                size: node.bag.len(),
            });
        }
        let rules: Vec<LocalRule> = bag_rules[t].iter().map(|&r| local_rule(program, r, &node.bag)).collect();
        let ctx = NodeContext {
            id: t,
            kind: node.kind,
            bag: &node.bag,
            rules: &rules,
        };
        let children: Vec<&[A::Row]> = node.children.iter().map(|&c| tables[c].rows.as_slice()).collect();
        let emitted = alg.transition(&ctx, &children);
        tables.push(Table::from_emissions(emitted));
    }
    Ok(TabledTreeDecomposition { td, tables })
}

/// Recomputes every origin set by definition: for each tuple of child rows
/// run the transition on singleton child tables and record which rows it
/// yields. Exponential in the number of children; meant for testing.
pub fn definitional_origins<A: TableAlgorithm>(
    alg: &A,
    program: &Program,
    ttd: &TabledTreeDecomposition<'_, A::Row>,
) -> Vec<Vec<Vec<OriginSeq>>> {
    let td = ttd.td;
    let bag_rules = bag_programs(program, td);
    let mut out = Vec::with_capacity(td.len());
    for (t, node) in td.nodes().iter().enumerate() {
        let rules: Vec<LocalRule> = bag_rules[t].iter().map(|&r| local_rule(program, r, &node.bag)).collect();
        let ctx = NodeContext {
            id: t,
            kind: node.kind,
            bag: &node.bag,
            rules: &rules,
        };
        let table = &ttd.tables[t];
        let mut origins: Vec<BTreeSet<OriginSeq>> = vec![BTreeSet::new(); table.len()];
        let sizes: Vec<usize> = node.children.iter().map(|&c| ttd.tables[c].len()).collect();
        let mut tuple: Vec<usize> = vec![0; sizes.len()];
        let total: usize = sizes.iter().product();
        for _ in 0..total {
            let singles: Vec<&[A::Row]> = node
                .children
                .iter()
                .zip(&tuple)
                .map(|(&c, &i)| std::slice::from_ref(&ttd.tables[c].rows[i]))
                .collect();
            let seq: OriginSeq = tuple.iter().map(|&i| i as u32).collect();
            for (row, _) in alg.transition(&ctx, &singles) {
                if let Some(k) = table.find(&row) {
                    origins[k].insert(seq.clone());
                }
            }
            for (slot, &size) in tuple.iter_mut().zip(&sizes) {
                *slot += 1;
                if *slot < size {
                    break;
                }
                *slot = 0;
            }
        }
        out.push(origins.into_iter().map(|s| s.into_iter().collect()).collect());
    }
    out
}

/// Purged table mapping: per node, the sorted indices of rows that are
/// reachable from the given root rows by following origins downwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Purged {
    pub kept: Vec<Vec<usize>>,
}

impl Purged {
    pub fn max_size(&self) -> usize {
        self.kept.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn contains(&self, t: usize, row: usize) -> bool {
        self.kept[t].binary_search(&row).is_ok()
    }
}

pub fn purge<R: Ord>(ttd: &TabledTreeDecomposition<'_, R>, solution_rows: &[usize]) -> Purged {
    let td = ttd.td;
    let mut marks: Vec<Vec<bool>> = ttd.tables.iter().map(|t| vec![false; t.len()]).collect();
    for &r in solution_rows {
        marks[td.root()][r] = true;
    }
    for t in (0..td.len()).rev() {
        let node = td.node(t);
        for r in 0..ttd.tables[t].len() {
            if !marks[t][r] {
                continue;
            }
            for seq in &ttd.tables[t].origins[r] {
                for (i, &child) in node.children.iter().enumerate() {
                    marks[child][seq[i] as usize] = true;
                }
            }
        }
    }
    Purged {
        kept: marks
            .into_iter()
            .map(|m| m.into_iter().enumerate().filter_map(|(i, k)| k.then_some(i)).collect())
            .collect(),
    }
}

/// Programs and atoms at and below a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeScope {
    pub program_below: BTreeSet<usize>,
    pub program_strictly_below: BTreeSet<usize>,
    pub atoms_below: BTreeSet<Atom>,
    pub atoms_strictly_below: BTreeSet<Atom>,
}

pub fn node_scope(program: &Program, td: &NiceTreeDecomposition, t: usize) -> NodeScope {
    let bag_rules = bag_programs(program, td);
    let mut program_below = BTreeSet::new();
    let mut atoms_below = BTreeSet::new();
    for s in td.subtree(t) {
        program_below.extend(bag_rules[s].iter().copied());
        atoms_below.extend(td.node(s).bag.iter().copied());
    }
    let here: BTreeSet<usize> = bag_rules[t].iter().copied().collect();
    let bag: BTreeSet<Atom> = td.node(t).bag.iter().copied().collect();
    NodeScope {
        program_strictly_below: program_below.difference(&here).copied().collect(),
        atoms_strictly_below: atoms_below.difference(&bag).copied().collect(),
        program_below,
        atoms_below,
    }
}

/// Text dump of every table: node header, then one line per row with its
/// purge mark and origins.
pub fn render_tables<A: TableAlgorithm>(
    alg: &A,
    program: &Program,
    ttd: &TabledTreeDecomposition<'_, A::Row>,
    purged: Option<&Purged>,
) -> String {
    let mut out = String::new();
    for (t, node) in ttd.td.nodes().iter().enumerate() {
        let bag: Vec<&str> = node.bag.iter().map(|&a| program.name(a)).collect();
        let kind = match node.kind {
            NodeKind::Leaf => "leaf".to_owned(),
            NodeKind::Introduce(a) => format!("int {}", program.name(a)),
            NodeKind::Remove(a) => format!("rem {}", program.name(a)),
            NodeKind::Join => "join".to_owned(),
        };
        let children: Vec<String> = node.children.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "node {t} {kind} bag {{{}}} children [{}] rows {}",
            bag.join(","),
            children.join(","),
            ttd.tables[t].len()
        );
        for (r, row) in ttd.tables[t].rows.iter().enumerate() {
            let mark = match purged {
                Some(p) if !p.contains(t, r) => "-",
                _ => " ",
            };
            let origins: Vec<String> = ttd.tables[t].origins[r]
                .iter()
                .map(|s| {
                    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                    format!("<{}>", v.join(","))
                })
                .collect();
            let _ = writeln!(out, " {mark}{r}: {} from {}", alg.render(row, &node.bag, program), origins.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_shuffles() {
        assert_eq!(insert_bit(0b1011, 2), 0b10011);
        assert_eq!(remove_bit(0b10011, 2), 0b1011);
        assert_eq!(insert_bit(0, 0), 0);
        assert_eq!(remove_bit(0b1, 0), 0);
    }

    #[test]
    fn bag_programs_of_fixture() {
        let p = crate::fixtures::example1();
        let td = crate::fixtures::paper_td();
        let bp = bag_programs(&p, &td);
        // t3 = {a, b} holds r1; t10 = {b, d, e} holds r3, r4 and r5
        assert_eq!(bp[2], vec![0]);
        assert_eq!(bp[9], vec![2, 3, 4]);
        assert_eq!(bp[10], vec![4]);
        assert_eq!(bp[6], vec![1]);
        assert!(bp[13].is_empty());
    }

    #[test]
    fn scope_at_root_is_everything() {
        let p = crate::fixtures::example1();
        let td = crate::fixtures::paper_td();
        let scope = node_scope(&p, &td, td.root());
        assert_eq!(scope.program_below.len(), p.rules().len());
        assert_eq!(scope.program_strictly_below, scope.program_below);
        assert_eq!(scope.atoms_below.len(), 5);
        let s4 = node_scope(&p, &td, 3);
        assert_eq!(s4.atoms_strictly_below, [crate::fixtures::A].into_iter().collect());
    }
}
