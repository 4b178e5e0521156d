//! Ground disjunctive programs: atoms, rules, satisfaction, the
//! Gelfond-Lifschitz reduct and program classification.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// Dense atom identifier, assigned in first-occurrence order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Registry mapping atom ids to names and back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.index.get(name) {
            return a;
        }
        let a = Atom(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), a);
        a
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.names.len() as u32).map(Atom)
    }
}

/// A rule `H ← B⁺, not B⁻`. Each part is kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub pos_body: Vec<Atom>,
    pub neg_body: Vec<Atom>,
}

fn normalized(mut v: Vec<Atom>) -> Vec<Atom> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Rule {
    pub fn new(head: Vec<Atom>, pos_body: Vec<Atom>, neg_body: Vec<Atom>) -> Self {
        Rule {
            head: normalized(head),
            pos_body: normalized(pos_body),
            neg_body: normalized(neg_body),
        }
    }

    /// All atoms occurring in the rule, sorted.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut all: Vec<Atom> = self
            .head
            .iter()
            .chain(&self.pos_body)
            .chain(&self.neg_body)
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }
}

/// A set of atoms over the atom table of some program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Interpretation {
    bits: FixedBitSet,
}

impl Interpretation {
    pub fn empty(n_atoms: usize) -> Self {
        Interpretation {
            bits: FixedBitSet::with_capacity(n_atoms),
        }
    }

    pub fn from_atoms(n_atoms: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut i = Self::empty(n_atoms);
        for a in atoms {
            i.insert(a);
        }
        i
    }

    pub fn insert(&mut self, a: Atom) {
        if a.index() >= self.bits.len() {
            self.bits.grow(a.index() + 1);
        }
        self.bits.insert(a.index());
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.bits.contains(a.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.bits.ones().map(|i| Atom(i as u32))
    }

    pub fn to_vec(&self) -> Vec<Atom> {
        self.iter().collect()
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

/// `I ⊨ r` iff `(H ∪ B⁻) ∩ I ≠ ∅` or `B⁺ ⊄ I`.
pub fn satisfies(interp: &Interpretation, rule: &Rule) -> bool {
    rule.head.iter().any(|&a| interp.contains(a))
        || rule.neg_body.iter().any(|&a| interp.contains(a))
        || rule.pos_body.iter().any(|&a| !interp.contains(a))
}

/// A ground program together with its projection atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
    atoms: AtomTable,
    projection: BTreeSet<Atom>,
}

impl Program {
    /// Builds a program, dropping duplicate rules. The projection defaults
    /// to every atom when `projection` is `None`.
    pub fn new(atoms: AtomTable, rules: Vec<Rule>, projection: Option<BTreeSet<Atom>>) -> Self {
        let mut seen = HashSet::new();
        let rules: Vec<Rule> = rules.into_iter().filter(|r| seen.insert(r.clone())).collect();
        let projection = projection.unwrap_or_else(|| atoms.atoms().collect());
        debug_assert!(projection.iter().all(|a| a.index() < atoms.len()));
        Program {
            rules,
            atoms,
            projection,
        }
    }

    pub fn empty() -> Self {
        Program::new(AtomTable::new(), Vec::new(), None)
    }

    /// Convenience constructor from named rules `(head, pos, neg)`.
    pub fn from_named(rules: &[(&[&str], &[&str], &[&str])]) -> Self {
        let mut table = AtomTable::new();
        let mut out = Vec::with_capacity(rules.len());
        for (h, p, n) in rules {
            let head = h.iter().map(|s| table.intern(s)).collect();
            let pos = p.iter().map(|s| table.intern(s)).collect();
            let neg = n.iter().map(|s| table.intern(s)).collect();
            out.push(Rule::new(head, pos, neg));
        }
        Program::new(table, out, None)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn atom_table(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn projection(&self) -> &BTreeSet<Atom> {
        &self.projection
    }

    pub fn with_projection(mut self, projection: BTreeSet<Atom>) -> Self {
        debug_assert!(projection.iter().all(|a| a.index() < self.atoms.len()));
        self.projection = projection;
        self
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atoms.get(name)
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.atoms.name(atom)
    }

    /// Whether `interp` satisfies every rule.
    pub fn is_model(&self, interp: &Interpretation) -> bool {
        self.rules.iter().all(|r| satisfies(interp, r))
    }

    /// Gelfond-Lifschitz reduct with respect to `interp`.
    pub fn gl_reduct(&self, interp: &Interpretation) -> Program {
        let rules = self
            .rules
            .iter()
            .filter(|r| !r.neg_body.iter().any(|&a| interp.contains(a)))
            .map(|r| Rule {
                head: r.head.clone(),
                pos_body: r.pos_body.clone(),
                neg_body: Vec::new(),
            })
            .collect();
        Program::new(self.atoms.clone(), rules, Some(self.projection.clone()))
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(|r| r.head.len() <= 1)
    }

    pub fn dependency_digraph(&self) -> DependencyDigraph {
        DependencyDigraph::of(self)
    }

    pub fn classify(&self) -> ProgramClass {
        classify(self)
    }
}

/// Canonical text form: one rule per line, `not` literals last, followed by
/// a `#project` directive unless the projection is every atom. An empty
/// projection has no textual form and prints as no directive.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: &[Atom]| -> Vec<&str> { v.iter().map(|&a| self.name(a)).collect() };
        for r in &self.rules {
            let head = names(&r.head).join(" | ");
            let body: Vec<String> = r
                .pos_body
                .iter()
                .map(|&a| self.name(a).to_owned())
                .chain(r.neg_body.iter().map(|&a| format!("not {}", self.name(a))))
                .collect();
            match (head.is_empty(), body.is_empty()) {
                (false, true) => writeln!(f, "{head}.")?,
                (false, false) => writeln!(f, "{head} :- {}.", body.join(", "))?,
                (true, _) => writeln!(f, ":- {}.", body.join(", "))?,
            }
        }
        if !self.projection.is_empty() && self.projection.len() != self.num_atoms() {
            let p: Vec<&str> = self.projection.iter().map(|&a| self.name(a)).collect();
            writeln!(f, "#project {}.", p.join(", "))?;
        }
        Ok(())
    }
}

/// Positive dependency digraph: an edge `a → b` for `a ∈ B⁺_r`, `b ∈ H_r`.
#[derive(Debug, Clone)]
pub struct DependencyDigraph {
    pub vertices: BTreeSet<Atom>,
    pub edges: BTreeSet<(Atom, Atom)>,
}

impl DependencyDigraph {
    pub fn of(program: &Program) -> Self {
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for r in program.rules() {
            vertices.extend(r.head.iter().copied());
            vertices.extend(r.pos_body.iter().copied());
            for &a in &r.pos_body {
                for &b in &r.head {
                    edges.insert((a, b));
                }
            }
        }
        DependencyDigraph { vertices, edges }
    }

    /// Strongly connected component id per atom (atoms outside the digraph
    /// get none), plus whether each component contains a cycle.
    fn components(&self, n_atoms: usize) -> (Vec<Option<usize>>, Vec<bool>) {
        let mut g = DiGraph::<Atom, ()>::new();
        let mut node = HashMap::new();
        for &v in &self.vertices {
            node.insert(v, g.add_node(v));
        }
        for &(a, b) in &self.edges {
            g.add_edge(node[&a], node[&b], ());
        }
        let mut comp = vec![None; n_atoms];
        let mut cyclic = Vec::new();
        for (cid, scc) in tarjan_scc(&g).into_iter().enumerate() {
            let has_cycle = scc.len() > 1 || {
                let a = g[scc[0]];
                self.edges.contains(&(a, a))
            };
            cyclic.push(has_cycle);
            for ni in scc {
                comp[g[ni].index()] = Some(cid);
            }
        }
        (comp, cyclic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Tight,
    HeadCycleFree,
    Disjunctive,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Tight => "tight",
            ClassKind::HeadCycleFree => "head-cycle-free",
            ClassKind::Disjunctive => "disjunctive",
        })
    }
}

/// Strongest applicable class plus the independent normality flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgramClass {
    pub kind: ClassKind,
    pub is_normal: bool,
}

pub fn classify(program: &Program) -> ProgramClass {
    let dg = program.dependency_digraph();
    let (comp, cyclic) = dg.components(program.num_atoms());
    let is_normal = program.is_normal();
    let kind = if !cyclic.iter().any(|&c| c) {
        ClassKind::Tight
    } else {
        // A head-cycle exists iff two distinct head atoms share an SCC.
        let head_cycle = program.rules().iter().any(|r| {
            r.head.iter().enumerate().any(|(i, &a)| {
                r.head[i + 1..]
                    .iter()
                    .any(|&b| comp[a.index()].is_some() && comp[a.index()] == comp[b.index()])
            })
        });
        if head_cycle {
            ClassKind::Disjunctive
        } else {
            ClassKind::HeadCycleFree
        }
    };
    ProgramClass { kind, is_normal }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example1() -> Program {
        Program::from_named(&[
            (&["a", "b"], &[], &[]),
            (&["c", "e"], &[], &[]),
            (&["d", "e"], &["b"], &[]),
            (&["b"], &["e"], &["d"]),
            (&["d"], &[], &["b"]),
        ])
    }

    fn interp(p: &Program, names: &[&str]) -> Interpretation {
        Interpretation::from_atoms(p.num_atoms(), names.iter().map(|n| p.atom(n).unwrap()))
    }

    #[test]
    fn satisfaction_cases() {
        let p = example1();
        assert!(satisfies(&interp(&p, &["b", "c", "d"]), &p.rules()[2]));
        let empty_rule = Rule::new(vec![], vec![], vec![]);
        assert!(!satisfies(&Interpretation::empty(0), &empty_rule));
        let q = Program::from_named(&[(&["b"], &["a"], &[])]);
        assert!(!satisfies(&interp(&q, &["a"]), &q.rules()[0]));
    }

    #[test]
    fn reduct_of_running_example() {
        let p = example1();
        let red = p.gl_reduct(&interp(&p, &["b", "e"]));
        let expected = Program::from_named(&[
            (&["a", "b"], &[], &[]),
            (&["c", "e"], &[], &[]),
            (&["d", "e"], &["b"], &[]),
            (&["b"], &["e"], &[]),
        ]);
        assert_eq!(red.rules(), expected.rules());
        assert!(red.rules().iter().all(|r| r.neg_body.is_empty()));

        let all = p.gl_reduct(&Interpretation::empty(p.num_atoms()));
        assert_eq!(all.rules().len(), 5);
        let pos = Program::from_named(&[(&["a"], &["b"], &[]), (&["b"], &[], &[])]);
        assert_eq!(pos.gl_reduct(&interp(&pos, &["a"])), pos);
    }

    #[test]
    fn classification() {
        let p = example1();
        assert_eq!(
            p.classify(),
            ProgramClass {
                kind: ClassKind::HeadCycleFree,
                is_normal: false
            }
        );
        let dg = p.dependency_digraph();
        let b = p.atom("b").unwrap();
        let e = p.atom("e").unwrap();
        assert!(dg.edges.contains(&(b, e)) && dg.edges.contains(&(e, b)));

        let d = Program::from_named(&[(&["a", "b"], &[], &[]), (&["a"], &["b"], &[]), (&["b"], &["a"], &[])]);
        assert_eq!(d.classify().kind, ClassKind::Disjunctive);

        let t = Program::from_named(&[(&["a"], &[], &["b"]), (&["b"], &[], &["a"])]);
        assert_eq!(t.classify(), ProgramClass { kind: ClassKind::Tight, is_normal: true });

        let self_loop = Program::from_named(&[(&["a"], &["a"], &[])]);
        assert_eq!(self_loop.classify().kind, ClassKind::HeadCycleFree);
        assert_eq!(Program::empty().classify().kind, ClassKind::Tight);
    }

    #[test]
    fn duplicate_rules_collapse() {
        let p = Program::from_named(&[(&["a", "a"], &["b"], &[]), (&["a"], &["b", "b"], &[])]);
        assert_eq!(p.rules().len(), 1);
        assert_eq!(p.rules()[0].head.len(), 1);
    }
}
