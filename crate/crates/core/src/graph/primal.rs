use std::collections::BTreeSet;

use crate::program::{Atom, Program};

/// Primal graph of a program: atoms are vertices, atoms sharing a rule are
/// adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalGraph {
    adjacency: Vec<BTreeSet<u32>>,
}

impl PrimalGraph {
    pub fn new(n: usize) -> Self {
        PrimalGraph {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut g = PrimalGraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: u32, b: u32) {
        if a != b {
            self.adjacency[a as usize].insert(b);
            self.adjacency[b as usize].insert(a);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: u32) -> &BTreeSet<u32> {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adjacency[a as usize].contains(&b)
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.range(a as u32 + 1..).map(move |&b| (a as u32, b)))
    }
}

pub fn primal_graph(program: &Program) -> PrimalGraph {
    let mut g = PrimalGraph::new(program.num_atoms());
    for r in program.rules() {
        let atoms: Vec<Atom> = r.atoms();
        for (i, &a) in atoms.iter().enumerate() {
            for &b in &atoms[i + 1..] {
                g.add_edge(a.0, b.0);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_graph() {
        let p = crate::fixtures::example1();
        let g = primal_graph(&p);
        let id = |n: &str| p.atom(n).unwrap().0;
        let mut expected: Vec<(u32, u32)> = [("a", "b"), ("c", "e"), ("b", "d"), ("b", "e"), ("d", "e")]
            .iter()
            .map(|&(x, y)| (id(x).min(id(y)), id(x).max(id(y))))
            .collect();
        expected.sort();
        assert_eq!(g.edges().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn empty_and_triangle() {
        assert_eq!(primal_graph(&Program::empty()).num_vertices(), 0);
        let p = Program::from_named(&[(&["a", "b"], &["c"], &[])]);
        let g = primal_graph(&p);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
