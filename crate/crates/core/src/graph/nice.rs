//! Nice tree decompositions: leaf, introduce, remove and binary join nodes
//! with empty root and leaf bags.

use std::fmt;

use smallvec::SmallVec;

use super::td::TreeDecomposition;
use crate::program::Atom;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(Atom),
    Remove(Atom),
    Join,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Leaf => f.write_str("leaf"),
            NodeKind::Introduce(a) => write!(f, "int {}", a.0),
            NodeKind::Remove(a) => write!(f, "rem {}", a.0),
            NodeKind::Join => f.write_str("join"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag atoms.
    pub bag: Vec<Atom>,
    pub children: SmallVec<[usize; 2]>,
}

/// Nodes are numbered in post-order: every child id is smaller than its
/// parent's, and the root has the largest id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    /// Renumbers the nodes reachable from `root` in post-order (children in
    /// the given order) and checks the nice-node invariants.
    pub fn new(nodes: Vec<NiceNode>, root: usize) -> Result<Self, String> {
        let td = renumber(nodes, root);
        td.check()?;
        Ok(td)
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                parent[c] = Some(i);
            }
        }
        parent
    }

    /// Post-order node ids of the subtree rooted at `t` (ids below `t`).
    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Forgets node kinds; bags become plain vertex lists.
    pub fn to_tree_decomposition(&self, n_vertices: usize) -> TreeDecomposition {
        let bags = self
            .nodes
            .iter()
            .map(|n| n.bag.iter().map(|a| a.0).collect())
            .collect();
        let mut edges = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                edges.push((c, i));
            }
        }
        let mut td = TreeDecomposition::new(n_vertices, bags, edges);
        td.root = Some(self.root);
        td
    }

    /// Structural invariants of nice decompositions.
    pub fn check(&self) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("no nodes".into());
        }
        if self.root != self.nodes.len() - 1 {
            return Err("root is not the last node".into());
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err("root bag is not empty".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("node {i}: bag not sorted"));
            }
            if n.children.iter().any(|&c| c >= i) {
                return Err(format!("node {i}: children not in post-order"));
            }
            let child_bag = |k: usize| &self.nodes[n.children[k]].bag;
            match n.kind {
                NodeKind::Leaf => {
                    if !n.children.is_empty() || !n.bag.is_empty() {
                        return Err(format!("node {i}: leaf must be childless with empty bag"));
                    }
                }
                NodeKind::Introduce(a) => {
                    if n.children.len() != 1 {
                        return Err(format!("node {i}: introduce needs one child"));
                    }
                    let c = child_bag(0);
                    let mut expect = c.clone();
                    if c.contains(&a) {
                        return Err(format!("node {i}: introduced atom already in child bag"));
                    }
                    expect.push(a);
                    expect.sort_unstable();
                    if expect != n.bag {
                        return Err(format!("node {i}: introduce bag mismatch"));
                    }
                }
                NodeKind::Remove(a) => {
                    if n.children.len() != 1 {
                        return Err(format!("node {i}: remove needs one child"));
                    }
                    let c = child_bag(0);
                    let mut expect = n.bag.clone();
                    if n.bag.contains(&a) {
                        return Err(format!("node {i}: removed atom still in bag"));
                    }
                    expect.push(a);
                    expect.sort_unstable();
                    if &expect != c {
                        return Err(format!("node {i}: remove bag mismatch"));
                    }
                }
                NodeKind::Join => {
                    if n.children.len() != 2 {
                        return Err(format!("node {i}: join needs two children"));
                    }
                    if n.bag.is_empty() || child_bag(0) != &n.bag || child_bag(1) != &n.bag {
                        return Err(format!("node {i}: join bags must be equal and nonempty"));
                    }
                }
            }
        }
        let mut has_parent = vec![false; self.nodes.len()];
        for n in &self.nodes {
            for &c in &n.children {
                if has_parent[c] {
                    return Err(format!("node {c} has two parents"));
                }
                has_parent[c] = true;
            }
        }
        if has_parent.iter().filter(|&&p| !p).count() != 1 {
            return Err("nodes unreachable from root".into());
        }
        Ok(())
    }
}

fn renumber(nodes: Vec<NiceNode>, root: usize) -> NiceTreeDecomposition {
    let mut order = Vec::with_capacity(nodes.len());
    // iterative post-order, children left to right
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some((x, k)) = stack.pop() {
        if k < nodes[x].children.len() {
            stack.push((x, k + 1));
            stack.push((nodes[x].children[k], 0));
        } else {
            order.push(x);
        }
    }
    let mut new_id = vec![usize::MAX; nodes.len()];
    for (i, &x) in order.iter().enumerate() {
        new_id[x] = i;
    }
    let out: Vec<NiceNode> = order
        .iter()
        .map(|&x| {
            let n = &nodes[x];
            NiceNode {
                kind: n.kind,
                bag: n.bag.clone(),
                children: n.children.iter().map(|&c| new_id[c]).collect(),
            }
        })
        .collect();
    let root = out.len() - 1;
    NiceTreeDecomposition { nodes: out, root }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Atom>, children: &[usize]) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children: children.iter().copied().collect(),
        });
        self.nodes.len() - 1
    }

    fn leaf(&mut self) -> usize {
        self.push(NodeKind::Leaf, Vec::new(), &[])
    }

    /// Removes `from \ to` then introduces `to \ from`, both ascending.
    fn chain(&mut self, mut top: usize, to: &[Atom]) -> usize {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &a in from.iter().filter(|a| to.binary_search(a).is_err()) {
            bag.retain(|&x| x != a);
            top = self.push(NodeKind::Remove(a), bag.clone(), &[top]);
        }
        for &a in to.iter().filter(|a| from.binary_search(a).is_err()) {
            let pos = bag.binary_search(&a).unwrap_err();
            bag.insert(pos, a);
            top = self.push(NodeKind::Introduce(a), bag.clone(), &[top]);
        }
        top
    }

    /// Hangs `lower` (empty top bag) below `upper` in place of one of
    /// `upper`'s leaves, so two empty-separated parts become one path.
    fn graft(&mut self, upper: usize, lower: usize) -> usize {
        if self.nodes[upper].kind == NodeKind::Leaf {
            return lower;
        }
        let mut x = upper;
        loop {
            let c = self.nodes[x].children[0];
            if self.nodes[c].kind == NodeKind::Leaf {
                self.nodes[x].children[0] = lower;
                return upper;
            }
            x = c;
        }
    }
}

/// Converts a valid decomposition into a nice one of the same width. The
/// decomposition is rooted at `td.root`, or at its last bag if unset.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let nb = td.bags.len();
    assert!(nb > 0, "decomposition without bags");
    let root = td.root.unwrap_or(nb - 1);
    let adj = td.neighbors();
    let bags: Vec<Vec<Atom>> = td
        .bags
        .iter()
        .map(|b| {
            let mut v: Vec<Atom> = b.iter().map(|&x| Atom(x)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();

    let mut children = vec![Vec::new(); nb];
    let mut order = Vec::with_capacity(nb);
    let mut seen = vec![false; nb];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                children[x].push(y);
                stack.push(y);
            }
        }
    }

    let mut b = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; nb];
    for &t in order.iter().rev() {
        let bag = &bags[t];
        let branches: Vec<usize> = children[t].iter().map(|&c| b.chain(top[c], bag)).collect();
        top[t] = match branches.len() {
            0 => {
                let leaf = b.leaf();
                b.chain(leaf, bag)
            }
            1 => branches[0],
            _ if bag.is_empty() => {
                let mut acc = branches[0];
                for &br in &branches[1..] {
                    acc = b.graft(br, acc);
                }
                acc
            }
            _ => {
                let mut acc = branches[0];
                for &br in &branches[1..] {
                    acc = b.push(NodeKind::Join, bag.clone(), &[acc, br]);
                }
                acc
            }
        };
    }
    let final_top = b.chain(top[root], &[]);
    renumber(b.nodes, final_top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{decompose, primal_graph, validate_td, Heuristic, PrimalGraph};

    #[test]
    fn single_bag_shape() {
        let td = TreeDecomposition::new(2, vec![vec![0, 1]], vec![]);
        let nice = make_nice(&td);
        let kinds: Vec<NodeKind> = nice.nodes().iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::Introduce(Atom(0)),
                NodeKind::Introduce(Atom(1)),
                NodeKind::Remove(Atom(0)),
                NodeKind::Remove(Atom(1)),
            ]
        );
        assert_eq!(nice.width(), 1);
        assert_eq!(nice.check(), Ok(()));
    }

    #[test]
    fn empty_separator_with_many_children() {
        let g = PrimalGraph::from_edges(4, [(0, 1), (2, 3)]);
        let td = TreeDecomposition::new(4, vec![vec![0, 1], vec![], vec![2, 3], vec![]], vec![(0, 1), (1, 2), (1, 3)]);
        assert_eq!(validate_td(&g, &td), Ok(()));
        let nice = make_nice(&td);
        assert_eq!(nice.check(), Ok(()));
        assert!(nice.nodes().iter().all(|n| n.kind != NodeKind::Join));
        assert_eq!(validate_td(&g, &nice.to_tree_decomposition(4)), Ok(()));
    }

    #[test]
    fn running_example_preserves_width_and_validity() {
        let p = crate::fixtures::example1();
        let g = primal_graph(&p);
        let td = decompose(&g, Heuristic::MinFill, 0);
        let nice = make_nice(&td);
        assert_eq!(nice.check(), Ok(()));
        assert_eq!(nice.width(), td.width());
        assert_eq!(validate_td(&g, &nice.to_tree_decomposition(g.num_vertices())), Ok(()));
    }

    #[test]
    fn idempotent_up_to_renaming() {
        let p = crate::fixtures::example1();
        let g = primal_graph(&p);
        let nice = make_nice(&decompose(&g, Heuristic::MinDegree, 2));
        let again = make_nice(&nice.to_tree_decomposition(g.num_vertices()));
        assert_eq!(nice, again);
        let paper = crate::fixtures::paper_td();
        assert_eq!(make_nice(&paper.to_tree_decomposition(5)), paper);
    }

    #[test]
    fn empty_graph_is_single_leaf() {
        let nice = make_nice(&decompose(&PrimalGraph::new(0), Heuristic::MinFill, 0));
        assert_eq!(nice.len(), 1);
        assert_eq!(nice.node(0).kind, NodeKind::Leaf);
    }
}
