use std::fmt;

use super::primal::PrimalGraph;

/// An (unrooted unless `root` is set) tree decomposition. Bags hold sorted
/// vertex ids; `edges` are tree edges between bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n_vertices: usize,
    pub bags: Vec<Vec<u32>>,
    pub edges: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(n_vertices: usize, mut bags: Vec<Vec<u32>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition {
            n_vertices,
            bags,
            edges,
            root: None,
        }
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `max |bag| - 1`, saturating at zero for the empty-bag decomposition.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < self.bags.len() && b < self.bags.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// Same tree with edges normalised to `(min, max)` and sorted.
    pub fn normalized(&self) -> Self {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        TreeDecomposition {
            n_vertices: self.n_vertices,
            bags: self.bags.clone(),
            edges,
            root: self.root,
        }
    }
}

/// A violated tree-decomposition condition together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    NoBags,
    VertexOutOfRange { bag: usize, vertex: u32 },
    EdgeEndpointOutOfRange { edge: (usize, usize) },
    VertexUncovered { vertex: u32 },
    EdgeUncovered { edge: (u32, u32) },
    TreeHasCycle,
    TreeDisconnected { unreachable: usize },
    OccurrenceDisconnected { vertex: u32 },
    VertexCountMismatch { graph: usize, decomposition: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NoBags => write!(f, "decomposition has no bags"),
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {} contains vertex {} outside the graph", bag + 1, vertex + 1)
            }
            TdViolation::EdgeEndpointOutOfRange { edge } => {
                write!(f, "tree edge {} {} refers to a missing bag", edge.0 + 1, edge.1 + 1)
            }
            TdViolation::VertexUncovered { vertex } => write!(f, "vertex {} is in no bag", vertex + 1),
            TdViolation::EdgeUncovered { edge } => {
                write!(f, "edge {{{}, {}}} is in no bag", edge.0 + 1, edge.1 + 1)
            }
            TdViolation::TreeHasCycle => write!(f, "bag graph is not a tree (cycle)"),
            TdViolation::TreeDisconnected { unreachable } => {
                write!(f, "bag graph is disconnected ({unreachable} bags unreachable)")
            }
            TdViolation::OccurrenceDisconnected { vertex } => {
                write!(f, "bags containing vertex {} are not connected", vertex + 1)
            }
            TdViolation::VertexCountMismatch { graph, decomposition } => {
                write!(f, "graph has {graph} vertices but decomposition declares {decomposition}")
            }
        }
    }
}

/// Checks coverage (vertices and edges), the tree shape and connectedness of
/// every vertex's occurrence set. Returns all violations found.
pub fn validate_td(g: &PrimalGraph, td: &TreeDecomposition) -> Result<(), Vec<TdViolation>> {
    let mut violations = Vec::new();
    let n = g.num_vertices();
    let nb = td.bags.len();
    if td.n_vertices != n {
        violations.push(TdViolation::VertexCountMismatch {
            graph: n,
            decomposition: td.n_vertices,
        });
    }
    if nb == 0 {
        violations.push(TdViolation::NoBags);
        return Err(violations);
    }

    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if (v as usize) < n {
                occurrences[v as usize].push(i);
            } else {
                violations.push(TdViolation::VertexOutOfRange { bag: i, vertex: v });
            }
        }
    }
    for (v, occ) in occurrences.iter().enumerate() {
        if occ.is_empty() {
            violations.push(TdViolation::VertexUncovered { vertex: v as u32 });
        }
    }
    for (a, b) in g.edges() {
        let covered = occurrences[a as usize]
            .iter()
            .any(|&i| td.bags[i].binary_search(&b).is_ok());
        if !covered {
            violations.push(TdViolation::EdgeUncovered { edge: (a, b) });
        }
    }

    let mut tree_ok = true;
    for &(a, b) in &td.edges {
        if a >= nb || b >= nb {
            violations.push(TdViolation::EdgeEndpointOutOfRange { edge: (a, b) });
            tree_ok = false;
        }
    }
    if tree_ok {
        let adj = td.neighbors();
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached < nb {
            violations.push(TdViolation::TreeDisconnected {
                unreachable: nb - reached,
            });
            tree_ok = false;
        }
        if td.edges.len() != nb - 1 {
            if reached == nb {
                violations.push(TdViolation::TreeHasCycle);
            }
            tree_ok = false;
        }
    }

    // In a tree, a node set induces a connected subtree iff it spans
    // exactly |set| - 1 tree edges.
    if tree_ok {
        let mut inner_edges = vec![0usize; n];
        for &(a, b) in &td.edges {
            let (ba, bb) = (&td.bags[a], &td.bags[b]);
            for &v in ba {
                if (v as usize) < n && bb.binary_search(&v).is_ok() {
                    inner_edges[v as usize] += 1;
                }
            }
        }
        for v in 0..n {
            let occ = occurrences[v].len();
            if occ > 0 && inner_edges[v] + 1 != occ {
                violations.push(TdViolation::OccurrenceDisconnected { vertex: v as u32 });
            }
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> PrimalGraph {
        // a=0 b=1 c=2 e=3 d=4 as in parse order of the running example
        PrimalGraph::from_edges(5, [(0, 1), (2, 3), (1, 4), (1, 3), (3, 4)])
    }

    #[test]
    fn accepts_valid_decomposition() {
        let td = TreeDecomposition::new(5, vec![vec![0, 1], vec![1, 3, 4], vec![2, 3]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_td(&g1(), &td), Ok(()));
    }

    #[test]
    fn disconnected_tree_is_reported() {
        let g = PrimalGraph::new(2);
        let td = TreeDecomposition::new(2, vec![vec![0], vec![1]], vec![]);
        let errs = validate_td(&g, &td).unwrap_err();
        assert!(errs.contains(&TdViolation::TreeDisconnected { unreachable: 1 }));
    }

    #[test]
    fn missing_atom_breaks_edge_coverage() {
        let td = TreeDecomposition::new(5, vec![vec![0, 1], vec![1, 4], vec![2]], vec![(0, 1), (1, 2)]);
        let errs = validate_td(&g1(), &td).unwrap_err();
        assert!(errs.contains(&TdViolation::VertexUncovered { vertex: 3 }));
        assert!(errs.contains(&TdViolation::EdgeUncovered { edge: (2, 3) }));
    }

    #[test]
    fn occurrence_and_cycle_checks() {
        let g = PrimalGraph::new(1);
        let td = TreeDecomposition::new(1, vec![vec![0], vec![], vec![0]], vec![(0, 1), (1, 2)]);
        let errs = validate_td(&g, &td).unwrap_err();
        assert_eq!(errs, vec![TdViolation::OccurrenceDisconnected { vertex: 0 }]);

        let td = TreeDecomposition::new(1, vec![vec![0], vec![0], vec![0]], vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(validate_td(&g, &td).unwrap_err(), vec![TdViolation::TreeHasCycle]);
    }
}
