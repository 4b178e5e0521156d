//! Tree decompositions from greedy elimination orderings.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::primal::PrimalGraph;
use super::td::TreeDecomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-fill" => Ok(Heuristic::MinFill),
            "min-degree" => Ok(Heuristic::MinDegree),
            other => Err(format!("unknown heuristic `{other}`")),
        }
    }
}

fn fill_in(adj: &[BTreeSet<u32>], v: usize) -> usize {
    let ns: Vec<u32> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !adj[a as usize].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn score(h: Heuristic, adj: &[BTreeSet<u32>], v: usize) -> usize {
    match h {
        Heuristic::MinDegree => adj[v].len(),
        Heuristic::MinFill => fill_in(adj, v),
    }
}

/// Greedy elimination ordering. Ties go to the smallest tie-break rank;
/// seed 0 ranks vertices by id, other seeds use a seeded random ranking.
pub fn elimination_order(g: &PrimalGraph, heuristic: Heuristic, seed: u64) -> Vec<u32> {
    let n = g.num_vertices();
    let mut rank: Vec<usize> = (0..n).collect();
    if seed != 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rank.shuffle(&mut rng);
    }
    let mut adj: Vec<BTreeSet<u32>> = (0..n as u32).map(|v| g.neighbors(v).clone()).collect();
    let mut scores: Vec<usize> = (0..n).map(|v| score(heuristic, &adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize, u32)> = (0..n).map(|v| (scores[v], rank[v], v as u32)).collect();
    let mut order = Vec::with_capacity(n);

    while let Some((_, _, v)) = queue.pop_first() {
        order.push(v);
        let ns: Vec<u32> = adj[v as usize].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj[a as usize].remove(&v);
            for &b in &ns[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
        adj[v as usize].clear();

        let mut affected: BTreeSet<u32> = ns.iter().copied().collect();
        if heuristic == Heuristic::MinFill {
            for &a in &ns {
                affected.extend(adj[a as usize].iter().copied());
            }
        }
        for w in affected {
            let wi = w as usize;
            if !queue.remove(&(scores[wi], rank[wi], w)) {
                continue;
            }
            scores[wi] = score(heuristic, &adj, wi);
            queue.insert((scores[wi], rank[wi], w));
        }
    }
    order
}

/// Builds the decomposition induced by an elimination ordering: the bag of
/// the i-th eliminated vertex is the vertex plus its neighbours at that
/// point, linked to the bag of the earliest later-eliminated neighbour.
/// Component roots hang off the last bag, which is also the root.
pub fn td_from_order(g: &PrimalGraph, order: &[u32]) -> TreeDecomposition {
    let n = g.num_vertices();
    assert_eq!(order.len(), n, "ordering must cover every vertex");
    if n == 0 {
        let mut td = TreeDecomposition::new(0, vec![Vec::new()], Vec::new());
        td.root = Some(0);
        return td;
    }
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut adj: Vec<BTreeSet<u32>> = (0..n as u32).map(|v| g.neighbors(v).clone()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let ns: Vec<u32> = adj[v as usize].iter().copied().collect();
        let mut bag = ns.clone();
        bag.push(v);
        bags.push(bag);
        match ns.iter().map(|&w| position[w as usize]).min() {
            Some(parent) => edges.push((i, parent)),
            None if i + 1 < n => edges.push((i, n - 1)),
            None => {}
        }
        for (k, &a) in ns.iter().enumerate() {
            adj[a as usize].remove(&v);
            for &b in &ns[k + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
    }
    let mut td = TreeDecomposition::new(n, bags, edges);
    td.root = Some(n - 1);
    td
}

pub fn decompose(g: &PrimalGraph, heuristic: Heuristic, seed: u64) -> TreeDecomposition {
    td_from_order(g, &elimination_order(g, heuristic, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::td::validate_td;

    fn g1() -> PrimalGraph {
        crate::graph::primal_graph(&crate::fixtures::example1())
    }

    #[test]
    fn running_example_width_two() {
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let td = decompose(&g1(), h, 0);
            assert_eq!(validate_td(&g1(), &td), Ok(()));
            assert!(td.width() <= 2, "{h:?} gave width {}", td.width());
        }
    }

    #[test]
    fn empty_graph_single_empty_bag() {
        let td = decompose(&PrimalGraph::new(0), Heuristic::MinFill, 0);
        assert_eq!(td.bags, vec![Vec::<u32>::new()]);
        assert_eq!(td.max_bag_size(), 0);
    }

    #[test]
    fn complete_graph_width() {
        let k4 = PrimalGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let td = decompose(&k4, Heuristic::MinDegree, 3);
        assert_eq!(td.width(), 3);
        assert_eq!(validate_td(&k4, &td), Ok(()));
    }

    #[test]
    fn disconnected_components_are_linked() {
        let g = PrimalGraph::from_edges(5, [(0, 1), (3, 4)]);
        let td = decompose(&g, Heuristic::MinFill, 0);
        assert_eq!(validate_td(&g, &td), Ok(()));
        assert_eq!(td.root, Some(4));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = g1();
        for seed in 0..5 {
            assert_eq!(decompose(&g, Heuristic::MinFill, seed), decompose(&g, Heuristic::MinFill, seed));
        }
    }
}
