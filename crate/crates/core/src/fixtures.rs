//! The running example used across the test suites.

use smallvec::smallvec;

use crate::graph::{NiceNode, NiceTreeDecomposition, NodeKind};
use crate::program::{Atom, Program};

/// `a|b.  c|e.  d|e :- b.  b :- e, not d.  d :- not b.` projected to d, e.
pub const EXAMPLE1: &str = "a | b.\nc | e.\nd | e :- b.\nb :- e, not d.\nd :- not b.\n#project d, e.\n";

/// Atom ids of the running example in parse order.
pub const A: Atom = Atom(0);
pub const B: Atom = Atom(1);
pub const C: Atom = Atom(2);
pub const E: Atom = Atom(3);
pub const D: Atom = Atom(4);

pub fn example1() -> Program {
    crate::io::parse_program(EXAMPLE1).expect("fixture parses")
}

/// A fourteen-node nice decomposition of the running example's primal
/// graph. Node `t_i` has id `i - 1`:
///
/// ```text
/// t1 leaf, t2 int a, t3 int b, t4 rem a          {b}
/// t5 leaf, t6 int c, t7 int e, t8 rem c          {e}
/// t9 int d {d,e}, t10 int b {b,d,e}, t11 rem e {b,d}, t12 rem d {b}
/// t13 join {b}, t14 rem b (root)
/// ```
pub fn paper_td() -> NiceTreeDecomposition {
    fn node(kind: NodeKind, bag: &[Atom], children: &[usize]) -> NiceNode {
        let mut bag = bag.to_vec();
        bag.sort_unstable();
        NiceNode {
            kind,
            bag,
            children: children.iter().copied().collect(),
        }
    }
    let nodes = vec![
        node(NodeKind::Leaf, &[], &[]),
        node(NodeKind::Introduce(A), &[A], &[0]),
        node(NodeKind::Introduce(B), &[A, B], &[1]),
        node(NodeKind::Remove(A), &[B], &[2]),
        node(NodeKind::Leaf, &[], &[]),
        node(NodeKind::Introduce(C), &[C], &[4]),
        node(NodeKind::Introduce(E), &[C, E], &[5]),
        node(NodeKind::Remove(C), &[E], &[6]),
        node(NodeKind::Introduce(D), &[D, E], &[7]),
        node(NodeKind::Introduce(B), &[B, D, E], &[8]),
        node(NodeKind::Remove(E), &[B, D], &[9]),
        node(NodeKind::Remove(D), &[B], &[10]),
        NiceNode {
            kind: NodeKind::Join,
            bag: vec![B],
            children: smallvec![3, 11],
        },
        node(NodeKind::Remove(B), &[], &[12]),
    ];
    NiceTreeDecomposition::new(nodes, 13).expect("fixture decomposition is nice")
}
