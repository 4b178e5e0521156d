//! Brute-force answer-set enumeration straight from the definition: a model
//! of the program that is a minimal model of its reduct.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::program::{Atom, Interpretation, Program};

/// Largest number of atoms the oracle accepts.
pub const ORACLE_MAX_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("brute-force check supports at most {ORACLE_MAX_ATOMS} atoms, the program has {atoms}")]
pub struct OracleLimit {
    pub atoms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub answer_sets: Vec<Interpretation>,
    pub projected_count: BigUint,
}

struct MaskRule {
    head: u32,
    pos: u32,
    neg: u32,
}

fn mask_rules(p: &Program) -> Vec<MaskRule> {
    let mask = |v: &[Atom]| v.iter().fold(0u32, |m, a| m | 1 << a.0);
    p.rules()
        .iter()
        .map(|r| MaskRule {
            head: mask(&r.head),
            pos: mask(&r.pos_body),
            neg: mask(&r.neg_body),
        })
        .collect()
}

fn is_answer_set(rules: &[MaskRule], i: u32) -> bool {
    let model = rules.iter().all(|r| (r.head | r.neg) & i != 0 || r.pos & !i != 0);
    if !model {
        return false;
    }
    let reduct: Vec<&MaskRule> = rules.iter().filter(|r| r.neg & i == 0).collect();
    // every proper subset of i must violate some reduct rule
    let mut j = i;
    while j != 0 {
        j = (j - 1) & i;
        if reduct.iter().all(|r| r.head & j != 0 || r.pos & !j != 0) {
            return false;
        }
    }
    true
}

pub fn enumerate_answer_sets(p: &Program) -> Result<Vec<Interpretation>, OracleLimit> {
    let n = p.num_atoms();
    if n > ORACLE_MAX_ATOMS {
        return Err(OracleLimit { atoms: n });
    }
    let rules = mask_rules(p);
    Ok((0u32..1 << n)
        .filter(|&i| is_answer_set(&rules, i))
        .map(|i| Interpretation::from_atoms(n, (0..n as u32).filter(|b| i >> b & 1 == 1).map(Atom)))
        .collect())
}

/// Number of distinct `I ∩ P` over the answer sets `I`.
pub fn projected_count(p: &Program, projection: &BTreeSet<Atom>) -> Result<BigUint, OracleLimit> {
    let sets = enumerate_answer_sets(p)?;
    Ok(count_projections(&sets, projection))
}

fn count_projections(sets: &[Interpretation], projection: &BTreeSet<Atom>) -> BigUint {
    let distinct: BTreeSet<Vec<Atom>> = sets
        .iter()
        .map(|s| s.iter().filter(|a| projection.contains(a)).collect())
        .collect();
    BigUint::from(distinct.len())
}

/// Answer sets and the projected count for the program's own projection.
pub fn oracle(p: &Program) -> Result<OracleResult, OracleLimit> {
    let answer_sets = enumerate_answer_sets(p)?;
    let projected_count = count_projections(&answer_sets, p.projection());
    Ok(OracleResult {
        answer_sets,
        projected_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, A, B, C, D, E};
    use crate::io::parse_program;

    #[test]
    fn running_example_answer_sets() {
        let p = fixtures::example1();
        let got: BTreeSet<Vec<Atom>> = enumerate_answer_sets(&p).unwrap().iter().map(|s| s.to_vec()).collect();
        let mut want: BTreeSet<Vec<Atom>> = BTreeSet::new();
        for mut s in [vec![B, C, D], vec![A, C, D], vec![B, E], vec![A, D, E]] {
            s.sort();
            want.insert(s);
        }
        assert_eq!(got, want);
        assert_eq!(projected_count(&p, &[D, E].into_iter().collect()).unwrap(), BigUint::from(3u32));
        assert_eq!(projected_count(&p, &p.atom_table().atoms().collect()).unwrap(), BigUint::from(4u32));
        assert_eq!(projected_count(&p, &BTreeSet::new()).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn trivial_programs() {
        assert_eq!(enumerate_answer_sets(&Program::empty()).unwrap().len(), 1);
        assert!(enumerate_answer_sets(&parse_program("a :- not a.").unwrap()).unwrap().is_empty());
        let minimal = enumerate_answer_sets(&parse_program("a | b.").unwrap()).unwrap();
        assert_eq!(minimal.len(), 2);
        let p = parse_program("a | b.\na :- b.\nb :- a.").unwrap();
        assert_eq!(oracle(&p).unwrap().projected_count, BigUint::from(1u32));
        assert_eq!(projected_count(&p, &BTreeSet::new()).unwrap(), BigUint::from(1u32));
    }
}
