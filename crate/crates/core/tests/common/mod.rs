//! Random ground programs for differential tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use paspc::program::{AtomTable, Rule};
use paspc::{Atom, ClassKind, Program};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Tight,
    Normal,
    HeadCycleFree,
    Disjunctive,
}

pub const CLASSES: [Class; 4] = [Class::Tight, Class::Normal, Class::HeadCycleFree, Class::Disjunctive];

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Tight => "tight",
            Class::Normal => "normal",
            Class::HeadCycleFree => "hcf",
            Class::Disjunctive => "disjunctive",
        }
    }

    pub fn accepts(self, p: &Program) -> bool {
        let class = p.classify();
        match self {
            Class::Tight => class.kind == ClassKind::Tight,
            Class::Normal => class.is_normal,
            Class::HeadCycleFree => class.kind == ClassKind::HeadCycleFree && !class.is_normal,
            Class::Disjunctive => class.kind == ClassKind::Disjunctive,
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Atom> {
    let mut all: Vec<u32> = (0..n as u32).collect();
    all.shuffle(rng);
    all.truncate(k.min(n));
    all.into_iter().map(Atom).collect()
}

fn raw_program(rng: &mut ChaCha8Rng, class: Class, max_atoms: usize, max_rules: usize) -> Program {
    let n = rng.gen_range(1..=max_atoms);
    let m = rng.gen_range(1..=max_rules);
    let mut atoms = AtomTable::new();
    for i in 0..n {
        atoms.intern(&format!("x{i}"));
    }
    let max_head = match class {
        Class::Tight | Class::Normal => 1,
        _ => 3,
    };
    let mut rules = Vec::with_capacity(m);
    for _ in 0..m {
        let h = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=max_head) };
        let pos = rng.gen_range(0..=2);
        let neg = rng.gen_range(0..=if class == Class::Disjunctive { 1 } else { 2 });
        let head = pick(rng, n, h);
        let body = pick(rng, n, pos + neg);
        let (p, q) = body.split_at(pos.min(body.len()));
        let rule = Rule::new(head, p.to_vec(), q.to_vec());
        if rule.head.is_empty() && rule.pos_body.is_empty() && rule.neg_body.is_empty() {
            continue;
        }
        rules.push(rule);
    }
    let projection = match rng.gen_range(0..6) {
        0 => BTreeSet::new(),
        1 => atoms.atoms().collect(),
        _ => atoms.atoms().filter(|_| rng.gen_bool(0.5)).collect(),
    };
    Program::new(atoms, rules, Some(projection))
}

/// A program of the requested class, by rejection sampling. Programs have
/// at most `max_atoms` atoms and `max_rules` rules.
pub fn program(seed: u64, class: Class, max_atoms: usize, max_rules: usize) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = raw_program(&mut rng, class, max_atoms, max_rules);
        if class.accepts(&p) {
            return p;
        }
    }
}

/// A head-cycle-free family of constant treewidth: `blocks` blocks of
/// three atoms `a, b, c` with `a | b.`, a positive cycle `c :- a.`,
/// `a :- c, not b.`, and `b :- not c'.` linking to the previous block.
pub fn hcf_chain(blocks: usize) -> Program {
    let mut atoms = AtomTable::new();
    let mut rules = Vec::new();
    let mut prev_c: Option<Atom> = None;
    for k in 0..blocks {
        let a = atoms.intern(&format!("a{k}"));
        let b = atoms.intern(&format!("b{k}"));
        let c = atoms.intern(&format!("c{k}"));
        rules.push(Rule::new(vec![a, b], vec![], vec![]));
        rules.push(Rule::new(vec![c], vec![a], vec![]));
        rules.push(Rule::new(vec![a], vec![c], vec![b]));
        if let Some(pc) = prev_c {
            rules.push(Rule::new(vec![b], vec![], vec![pc]));
        }
        prev_c = Some(c);
    }
    Program::new(atoms, rules, None)
}
