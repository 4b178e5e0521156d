//! The counting pipeline: classify, decompose, first DP pass, purge,
//! projection pass.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::alg::{Phc, PhcRow, PhcTight, PhcTightRow, Prim, PrimRow};
use crate::dp::{purge, render_tables, run_dp, TableAlgorithm, TabledTreeDecomposition};
use crate::graph::{decompose, make_nice, primal_graph, validate_td, Heuristic, NiceTreeDecomposition, TreeDecomposition};
use crate::proj::{final_count, proj_pass, ProjTable};
use crate::program::{ClassKind, Program};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlgorithmChoice {
    #[default]
    Auto,
    Phc,
    PhcTight,
    Prim,
}

impl FromStr for AlgorithmChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(AlgorithmChoice::Auto),
            "phc" => Ok(AlgorithmChoice::Phc),
            "phc-tight" => Ok(AlgorithmChoice::PhcTight),
            "prim" => Ok(AlgorithmChoice::Prim),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// The table algorithm actually run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Phc,
    PhcTight,
    Prim,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Phc => "phc",
            Algorithm::PhcTight => "phc-tight",
            Algorithm::Prim => "prim",
        }
    }
}

/// Resolves `choice` against the program class, refusing algorithms that
/// are unsound for it.
pub fn select_algorithm(choice: AlgorithmChoice, class: ClassKind) -> Result<Algorithm, Error> {
    let algorithm = match choice {
        AlgorithmChoice::Auto => match class {
            ClassKind::Tight => Algorithm::PhcTight,
            ClassKind::HeadCycleFree => Algorithm::Phc,
            ClassKind::Disjunctive => Algorithm::Prim,
        },
        AlgorithmChoice::Phc => Algorithm::Phc,
        AlgorithmChoice::PhcTight => Algorithm::PhcTight,
        AlgorithmChoice::Prim => Algorithm::Prim,
    };
    let ok = match algorithm {
        Algorithm::Prim => true,
        Algorithm::Phc => class != ClassKind::Disjunctive,
        Algorithm::PhcTight => class == ClassKind::Tight,
    };
    if ok {
        Ok(algorithm)
    } else {
        Err(Error::ClassMismatch {
            algorithm: algorithm.name(),
            class,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdSource {
    Heuristic(Heuristic),
    Given(TreeDecomposition),
}

impl Default for TdSource {
    fn default() -> Self {
        TdSource::Heuristic(Heuristic::MinFill)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub algorithm: AlgorithmChoice,
    pub td: TdSource,
    pub seed: u64,
    /// Keep a text dump of every table.
    pub trace: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub decompose_ms: f64,
    pub dp_ms: f64,
    pub purge_ms: f64,
    pub proj_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub algorithm: Algorithm,
    pub class: ClassKind,
    pub atoms: usize,
    pub rules: usize,
    pub width: usize,
    pub nodes: usize,
    pub max_table: usize,
    pub max_purged: usize,
    pub max_regions: usize,
    pub consistent: bool,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub tables: String,
    pub proj: String,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub count: BigUint,
    pub stats: RunStats,
    /// The decomposition the nice decomposition was built from.
    pub td: TreeDecomposition,
    pub trace: Option<Trace>,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

struct PassResult {
    count: BigUint,
    max_table: usize,
    max_purged: usize,
    max_regions: usize,
    consistent: bool,
    dp_ms: f64,
    purge_ms: f64,
    proj_ms: f64,
    trace: Option<Trace>,
}

fn two_pass<A: TableAlgorithm>(
    alg: &A,
    program: &Program,
    nice: &NiceTreeDecomposition,
    solutions: impl Fn(&TabledTreeDecomposition<'_, A::Row>) -> Vec<usize>,
    trace: bool,
) -> Result<PassResult, Error> {
    let start = Instant::now();
    let ttd = run_dp(alg, program, nice)?;
    let dp_ms = millis(start);

    let start = Instant::now();
    let roots = solutions(&ttd);
    let purged = purge(&ttd, &roots);
    let purge_ms = millis(start);

    let start = Instant::now();
    let proj = proj_pass(alg, program.projection(), &ttd, &purged)?;
    let proj_ms = millis(start);

    let trace = trace.then(|| Trace {
        tables: render_tables(alg, program, &ttd, Some(&purged)),
        proj: render_proj(&proj),
    });
    Ok(PassResult {
        count: final_count(&proj[nice.root()]),
        max_table: ttd.max_table_size(),
        max_purged: purged.max_size(),
        max_regions: proj.iter().map(ProjTable::num_regions).max().unwrap_or(0),
        consistent: !roots.is_empty(),
        dp_ms,
        purge_ms,
        proj_ms,
        trace,
    })
}

/// Text dump of projection tables: per bucket its rows and nonzero regions.
pub fn render_proj(tables: &[ProjTable]) -> String {
    let mut out = String::new();
    for (t, table) in tables.iter().enumerate() {
        let _ = writeln!(out, "node {t} rows {} buckets {}", table.num_rows(), table.buckets.len());
        for bucket in &table.buckets {
            let rows: Vec<String> = bucket.rows.iter().map(|r| r.to_string()).collect();
            let _ = write!(out, "  bucket [{}]:", rows.join(","));
            for (region, count) in bucket.regions() {
                let members: Vec<String> = region.ones().map(|l| bucket.rows[l].to_string()).collect();
                let _ = write!(out, " {{{}}}={count}", members.join(","));
            }
            out.push('\n');
        }
    }
    out
}

fn phc_solutions(ttd: &TabledTreeDecomposition<'_, PhcRow>) -> Vec<usize> {
    ttd.root_table().find(&PhcRow::empty()).into_iter().collect()
}

fn tight_solutions(ttd: &TabledTreeDecomposition<'_, PhcTightRow>) -> Vec<usize> {
    ttd.root_table().find(&PhcTightRow::EMPTY).into_iter().collect()
}

fn prim_solutions(ttd: &TabledTreeDecomposition<'_, PrimRow>) -> Vec<usize> {
    crate::alg::prim_solution_rows(ttd)
}

/// Obtains the tree decomposition requested by `source`, checking given
/// ones against the primal graph of `program`.
pub fn tree_decomposition(program: &Program, source: &TdSource, seed: u64) -> Result<TreeDecomposition, Error> {
    let g = primal_graph(program);
    match source {
        TdSource::Heuristic(h) => Ok(decompose(&g, *h, seed)),
        TdSource::Given(td) => {
            validate_td(&g, td).map_err(|violations| {
                Error::InvalidTd(violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))
            })?;
            Ok(td.clone())
        }
    }
}

/// Projected answer-set count of `program` onto its projection atoms.
pub fn solve(program: &Program, opts: &SolveOptions) -> Result<Solution, Error> {
    let total = Instant::now();
    let class = program.classify().kind;
    let algorithm = select_algorithm(opts.algorithm, class)?;

    let start = Instant::now();
    let td = tree_decomposition(program, &opts.td, opts.seed)?;
    let nice = make_nice(&td);
    let decompose_ms = millis(start);

    let pass = match algorithm {
        Algorithm::Phc => two_pass(&Phc, program, &nice, phc_solutions, opts.trace)?,
        Algorithm::PhcTight => two_pass(&PhcTight, program, &nice, tight_solutions, opts.trace)?,
        Algorithm::Prim => two_pass(&Prim, program, &nice, prim_solutions, opts.trace)?,
    };

    let stats = RunStats {
        algorithm,
        class,
        atoms: program.num_atoms(),
        rules: program.rules().len(),
        width: nice.width(),
        nodes: nice.len(),
        max_table: pass.max_table,
        max_purged: pass.max_purged,
        max_regions: pass.max_regions,
        consistent: pass.consistent,
        timings: Timings {
            decompose_ms,
            dp_ms: pass.dp_ms,
            purge_ms: pass.purge_ms,
            proj_ms: pass.proj_ms,
            total_ms: millis(total),
        },
    };
    Ok(Solution {
        count: pass.count,
        stats,
        td,
        trace: pass.trace,
    })
}

/// [`solve`] with default options.
pub fn count(program: &Program) -> Result<BigUint, Error> {
    Ok(solve(program, &SolveOptions::default())?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, D, E};
    use std::collections::BTreeSet;

    #[test]
    fn running_example_counts() {
        let p = fixtures::example1();
        for choice in [AlgorithmChoice::Auto, AlgorithmChoice::Prim] {
            let opts = SolveOptions {
                algorithm: choice,
                ..Default::default()
            };
            let with = |proj: BTreeSet<_>| solve(&p.clone().with_projection(proj), &opts).unwrap().count;
            assert_eq!(with([D, E].into_iter().collect()), BigUint::from(3u32));
            assert_eq!(with(p.atom_table().atoms().collect()), BigUint::from(4u32));
            assert_eq!(with(BTreeSet::new()), BigUint::from(1u32));
        }
    }

    #[test]
    fn algorithm_selection() {
        assert_eq!(select_algorithm(AlgorithmChoice::Auto, ClassKind::Tight).unwrap(), Algorithm::PhcTight);
        assert_eq!(select_algorithm(AlgorithmChoice::Auto, ClassKind::HeadCycleFree).unwrap(), Algorithm::Phc);
        assert_eq!(select_algorithm(AlgorithmChoice::Auto, ClassKind::Disjunctive).unwrap(), Algorithm::Prim);
        assert!(select_algorithm(AlgorithmChoice::Phc, ClassKind::Disjunctive).is_err());
        assert!(select_algorithm(AlgorithmChoice::PhcTight, ClassKind::HeadCycleFree).is_err());
        assert_eq!(select_algorithm(AlgorithmChoice::Phc, ClassKind::Tight).unwrap(), Algorithm::Phc);
    }

    #[test]
    fn inconsistent_and_empty() {
        let p = crate::io::parse_program("a :- not a.").unwrap();
        assert_eq!(count(&p).unwrap(), BigUint::from(0u32));
        assert_eq!(count(&Program::empty()).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn given_td_is_validated() {
        let p = fixtures::example1();
        let bad = TreeDecomposition::new(5, vec![vec![0, 1]], vec![]);
        let opts = SolveOptions {
            td: TdSource::Given(bad),
            ..Default::default()
        };
        assert!(matches!(solve(&p, &opts), Err(Error::InvalidTd(_))));
    }
}
