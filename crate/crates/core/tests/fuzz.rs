mod common;

use common::{program, Class, CLASSES};
use num_bigint::BigUint;
use paspc::oracle::projected_count;
use paspc::{solve, AlgorithmChoice, SolveOptions};

fn check(class: Class, n: u64) {
    for seed in 0..n {
        let p = program(seed * 4 + class as u64, class, 8, 12);
        let want: BigUint = projected_count(&p, p.projection()).unwrap();
        let got = solve(&p, &SolveOptions::default()).unwrap().count;
        assert_eq!(got, want, "{} seed {seed}:\n{p}", class.name());
        let prim = solve(
            &p,
            &SolveOptions {
                algorithm: AlgorithmChoice::Prim,
                ..Default::default()
            },
        )
        .unwrap()
        .count;
        assert_eq!(prim, want, "prim, {} seed {seed}:\n{p}", class.name());
    }
}

#[test]
fn all_classes_agree_with_oracle() {
    for class in CLASSES {
        check(class, 200);
    }
}
