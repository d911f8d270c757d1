use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ufh_core::trees::{comb_counterexample_check, construct_bips, TreeSpec};
use ufh_core::ZChain;

const SPECS: [(&str, usize); 5] =
    [("", 1), ("1,-1", 2), ("-2(1,3),2(2)", 3), ("-3(1(2),3),-1(2),2(1(1,3),2),4", 4), ("1(1(1(1))),-1(2(3(4)))", 4)];

#[test]
fn random_coefficients_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (text, depth) in SPECS {
        let spec: TreeSpec = text.parse().unwrap();
        let basis = construct_bips(&spec, depth, 6).unwrap();
        assert!(basis.tameness().iter().all(|c| c.passed), "{text}");
        for _ in 0..100 {
            let f: Vec<i64> = (0..basis.len()).map(|_| rng.random_range(-5..=5)).collect();
            let c = basis.bips_to_cycle(&f);
            assert!(c.is_cycle(basis.tree()));
            let back = basis.tree_coefficients(&c).unwrap();
            assert_eq!(back, f);
            let top = f.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
            assert!(top <= 2 * c.sup_norm());
            assert!(c.sup_norm() <= 3 * top);
        }
    }
}

#[test]
fn cycle_round_trip_from_the_tree_side() {
    // a cycle built from two bips is recovered edge for edge
    let spec: TreeSpec = "-2(1,3),2(2)".parse().unwrap();
    let basis = construct_bips(&spec, 3, 5).unwrap();
    let mut c = ZChain::path(&basis.bips()[0].vertices);
    c.add_scaled(&ZChain::path(&basis.bips()[basis.len() - 1].vertices), -3);
    let f = basis.tree_coefficients(&c).unwrap();
    assert_eq!(basis.bips_to_cycle(&f), c);
}

#[test]
fn comb_magnitudes_grow() {
    let g = comb_counterexample_check(10).unwrap();
    assert!(g.green.windows(2).all(|p| p[0] < p[1]));
    assert!(g.red.windows(2).all(|p| p[0] < p[1]));
    assert!(!g.clause_five_holds);
}
