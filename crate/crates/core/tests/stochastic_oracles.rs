mod common;

use equilibria::stochastic::*;

#[test]
fn ssg_both_methods_match_brute_force() {
    let mut rng = common::rng(7);
    for n in 3..=7 {
        for _ in 0..40 {
            let g = common::random_ssg(&mut rng, n);
            let truth = brute_force_positional(&g).unwrap();
            for m in [SsgMethod::StrategyImprovement, SsgMethod::Discounted] {
                let s = ssg_solve(&g, m, &SsgParams::default()).unwrap();
                assert_eq!(s.values, truth, "{m:?} on {g:?}");
                assert!(certify_ssg(&g, &s.values, &s.max_strategy, &s.min_strategy));
            }
        }
    }
}

#[test]
fn mpg_matches_brute_force() {
    let mut rng = common::rng(8);
    for i in 0..200 {
        let g = common::random_mpg(&mut rng, 1 + i % 6, 10);
        let s = mpg_solve(&g).unwrap();
        assert_eq!(s.values, brute_force_positional(&g).unwrap(), "{g:?}");
    }
}

#[test]
fn parity_matches_brute_force() {
    let mut rng = common::rng(9);
    for i in 0..200 {
        let g = common::random_parity(&mut rng, 1 + i % 6, 4);
        let s = parity_solve(&g, DEFAULT_PARITY_LABEL_CAP).unwrap();
        assert_eq!(s.winners, brute_force_positional(&g).unwrap(), "{g:?}");
    }
}
