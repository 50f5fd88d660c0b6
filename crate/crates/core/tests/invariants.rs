//! Structural invariants over seeded random instances.

mod common;

use equilibria::circuits::{circuit_eval, AlgebraicCircuit, CircuitBuilder, DomainSpec, Operand};
use equilibria::exact::{int, linf_distance, rat, Rational, RationalMatrix};
use equilibria::lfp::{kleene_lfp, newton_lfp, Monomial, MonotonePolySystem};
use equilibria::local_search::{
    congestion_converge, hopfield_converge, node_stability, pure_equilibria, pure_nash_check, CongestionGame,
    Configuration, HopfieldNet, ImprovementRule, SwitchRule, DEFAULT_STEP_CAP,
};
use equilibria::normal_form::{epsilon_nash_check, nash_map, support_enumeration_nash, SUPPORT_ENUMERATION_CAP};
use equilibria::path_following::{lemke_howson, lemke_howson_run, BimatrixGame};
use equilibria::stochastic::{shapley_operator, shapley_solve, ShapleyGame, ShapleyState};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn hopfield(rng: &mut ChaCha8Rng, n: usize) -> HopfieldNet {
    let thresholds = (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.6) {
                edges.push((u, v, int(rng.gen_range(-5..=5))));
            }
        }
    }
    HopfieldNet::new(thresholds, edges).unwrap()
}

fn bimatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BimatrixGame {
    BimatrixGame::new(common::random_matrix(rng, rows, cols, -6, 6), common::random_matrix(rng, rows, cols, -6, 6)).unwrap()
}

/// Random circuit over `n` inputs built from every operator except division.
fn random_circuit(rng: &mut ChaCha8Rng, n: usize, gates: usize) -> AlgebraicCircuit {
    let mut b = CircuitBuilder::new(n);
    let mut pool: Vec<Operand> = (0..n).map(|j| b.input(j)).collect();
    pool.push(b.constant(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
    for _ in 0..gates {
        let x = pool[rng.gen_range(0..pool.len())].clone();
        let y = pool[rng.gen_range(0..pool.len())].clone();
        let g = match rng.gen_range(0..5) {
            0 => b.add(x, y),
            1 => b.sub(x, y),
            2 => b.mul(x, y),
            3 => b.max(x, y),
            _ => b.min(x, y),
        };
        pool.push(g);
    }
    let outs = (0..n).map(|_| pool[rng.gen_range(n..pool.len())].clone()).collect();
    b.finish(outs)
}

fn monotone_system(rng: &mut ChaCha8Rng, n: usize) -> MonotonePolySystem {
    let polys = (0..n)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            (0..terms)
                .map(|_| Monomial {
                    coef: rat(rng.gen_range(1..=3), 3 * terms as i64 + 1),
                    exponents: (0..n).map(|_| rng.gen_range(0..=2)).collect(),
                })
                .collect()
        })
        .collect();
    MonotonePolySystem::new(polys).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hopfield_runs_end_stable_with_increasing_potential(seed in any::<u64>(), n in 1usize..9, rule in 0u8..3) {
        let mut rng = common::rng(seed);
        let net = hopfield(&mut rng, n);
        let s0 = Configuration::from_mask(n, rng.gen_range(0..1u64 << n));
        let rule = match rule { 0 => SwitchRule::FirstUnstable, 1 => SwitchRule::BestImprovement, _ => SwitchRule::SeededRandom(seed) };
        let run = hopfield_converge(&net, &s0, rule, DEFAULT_STEP_CAP).unwrap();
        for w in run.trace.windows(2) {
            prop_assert_eq!(&w[0].potential_after, &w[1].potential_before);
        }
        for sw in &run.trace {
            prop_assert!(sw.potential_after > sw.potential_before);
        }
        prop_assert!((0..n).all(|v| node_stability(&net, &run.config, v).stable));
    }

    #[test]
    fn congestion_runs_end_in_pure_equilibria(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let k = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=4);
        let strategies: Vec<Vec<Vec<usize>>> = (0..k)
            .map(|_| (0..rng.gen_range(1..=3)).map(|_| vec![rng.gen_range(0..r)]).collect())
            .collect();
        let costs = (0..r).map(|_| (0..=k).map(|_| rng.gen_range(0..=6)).collect()).collect();
        let g = CongestionGame::new(r, strategies, costs).unwrap();
        let s0 = vec![0; k];
        let run = congestion_converge(&g, &s0, ImprovementRule::BestImproving, DEFAULT_STEP_CAP).unwrap();
        for m in &run.trace {
            prop_assert_eq!(m.cost_after - m.cost_before, m.potential_after - m.potential_before);
        }
        prop_assert!(pure_nash_check(&g, &run.profile).holds);
        prop_assert!(pure_equilibria(&g).contains(&run.profile));
    }

    #[test]
    fn lemke_howson_is_exact_from_every_label(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        let mut rng = common::rng(seed);
        let g = bimatrix(&mut rng, rows, cols);
        let nf = g.to_normal_form();
        for label in 0..rows + cols {
            let run = lemke_howson_run(&g, label, None).unwrap();
            prop_assert!(epsilon_nash_check(&nf, &run.profile, &Rational::zero()).unwrap().holds);
            prop_assert_eq!(run.bases.len(), run.pivots);
            let distinct: std::collections::BTreeSet<_> = run.bases.iter().collect();
            prop_assert_eq!(distinct.len(), run.bases.len());
        }
    }

    #[test]
    fn equilibria_are_nash_map_fixed_points(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = bimatrix(&mut rng, 3, 3);
        let nf = g.to_normal_form();
        let eqs = support_enumeration_nash(&nf, SUPPORT_ENUMERATION_CAP).unwrap();
        prop_assert!(!eqs.is_empty());
        prop_assert!(eqs.contains(&lemke_howson(&g, 0).unwrap()));
        for x in &eqs {
            prop_assert_eq!(&nash_map(&nf, x).unwrap(), x);
        }
    }

    #[test]
    fn circuits_round_trip_through_text(seed in any::<u64>(), n in 1usize..4, gates in 0usize..12) {
        let mut rng = common::rng(seed);
        let c = random_circuit(&mut rng, n, gates);
        let back: AlgebraicCircuit = c.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), c.to_string());
        let x = DomainSpec::UnitCube(n).sample(&mut rng, 7);
        prop_assert_eq!(circuit_eval(&back, &x).unwrap(), circuit_eval(&c, &x).unwrap());
    }

    #[test]
    fn domain_samples_are_members(seed in any::<u64>(), blocks in proptest::collection::vec(1usize..4, 1..4)) {
        let mut rng = common::rng(seed);
        let n: usize = blocks.iter().sum();
        for d in [DomainSpec::UnitCube(n), DomainSpec::UnitSimplex(n), DomainSpec::ProductSimplex(blocks.clone())] {
            let x = d.sample(&mut rng, 9);
            prop_assert_eq!(x.len(), d.dimension());
            prop_assert!(d.contains(&x));
        }
    }

    #[test]
    fn monotone_systems_are_monotone_and_iterates_stay_below(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let sys = monotone_system(&mut rng, n);
        let x: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=5), 10)).collect();
        let y: Vec<Rational> = x.iter().map(|v| v + rat(rng.gen_range(0..=5), 10)).collect();
        let (fx, fy) = (sys.eval(&x), sys.eval(&y));
        prop_assert!(fx.iter().zip(&fy).all(|(a, b)| a <= b));
        // Newton and Kleene both approach the least fixed point from below,
        // so each is a post-fixed point x <= F(x)
        let eps = rat(1, 1_000_000);
        for r in [kleene_lfp(&sys, &eps, 100_000), newton_lfp(&sys, &eps, 100)].into_iter().flatten() {
            let f = sys.eval(&r.x);
            prop_assert!(r.x.iter().zip(&f).all(|(a, b)| a <= b));
            prop_assert!(r.x.iter().all(|v| !v.is_negative()));
        }
    }

    #[test]
    fn shapley_operator_is_a_contraction(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = shapley(&mut rng);
        let bound = Rational::one() - g.q();
        let mut v = || (0..g.len()).map(|_| rat(rng.gen_range(-50..=50), rng.gen_range(1..=5))).collect::<Vec<_>>();
        let (x, y) = (v(), v());
        let d = linf_distance(&x, &y);
        let fd = linf_distance(&shapley_operator(&g, &x).unwrap(), &shapley_operator(&g, &y).unwrap());
        prop_assert!(fd <= bound * d);
    }

    #[test]
    fn shapley_values_are_bounded_by_reward_over_stop(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = shapley(&mut rng);
        let s = shapley_solve(&g, &rat(1, 1000)).unwrap();
        let bound = int(10) / g.q() + rat(1, 1000);
        prop_assert!(s.values.iter().all(|v| v.abs() <= bound));
    }
}

fn shapley(rng: &mut ChaCha8Rng) -> ShapleyGame {
    let n = rng.gen_range(1..=3);
    let states = (0..n)
        .map(|_| {
            let mut rewards = RationalMatrix::zeros(2, 2);
            let mut stop = RationalMatrix::zeros(2, 2);
            let mut transitions = vec![RationalMatrix::zeros(2, 2); n];
            for i in 0..2 {
                for j in 0..2 {
                    rewards[(i, j)] = int(rng.gen_range(-10..=10));
                    let s = rng.gen_range(1..=4);
                    stop[(i, j)] = rat(s, 4);
                    transitions[rng.gen_range(0..n)][(i, j)] = rat(4 - s, 4);
                }
            }
            ShapleyState { rewards, stop, transitions }
        })
        .collect();
    ShapleyGame::new(states).unwrap()
}
