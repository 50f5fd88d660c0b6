//! Seeded instance generators shared by the integration tests.
#![allow(dead_code)]

use equilibria::exact::{rat, Rational, RationalMatrix};
use equilibria::stochastic::{MeanPayoffGame, ParityGame, Player, SimpleStochasticGame, SsgNode};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn player(rng: &mut ChaCha8Rng) -> Player {
    if rng.gen_bool(0.5) {
        Player::One
    } else {
        Player::Two
    }
}

/// `k` distinct successors out of `0..n`.
fn successors(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k.min(n));
    all
}

/// An SSG on `n ≥ 3` nodes whose last two nodes are the sinks, owned nodes
/// having one or two successors and random nodes two, with probabilities
/// of denominator at most 4.
pub fn random_ssg(rng: &mut ChaCha8Rng, n: usize) -> SimpleStochasticGame {
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n - 2 {
        let k = rng.gen_range(1..=2);
        let node = match rng.gen_range(0..3) {
            0 => SsgNode::Max(successors(rng, n, k)),
            1 => SsgNode::Min(successors(rng, n, k)),
            _ => {
                let s = successors(rng, n, 2);
                let d = rng.gen_range(2..=4);
                let a = rng.gen_range(1..d);
                SsgNode::Random(vec![(s[0], rat(a, d)), (s[1], rat(d - a, d))])
            }
        };
        nodes.push(node);
    }
    nodes.push(SsgNode::Sink(Player::One));
    nodes.push(SsgNode::Sink(Player::Two));
    SimpleStochasticGame::new(nodes).unwrap()
}

pub fn random_mpg(rng: &mut ChaCha8Rng, n: usize, w: i64) -> MeanPayoffGame {
    let owners = (0..n).map(|_| player(rng)).collect();
    let edges = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=n.min(3));
            successors(rng, n, k).into_iter().map(|v| (v, rng.gen_range(-w..=w))).collect()
        })
        .collect();
    MeanPayoffGame::new(owners, edges).unwrap()
}

pub fn random_parity(rng: &mut ChaCha8Rng, n: usize, max_label: u32) -> ParityGame {
    let owners = (0..n).map(|_| player(rng)).collect();
    let succ = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=n.min(3));
            successors(rng, n, k)
        })
        .collect();
    let labels = (0..n).map(|_| rng.gen_range(1..=max_label)).collect();
    ParityGame::new(owners, succ, labels).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> RationalMatrix {
    let data: Vec<Rational> = (0..rows * cols).map(|_| rat(rng.gen_range(lo..=hi), 1)).collect();
    RationalMatrix::from_vec(rows, cols, data).unwrap()
}
