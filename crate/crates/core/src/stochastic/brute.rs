//! Exhaustive search over positional strategy pairs, used as an oracle.

use num_bigint::BigInt;

use super::ssg::absorption;
use super::{MeanPayoffGame, ParityGame, Player, PositionalStrategy, SimpleStochasticGame};
use crate::exact::Rational;
use crate::{Error, Result};

/// Largest number of strategy pairs the oracle will enumerate.
pub const BRUTE_FORCE_PAIR_CAP: u128 = 1_000_000;

pub trait PositionalGame {
    /// Per-node optimum: values, or winners for parity games.
    type Optimum;

    fn brute_force(&self) -> Result<Self::Optimum>;
}

/// Max-min optimum over all positional pairs, evaluating each induced
/// play exactly.
pub fn brute_force_positional<G: PositionalGame>(g: &G) -> Result<G::Optimum> {
    g.brute_force()
}

/// All strategies of a player owning the nodes where `owned[u]` is `Some`.
fn strategies(owned: &[Option<Vec<usize>>]) -> Vec<PositionalStrategy> {
    let mut out = vec![PositionalStrategy { choices: vec![None; owned.len()] }];
    for (u, s) in owned.iter().enumerate() {
        let Some(s) = s else { continue };
        out = out
            .into_iter()
            .flat_map(|base| {
                s.iter().map(move |&w| {
                    let mut t = base.clone();
                    t.choices[u] = Some(w);
                    t
                })
            })
            .collect();
    }
    out
}

fn max_min<T: Ord + Clone>(
    p1: &[Option<Vec<usize>>],
    p2: &[Option<Vec<usize>>],
    mut eval: impl FnMut(&PositionalStrategy, &PositionalStrategy) -> Result<Vec<T>>,
) -> Result<Vec<T>> {
    let count = |o: &[Option<Vec<usize>>]| o.iter().flatten().fold(1u128, |a, s| a.saturating_mul(s.len() as u128));
    let pairs = count(p1).saturating_mul(count(p2));
    if pairs > BRUTE_FORCE_PAIR_CAP {
        return Err(Error::SizeCapExceeded { what: "positional strategy pairs", size: pairs, cap: BRUTE_FORCE_PAIR_CAP });
    }
    let s2s = strategies(p2);
    let mut best: Option<Vec<T>> = None;
    for s1 in strategies(p1) {
        let mut worst: Option<Vec<T>> = None;
        for s2 in &s2s {
            let v = eval(&s1, s2)?;
            worst = Some(match worst {
                None => v,
                Some(w) => w.into_iter().zip(v).map(|(a, b)| a.min(b)).collect(),
            });
        }
        let worst = worst.expect("at least one strategy");
        best = Some(match best {
            None => worst,
            Some(b) => b.into_iter().zip(worst).map(|(a, c)| a.max(c)).collect(),
        });
    }
    Ok(best.expect("at least one strategy"))
}

impl PositionalGame for SimpleStochasticGame {
    type Optimum = Vec<Rational>;

    fn brute_force(&self) -> Result<Vec<Rational>> {
        let owned = |p: Player| (0..self.len()).map(|u| (self.owner(u) == Some(p)).then(|| self.successors(u))).collect::<Vec<_>>();
        max_min(&owned(Player::One), &owned(Player::Two), |s1, s2| absorption(self, s1, s2))
    }
}

/// For a successor function with out-degree one, the cycle each start
/// node's play ends in, as a list of nodes.
fn lasso_cycles(next: &[usize]) -> Vec<Vec<usize>> {
    (0..next.len())
        .map(|start| {
            let mut seen = vec![usize::MAX; next.len()];
            let mut path = Vec::new();
            let mut u = start;
            while seen[u] == usize::MAX {
                seen[u] = path.len();
                path.push(u);
                u = next[u];
            }
            path.split_off(seen[u])
        })
        .collect()
}

fn joint_next(owners: &[Player], s1: &PositionalStrategy, s2: &PositionalStrategy) -> Vec<usize> {
    owners
        .iter()
        .enumerate()
        .map(|(u, p)| if *p == Player::One { s1.choice(u) } else { s2.choice(u) }.expect("complete strategy"))
        .collect()
}

impl PositionalGame for MeanPayoffGame {
    type Optimum = Vec<Rational>;

    fn brute_force(&self) -> Result<Vec<Rational>> {
        let owned = |p: Player| {
            (0..self.len()).map(|u| (self.owners()[u] == p).then(|| self.successors(u))).collect::<Vec<_>>()
        };
        max_min(&owned(Player::One), &owned(Player::Two), |s1, s2| {
            let next = joint_next(self.owners(), s1, s2);
            Ok(lasso_cycles(&next)
                .into_iter()
                .map(|c| {
                    let total: i128 = c.iter().map(|&u| self.reward(u, next[u]) as i128).sum();
                    Rational::new(BigInt::from(total), BigInt::from(c.len()))
                })
                .collect())
        })
    }
}

impl PositionalGame for ParityGame {
    type Optimum = Vec<Player>;

    fn brute_force(&self) -> Result<Vec<Player>> {
        let owned = |p: Player| {
            (0..self.len()).map(|u| (self.owners()[u] == p).then(|| self.successors()[u].clone())).collect::<Vec<_>>()
        };
        // 1 when the cycle's top label is odd, so player one maximizes
        let wins = max_min(&owned(Player::One), &owned(Player::Two), |s1, s2| {
            let next = joint_next(self.owners(), s1, s2);
            Ok(lasso_cycles(&next)
                .into_iter()
                .map(|c| c.iter().map(|&u| self.labels()[u]).max().expect("nonempty") % 2)
                .collect())
        })?;
        Ok(wins.into_iter().map(|w| if w == 1 { Player::One } else { Player::Two }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::stochastic::SsgNode;

    #[test]
    fn ssg_chain_is_one_half() {
        let g = SimpleStochasticGame::new(vec![
            SsgNode::Max(vec![3, 1]),
            SsgNode::Random(vec![(2, rat(1, 2)), (3, rat(1, 2))]),
            SsgNode::Sink(Player::One),
            SsgNode::Sink(Player::Two),
        ])
        .unwrap();
        assert_eq!(brute_force_positional(&g).unwrap()[0], rat(1, 2));
    }

    #[test]
    fn mpg_choice_is_five() {
        let g = MeanPayoffGame::new(vec![Player::One, Player::Two], vec![vec![(0, 2), (1, 4)], vec![(0, 6)]]).unwrap();
        assert_eq!(brute_force_positional(&g).unwrap(), vec![int(5), int(5)]);
    }

    #[test]
    fn single_choice_matches_direct_evaluation() {
        let g = MeanPayoffGame::new(vec![Player::Two; 3], vec![vec![(1, 1)], vec![(2, 2)], vec![(0, 6)]]).unwrap();
        assert_eq!(brute_force_positional(&g).unwrap(), vec![int(3); 3]);
        let p = ParityGame::new(vec![Player::One; 2], vec![vec![1], vec![0]], vec![3, 2]).unwrap();
        assert_eq!(brute_force_positional(&p).unwrap(), vec![Player::One; 2]);
    }

    #[test]
    fn cap_enforced() {
        let n = 21;
        let edges = (0..n).map(|u| vec![(u, 0), ((u + 1) % n, 1)]).collect();
        let g = MeanPayoffGame::new(vec![Player::One; n], edges).unwrap();
        assert!(matches!(brute_force_positional(&g), Err(Error::SizeCapExceeded { .. })));
    }
}
