use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PureGame;
use crate::exact::Rational;
use crate::{Error, Partial, Result};

/// One chosen strategy index per player.
pub type PureProfile = Vec<usize>;

/// Congestion game with explicit strategy families and integer resource
/// costs `d_r(c)` for `c` users, `c = 0..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionGame {
    resources: usize,
    strategies: Vec<Vec<Vec<usize>>>,
    costs: Vec<Vec<i64>>,
}

impl CongestionGame {
    /// `strategies[i][j]` is the resource set of strategy `j` of player `i`;
    /// `costs[r]` has `k + 1` entries, entry 0 being unused.
    pub fn new(resources: usize, strategies: Vec<Vec<Vec<usize>>>, costs: Vec<Vec<i64>>) -> Result<Self> {
        let k = strategies.len();
        if k == 0 {
            return Err(Error::invalid("congestion game needs at least one player"));
        }
        if costs.len() != resources {
            return Err(Error::dims(format!("{} cost tables for {resources} resources", costs.len())));
        }
        if let Some(r) = costs.iter().position(|d| d.len() != k + 1) {
            return Err(Error::dims(format!("cost table of resource {r} must have {} entries", k + 1)));
        }
        let mut normalized = Vec::with_capacity(k);
        for (i, family) in strategies.into_iter().enumerate() {
            if family.is_empty() {
                return Err(Error::invalid(format!("player {i} has no strategies")));
            }
            let mut fam = Vec::with_capacity(family.len());
            for mut set in family {
                if let Some(r) = set.iter().find(|&&r| r >= resources) {
                    return Err(Error::invalid(format!("player {i} uses unknown resource {r}")));
                }
                set.sort_unstable();
                set.dedup();
                fam.push(set);
            }
            normalized.push(fam);
        }
        Ok(CongestionGame { resources, strategies: normalized, costs })
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn resources(&self) -> usize {
        self.resources
    }

    pub fn strategies(&self) -> &[Vec<Vec<usize>>] {
        &self.strategies
    }

    pub fn costs(&self) -> &[Vec<i64>] {
        &self.costs
    }

    pub fn validate_profile(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.players() {
            return Err(Error::dims(format!("profile has {} entries for {} players", s.len(), self.players())));
        }
        for (i, (&j, fam)) in s.iter().zip(&self.strategies).enumerate() {
            if j >= fam.len() {
                return Err(Error::invalid(format!("player {i} has no strategy {j}")));
            }
        }
        Ok(())
    }
}

/// `n_r(s)` for every resource.
pub fn resource_loads(g: &CongestionGame, s: &[usize]) -> Vec<usize> {
    let mut loads = vec![0; g.resources];
    for (fam, &j) in g.strategies.iter().zip(s) {
        for &r in &fam[j] {
            loads[r] += 1;
        }
    }
    loads
}

fn cost_with_loads(g: &CongestionGame, loads: &[usize], i: usize, j: usize) -> i128 {
    g.strategies[i][j].iter().map(|&r| i128::from(g.costs[r][loads[r]])).sum()
}

/// `Σ_{r∈s_i} d_r(n_r(s))`.
pub fn congestion_cost(g: &CongestionGame, s: &[usize], i: usize) -> i128 {
    cost_with_loads(g, &resource_loads(g, s), i, s[i])
}

/// `Φ(s) = Σ_r Σ_{c=1}^{n_r(s)} d_r(c)`.
pub fn rosenthal_potential(g: &CongestionGame, s: &[usize]) -> i128 {
    resource_loads(g, s)
        .iter()
        .zip(&g.costs)
        .map(|(&n, d)| d[1..=n].iter().map(|&c| i128::from(c)).sum::<i128>())
        .sum()
}

impl PureGame for CongestionGame {
    fn num_players(&self) -> usize {
        self.players()
    }

    fn num_strategies(&self, player: usize) -> usize {
        self.strategies[player].len()
    }

    fn utility(&self, profile: &[usize], player: usize) -> Rational {
        Rational::from_integer((-congestion_cost(self, profile, player)).into())
    }
}

/// Which improving move is taken next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImprovementRule {
    /// Lowest player with an improving move, switching to its best reply
    /// (lowest strategy index on ties).
    FirstImproving,
    /// Largest cost decrease over all players, lowest indices on ties.
    BestImproving,
    /// Uniform among all improving (player, strategy) pairs.
    SeededRandom(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub player: usize,
    pub from: usize,
    pub to: usize,
    pub cost_before: i128,
    pub cost_after: i128,
    pub potential_before: i128,
    pub potential_after: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionRun {
    pub profile: PureProfile,
    pub trace: Vec<Move>,
}

/// Cost of player `i` switching to `j` with everyone else fixed.
fn deviation_cost(g: &CongestionGame, loads: &mut [usize], s: &[usize], i: usize, j: usize) -> i128 {
    if j == s[i] {
        return cost_with_loads(g, loads, i, j);
    }
    for &r in &g.strategies[i][s[i]] {
        loads[r] -= 1;
    }
    for &r in &g.strategies[i][j] {
        loads[r] += 1;
    }
    let c = cost_with_loads(g, loads, i, j);
    for &r in &g.strategies[i][j] {
        loads[r] -= 1;
    }
    for &r in &g.strategies[i][s[i]] {
        loads[r] += 1;
    }
    c
}

/// Unilateral improvement dynamics. Every move lowers the mover's cost and
/// the potential by the same amount, so the run cannot cycle.
pub fn congestion_converge(
    g: &CongestionGame,
    s0: &[usize],
    rule: ImprovementRule,
    step_cap: usize,
) -> Result<CongestionRun> {
    g.validate_profile(s0)?;
    let mut s = s0.to_vec();
    let mut potential = rosenthal_potential(g, &s);
    let mut trace = Vec::new();
    let mut rng = match rule {
        ImprovementRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    loop {
        let mut loads = resource_loads(g, &s);
        // (player, strategy, current cost, new cost)
        let mut improving: Vec<(usize, usize, i128, i128)> = Vec::new();
        for i in 0..g.players() {
            let cur = cost_with_loads(g, &loads, i, s[i]);
            for j in 0..g.strategies[i].len() {
                if j != s[i] {
                    let c = deviation_cost(g, &mut loads, &s, i, j);
                    if c < cur {
                        improving.push((i, j, cur, c));
                    }
                }
            }
        }
        if improving.is_empty() {
            return Ok(CongestionRun { profile: s, trace });
        }
        if trace.len() >= step_cap {
            let partial = Partial::Congestion(CongestionRun { profile: s, trace });
            return Err(Error::StepCapExceeded { cap: step_cap, partial: Box::new(partial) });
        }
        let gain = |m: &(usize, usize, i128, i128)| m.2 - m.3;
        let chosen = match rule {
            ImprovementRule::FirstImproving => {
                let p = improving[0].0;
                let mut best = improving[0];
                for m in improving.iter().take_while(|m| m.0 == p) {
                    if m.3 < best.3 {
                        best = *m;
                    }
                }
                best
            }
            ImprovementRule::BestImproving => {
                let mut best = improving[0];
                for m in &improving[1..] {
                    if gain(m) > gain(&best) {
                        best = *m;
                    }
                }
                best
            }
            ImprovementRule::SeededRandom(_) => {
                let rng = rng.as_mut().expect("seeded rule has a generator");
                improving[rng.gen_range(0..improving.len())]
            }
        };
        let (player, to, cost_before, cost_after) = chosen;
        let from = s[player];
        s[player] = to;
        let after = rosenthal_potential(g, &s);
        trace.push(Move { player, from, to, cost_before, cost_after, potential_before: potential, potential_after: after });
        potential = after;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::local_search::{pure_equilibria, pure_nash_check, Deviation};

    fn example() -> CongestionGame {
        CongestionGame::new(2, vec![vec![vec![0], vec![1]]; 2], vec![vec![0, 1, 5], vec![0, 2, 6]]).unwrap()
    }

    fn shared() -> CongestionGame {
        CongestionGame::new(1, vec![vec![vec![0]]; 2], vec![vec![0, 1, 3]]).unwrap()
    }

    #[test]
    fn cost_examples() {
        let solo = CongestionGame::new(1, vec![vec![vec![0]]], vec![vec![0, 7]]).unwrap();
        assert_eq!(congestion_cost(&solo, &[0], 0), 7);
        assert_eq!(congestion_cost(&shared(), &[0, 0], 0), 3);
        assert_eq!(congestion_cost(&shared(), &[0, 0], 1), 3);
        let g = example();
        assert_eq!((congestion_cost(&g, &[0, 1], 0), congestion_cost(&g, &[0, 1], 1)), (1, 2));
        assert_eq!((congestion_cost(&g, &[0, 0], 0), congestion_cost(&g, &[1, 1], 1)), (5, 6));
    }

    #[test]
    fn potential_examples() {
        let empty = CongestionGame::new(1, vec![vec![vec![]]; 2], vec![vec![0, 4, 4]]).unwrap();
        assert_eq!(rosenthal_potential(&empty, &[0, 0]), 0);
        assert_eq!(rosenthal_potential(&shared(), &[0, 0]), 4);
        assert_eq!(rosenthal_potential(&example(), &[0, 1]), 3);
    }

    #[test]
    fn converge_examples() {
        let g = example();
        let run = congestion_converge(&g, &[0, 1], ImprovementRule::FirstImproving, 10).unwrap();
        assert_eq!(run.profile, vec![0, 1]);
        assert!(run.trace.is_empty());
        for rule in [ImprovementRule::FirstImproving, ImprovementRule::BestImproving, ImprovementRule::SeededRandom(3)] {
            let run = congestion_converge(&g, &[0, 0], rule, 10).unwrap();
            assert!(run.profile == vec![0, 1] || run.profile == vec![1, 0]);
            for m in &run.trace {
                assert_eq!(m.cost_before - m.cost_after, m.potential_before - m.potential_after);
            }
        }
        let single = CongestionGame::new(3, vec![vec![vec![0], vec![1, 2], vec![2]]], vec![vec![0, 4], vec![0, 1], vec![0, 1]])
            .unwrap();
        let run = congestion_converge(&single, &[0], ImprovementRule::FirstImproving, 10).unwrap();
        assert_eq!(run.profile, vec![2]);
    }

    #[test]
    fn nash_check_examples() {
        let g = example();
        let r = pure_nash_check(&g, &[0, 0]);
        assert!(!r.holds);
        assert_eq!(r.best_deviation, Some(Deviation { player: 0, strategy: 1, improvement: int(3) }));
        assert!(pure_nash_check(&shared(), &[0, 0]).holds);
        assert_eq!(pure_equilibria(&g), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn invalid_games_rejected() {
        assert!(CongestionGame::new(1, vec![vec![]], vec![vec![0, 1]]).is_err());
        assert!(CongestionGame::new(1, vec![vec![vec![1]]], vec![vec![0, 1]]).is_err());
        assert!(CongestionGame::new(1, vec![vec![vec![0]]], vec![vec![0]]).is_err());
        assert!(example().validate_profile(&[0, 2]).is_err());
    }
}
