//! Local-search problems with a potential: Hopfield networks and
//! congestion games, their improvement dynamics, and pure-equilibrium checks.

mod congestion;
mod hopfield;

use num_traits::Signed;

use crate::exact::Rational;
use crate::normal_form::NormalFormGame;

pub use congestion::{
    congestion_converge, congestion_cost, resource_loads, rosenthal_potential, CongestionGame, CongestionRun,
    ImprovementRule, Move, PureProfile,
};
pub use hopfield::{
    hopfield_converge, hopfield_potential, hopfield_to_game, node_stability, stable_configurations, Configuration,
    HopfieldNet, HopfieldRun, NodeStability, SwitchRule, Switch, HOPFIELD_GAME_CAP,
};

/// Default step cap for the improvement drivers.
pub const DEFAULT_STEP_CAP: usize = 1 << 20;

/// A game given by a utility for each player at each pure profile.
pub trait PureGame {
    fn num_players(&self) -> usize;
    fn num_strategies(&self, player: usize) -> usize;
    /// Payoff to `player` (higher is better).
    fn utility(&self, profile: &[usize], player: usize) -> Rational;
}

impl PureGame for NormalFormGame {
    fn num_players(&self) -> usize {
        self.players()
    }

    fn num_strategies(&self, player: usize) -> usize {
        self.strategy_counts()[player]
    }

    fn utility(&self, profile: &[usize], player: usize) -> Rational {
        self.payoff(player, profile).clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub player: usize,
    pub strategy: usize,
    pub improvement: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureNashReport {
    pub holds: bool,
    /// A unilateral deviation with the largest improvement, lowest player and
    /// strategy index on ties.
    pub best_deviation: Option<Deviation>,
}

/// Holds iff no player strictly gains by a unilateral switch.
pub fn pure_nash_check<G: PureGame + ?Sized>(g: &G, profile: &[usize]) -> PureNashReport {
    let mut best: Option<Deviation> = None;
    let mut s = profile.to_vec();
    for i in 0..g.num_players() {
        let base = g.utility(profile, i);
        for j in 0..g.num_strategies(i) {
            if j == profile[i] {
                continue;
            }
            s[i] = j;
            let improvement = g.utility(&s, i) - &base;
            if improvement.is_positive() && best.as_ref().is_none_or(|b| improvement > b.improvement) {
                best = Some(Deviation { player: i, strategy: j, improvement });
            }
        }
        s[i] = profile[i];
    }
    PureNashReport { holds: best.is_none(), best_deviation: best }
}

/// Every pure equilibrium, by exhaustive enumeration in lexicographic order.
pub fn pure_equilibria<G: PureGame + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let k = g.num_players();
    let counts: Vec<usize> = (0..k).map(|i| g.num_strategies(i)).collect();
    let mut out = Vec::new();
    let mut s = vec![0; k];
    loop {
        if pure_nash_check(g, &s).holds {
            out.push(s.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            s[i] += 1;
            if s[i] < counts[i] {
                break;
            }
            s[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalMatrix;

    #[test]
    fn matching_pennies_has_no_pure_equilibrium() {
        let a = RationalMatrix::from_i64(&[&[1, -1], &[-1, 1]]);
        let b = RationalMatrix::from_i64(&[&[-1, 1], &[1, -1]]);
        let g = NormalFormGame::bimatrix(&a, &b).unwrap();
        for s in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert!(!pure_nash_check(&g, &s).holds);
        }
        assert!(pure_equilibria(&g).is_empty());
    }

    #[test]
    fn single_strategy_game_holds() {
        let a = RationalMatrix::from_i64(&[&[5]]);
        let g = NormalFormGame::bimatrix(&a, &a).unwrap();
        let r = pure_nash_check(&g, &[0, 0]);
        assert!(r.holds);
        assert_eq!(r.best_deviation, None);
    }
}
