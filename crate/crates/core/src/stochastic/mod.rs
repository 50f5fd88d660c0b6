//! Stochastic and infinite-duration graph games.
//!
//! Player one maximizes (reaches the 1-sink, maximizes mean payoff, wins on
//! odd parity); player two minimizes.

mod brute;
mod mpg;
mod shapley;
mod ssg;

pub use brute::{brute_force_positional, PositionalGame, BRUTE_FORCE_PAIR_CAP};
pub use mpg::{
    certify_mpg, certify_parity, mpg_solve, parity_solve, parity_to_mpg, parity_winner, MeanPayoffGame, MpgSolution, ParityGame,
    ParityOutcome, ParitySolution, DEFAULT_PARITY_LABEL_CAP, ZP_WORK_CAP,
};
pub use shapley::{
    shapley_iteration_bound, shapley_operator, shapley_operator_solutions, shapley_solve, ShapleyGame, ShapleySolution, ShapleyState};
pub use ssg::{
    certify_ssg, certify_ssg_report, ssg_decision, ssg_default_beta, ssg_operator, ssg_solve, SimpleStochasticGame,
    SsgCertificate, SsgChecks, SsgMethod, SsgNode, SsgParams, SsgSolution, DEFAULT_SSG_STEP_CAP, DISCOUNT_RETRIES,
};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }

    pub fn from_number(n: u64) -> Option<Self> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

/// One chosen successor per owned node; `None` at nodes the player does not
/// own.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    pub choices: Vec<Option<usize>>,
}

impl PositionalStrategy {
    pub fn choice(&self, u: usize) -> Option<usize> {
        self.choices.get(u).copied().flatten()
    }

    /// `succ(u)` is `Some(successors)` at owned nodes and `None` elsewhere;
    /// the strategy must pick one of them exactly at the owned nodes.
    pub(crate) fn validate(&self, succ: impl Fn(usize) -> Option<Vec<usize>>, n: usize) -> Result<()> {
        if self.choices.len() != n {
            return Err(Error::dims(format!("strategy covers {} nodes, game has {n}", self.choices.len())));
        }
        for (u, c) in self.choices.iter().enumerate() {
            match (succ(u), c) {
                (Some(s), Some(w)) if s.contains(w) => {}
                (None, None) => {}
                (Some(_), Some(w)) => return Err(Error::invalid(format!("strategy picks missing edge {u} -> {w}"))),
                (Some(_), None) => return Err(Error::invalid(format!("strategy has no choice at owned node {u}"))),
                (None, Some(_)) => return Err(Error::invalid(format!("strategy chooses at node {u} it does not own"))),
            }
        }
        Ok(())
    }
}

/// Successor lists with a sanity check shared by the graph games.
pub(crate) fn check_successors(succ: &[Vec<usize>], n: usize) -> Result<()> {
    for (u, s) in succ.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::invalid(format!("node {u} has no successor")));
        }
        if let Some(&w) = s.iter().find(|&&w| w >= n) {
            return Err(Error::invalid(format!("edge {u} -> {w} leaves the graph")));
        }
    }
    Ok(())
}

/// Strongly connected components in topological order (sources first).
pub(crate) fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (u, s) in succ.iter().enumerate() {
        for &w in s {
            pred[w].push(u);
        }
    }
    // Kosaraju: finishing order on G, then components on the reverse graph.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < succ[u].len() {
                stack.push((u, i + 1));
                let w = succ[u][i];
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &p in &pred[u] {
                if comp[p] == usize::MAX {
                    comp[p] = id;
                    members.push(p);
                }
            }
        }
        out.push(members);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_order_is_topological() {
        // 0 -> 1 <-> 2 -> 3 (self-loop)
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        let c = sccs(&succ);
        let pos = |u: usize| c.iter().position(|m| m.contains(&u)).unwrap();
        assert_eq!(c.len(), 3);
        assert!(pos(0) < pos(1) && pos(1) == pos(2) && pos(2) < pos(3));
    }
}
