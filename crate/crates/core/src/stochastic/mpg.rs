use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{check_successors, sccs, Player, PositionalStrategy};
use crate::exact::{rational_reconstruct, Rational};
use crate::{Error, Result};

/// Largest `k · |E|` the finite-horizon iteration will attempt.
pub const ZP_WORK_CAP: u128 = 1 << 34;
pub const DEFAULT_PARITY_LABEL_CAP: u32 = 16;

/// Graph game with integer edge rewards; player one maximizes the long-run
/// average reward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanPayoffGame {
    owners: Vec<Player>,
    edges: Vec<Vec<(usize, i64)>>,
}

impl MeanPayoffGame {
    pub fn new(owners: Vec<Player>, edges: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        if owners.len() != edges.len() {
            return Err(Error::dims("owner list and edge lists differ in length"));
        }
        if owners.is_empty() {
            return Err(Error::invalid("game needs at least one node"));
        }
        let succ: Vec<Vec<usize>> = edges.iter().map(|e| e.iter().map(|(w, _)| *w).collect()).collect();
        check_successors(&succ, owners.len())?;
        for (u, s) in succ.iter().enumerate() {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::invalid(format!("node {u} lists a successor twice")));
            }
        }
        Ok(MeanPayoffGame { owners, edges })
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn edges(&self) -> &[Vec<(usize, i64)>] {
        &self.edges
    }

    /// `W = max |r(e)|`, at least 1.
    pub fn max_abs_reward(&self) -> i64 {
        self.edges.iter().flatten().map(|(_, r)| r.saturating_abs()).max().unwrap_or(0).max(1)
    }

    pub(crate) fn reward(&self, u: usize, w: usize) -> i64 {
        self.edges[u].iter().find(|(t, _)| *t == w).expect("edge exists").1
    }

    pub(crate) fn successors(&self, u: usize) -> Vec<usize> {
        self.edges[u].iter().map(|(w, _)| *w).collect()
    }

    pub(crate) fn validate_strategy(&self, s: &PositionalStrategy, p: Player) -> Result<()> {
        s.validate(|u| (self.owners[u] == p).then(|| self.successors(u)), self.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpgSolution {
    pub values: Vec<Rational>,
    pub max_strategy: PositionalStrategy,
    pub min_strategy: PositionalStrategy,
    /// Horizon `k` of the finite-horizon iteration.
    pub horizon: u64,
}

/// `v_k` for `k` steps, over `i64` with the overflow ruled out up front.
fn finite_horizon(g: &MeanPayoffGame, k: u64) -> Vec<i64> {
    let n = g.len();
    let mut start = Vec::with_capacity(n + 1);
    let mut heads = Vec::new();
    let mut rewards = Vec::new();
    for e in &g.edges {
        start.push(heads.len());
        for &(w, r) in e {
            heads.push(w);
            rewards.push(r);
        }
    }
    start.push(heads.len());
    let maxing: Vec<bool> = g.owners.iter().map(|&p| p == Player::One).collect();
    let mut v = vec![0i64; n];
    let mut next = vec![0i64; n];
    for _ in 0..k {
        for u in 0..n {
            let (lo, hi) = (start[u], start[u + 1]);
            let mut best = rewards[lo] + v[heads[lo]];
            if maxing[u] {
                for e in lo + 1..hi {
                    best = best.max(rewards[e] + v[heads[e]]);
                }
            } else {
                for e in lo + 1..hi {
                    best = best.min(rewards[e] + v[heads[e]]);
                }
            }
            next[u] = best;
        }
        std::mem::swap(&mut v, &mut next);
    }
    v
}

/// Least energy levels for `energy` when every other node is adversarial:
/// `f(u) = min/max_w max(0, f(w) − w(u, w))`, `None` for ⊤.
fn progress_measure(succ: &[Vec<(usize, i128)>], energy: &[bool]) -> Vec<Option<i128>> {
    let n = succ.len();
    let top: i128 = succ.iter().map(|e| e.iter().map(|(_, w)| (-w).max(0)).max().unwrap_or(0)).sum();
    let mut f: Vec<Option<i128>> = vec![Some(0); n];
    let lift = |f: &[Option<i128>], u: usize| -> Option<i128> {
        let cand = succ[u].iter().map(|&(w, c)| f[w].map(|x| (x - c).max(0)).filter(|&x| x <= top));
        if energy[u] {
            cand.fold(None, |acc, x| match (acc, x) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(a.min(b)),
            })
        } else {
            cand.collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0))
        }
    };
    let mut pred = vec![Vec::new(); n];
    for (u, e) in succ.iter().enumerate() {
        for &(w, _) in e {
            pred[w].push(u);
        }
    }
    let mut queue: std::collections::VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        if f[u].is_none() {
            continue;
        }
        let nf = lift(&f, u);
        let raised = match (nf, f[u]) {
            (None, _) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        };
        if raised {
            f[u] = nf;
            for &p in &pred[u] {
                if !queued[p] {
                    queued[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    f
}

/// Positional choices for `p` on the nodes of value `c = a/b`, from the
/// energy game with weights shifted to make `c` the break-even mean.
fn class_strategy(g: &MeanPayoffGame, values: &[Rational], c: &Rational, p: Player, out: &mut [Option<usize>]) -> Result<()> {
    let members: Vec<usize> = (0..g.len()).filter(|&u| values[u] == *c).collect();
    let mut local = vec![usize::MAX; g.len()];
    for (i, &u) in members.iter().enumerate() {
        local[u] = i;
    }
    let (a, b) = (c.numer().clone(), c.denom().clone());
    let a = i128::try_from(a).map_err(|_| Error::invalid("value numerator too large"))?;
    let b = i128::try_from(b).map_err(|_| Error::invalid("value denominator too large"))?;
    let sign = if p == Player::One { 1 } else { -1 };
    let succ: Vec<Vec<(usize, i128)>> = members
        .iter()
        .map(|&u| {
            g.edges[u]
                .iter()
                .filter(|(w, _)| local[*w] != usize::MAX)
                .map(|&(w, r)| (local[w], sign * (b * r as i128 - a)))
                .collect()
        })
        .collect();
    if let Some(i) = succ.iter().position(Vec::is_empty) {
        return Err(Error::CertificationFailed(format!("node {} has no successor of equal value", members[i])));
    }
    let energy: Vec<bool> = members.iter().map(|&u| g.owners[u] == p).collect();
    let f = progress_measure(&succ, &energy);
    for (i, &u) in members.iter().enumerate() {
        if !energy[i] {
            continue;
        }
        let choice = succ[i]
            .iter()
            .filter_map(|&(w, c)| f[w].map(|x| ((x - c).max(0), w)))
            .min()
            .map(|(_, w)| members[w]);
        match (f[i], choice) {
            (Some(_), Some(w)) => out[u] = Some(w),
            _ => return Err(Error::CertificationFailed(format!("player {} cannot hold value {c} at node {u}", p.number()))),
        }
    }
    Ok(())
}

/// Per node, the extreme cycle mean reachable in the one-player graph left
/// after fixing `fixed` for its owner.
fn reachable_cycle_means(g: &MeanPayoffGame, fixed: &PositionalStrategy, owner: Player) -> Vec<Rational> {
    let n = g.len();
    let succ: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|u| match (g.owners[u] == owner, fixed.choice(u)) {
            (true, Some(w)) => vec![(w, g.reward(u, w))],
            _ => g.edges[u].clone(),
        })
        .collect();
    // the remaining player minimizes when player one is fixed
    let minimize = owner == Player::One;
    let plain: Vec<Vec<usize>> = succ.iter().map(|e| e.iter().map(|(w, _)| *w).collect()).collect();
    let comps = sccs(&plain);
    let mut comp_of = vec![0; n];
    for (i, c) in comps.iter().enumerate() {
        for &u in c {
            comp_of[u] = i;
        }
    }
    let better = |a: &Rational, b: &Rational| if minimize { a < b } else { a > b };
    let mut best: Vec<Option<Rational>> = vec![None; comps.len()];
    for (i, c) in comps.iter().enumerate().rev() {
        let mut cur = karp_mean(&succ, c, &comp_of, i, minimize);
        for &u in c {
            for (w, _) in &succ[u] {
                if comp_of[*w] != i {
                    let cand = best[comp_of[*w]].clone().expect("later components are done");
                    if cur.as_ref().is_none_or(|m| better(&cand, m)) {
                        cur = Some(cand);
                    }
                }
            }
        }
        best[i] = cur;
    }
    (0..n).map(|u| best[comp_of[u]].clone().expect("every node reaches a cycle")).collect()
}

/// Karp's extreme cycle mean inside one strongly connected component.
fn karp_mean(succ: &[Vec<(usize, i64)>], comp: &[usize], comp_of: &[usize], id: usize, minimize: bool) -> Option<Rational> {
    let m = comp.len();
    let has_edge = comp.iter().any(|&u| succ[u].iter().any(|(w, _)| comp_of[*w] == id));
    if !has_edge {
        return None;
    }
    let mut local = std::collections::HashMap::new();
    for (i, &u) in comp.iter().enumerate() {
        local.insert(u, i);
    }
    let sgn: i128 = if minimize { 1 } else { -1 };
    // d[k][v]: least signed weight of a k-edge walk from comp[0] to v
    let mut d = vec![vec![None::<i128>; m]; m + 1];
    d[0][0] = Some(0);
    for k in 1..=m {
        for (i, &u) in comp.iter().enumerate() {
            let Some(du) = d[k - 1][i] else { continue };
            for &(w, r) in &succ[u] {
                if comp_of[w] != id {
                    continue;
                }
                let j = local[&w];
                let cand = du + sgn * r as i128;
                if d[k][j].is_none_or(|x| cand < x) {
                    d[k][j] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..m {
        let Some(dn) = d[m][v] else { continue };
        let worst = (0..m)
            .filter_map(|k| d[k][v].map(|dk| Rational::new(BigInt::from(dn - dk), BigInt::from((m - k) as u64))))
            .max()
            .expect("k = 0 or a shorter walk exists");
        if best.as_ref().is_none_or(|b| worst < *b) {
            best = Some(worst);
        }
    }
    best.map(|b| if minimize { b } else { -b })
}

/// Exact check that `s1` guarantees at least `values` and `s2` at most
/// `values`, by cycle means of the two one-player graphs.
pub fn certify_mpg(g: &MeanPayoffGame, values: &[Rational], s1: &PositionalStrategy, s2: &PositionalStrategy) -> bool {
    if values.len() != g.len()
        || g.validate_strategy(s1, Player::One).is_err()
        || g.validate_strategy(s2, Player::Two).is_err()
    {
        return false;
    }
    let low = reachable_cycle_means(g, s1, Player::One);
    let high = reachable_cycle_means(g, s2, Player::Two);
    (0..g.len()).all(|u| low[u] >= values[u] && high[u] <= values[u])
}

/// Finite-horizon values `v_k / k` with `k = 4 n³ W`, rounded to the nearest
/// fraction with denominator at most `n`, then certified.
pub fn mpg_solve(g: &MeanPayoffGame) -> Result<MpgSolution> {
    let n = g.len() as u128;
    let w = g.max_abs_reward() as u128;
    let k = 4 * n * n * n * w;
    let edges: u128 = g.edges.iter().map(|e| e.len() as u128).sum();
    if k.saturating_mul(edges) > ZP_WORK_CAP {
        return Err(Error::SizeCapExceeded { what: "finite-horizon work k·|E|", size: k.saturating_mul(edges), cap: ZP_WORK_CAP });
    }
    if k.saturating_mul(w) > i64::MAX as u128 / 2 {
        return Err(Error::SizeCapExceeded { what: "finite-horizon payoff k·W", size: k.saturating_mul(w), cap: i64::MAX as u128 / 2 });
    }
    let k = k as u64;
    let vk = finite_horizon(g, k);
    let bound = BigInt::from(g.len());
    let radius = if n > 1 { Some(Rational::new(1.into(), BigInt::from(2 * n * (n - 1)))) } else { None };
    let mut values = Vec::with_capacity(g.len());
    for (u, &x) in vk.iter().enumerate() {
        let approx = Rational::new(x.into(), k.into());
        let v = rational_reconstruct(&approx, &bound);
        if radius.as_ref().is_some_and(|r| (&v - &approx).abs() > *r) {
            return Err(Error::CertificationFailed(format!("node {u}: v_k/k = {approx} has no close fraction")));
        }
        values.push(v);
    }
    let mut classes = values.clone();
    classes.sort();
    classes.dedup();
    let mut c1 = vec![None; g.len()];
    let mut c2 = vec![None; g.len()];
    for c in &classes {
        class_strategy(g, &values, c, Player::One, &mut c1)?;
        class_strategy(g, &values, c, Player::Two, &mut c2)?;
    }
    let (s1, s2) = (PositionalStrategy { choices: c1 }, PositionalStrategy { choices: c2 });
    if !certify_mpg(g, &values, &s1, &s2) {
        return Err(Error::CertificationFailed("extracted strategies do not realize the values".into()));
    }
    Ok(MpgSolution { values, max_strategy: s1, min_strategy: s2, horizon: k })
}

/// Graph game won by player one when the largest label seen infinitely
/// often is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    owners: Vec<Player>,
    succ: Vec<Vec<usize>>,
    labels: Vec<u32>,
}

impl ParityGame {
    pub fn new(owners: Vec<Player>, succ: Vec<Vec<usize>>, labels: Vec<u32>) -> Result<Self> {
        if owners.len() != succ.len() || owners.len() != labels.len() {
            return Err(Error::dims("owners, successors and labels differ in length"));
        }
        if owners.is_empty() {
            return Err(Error::invalid("game needs at least one node"));
        }
        check_successors(&succ, owners.len())?;
        if let Some(u) = labels.iter().position(|&l| l == 0) {
            return Err(Error::invalid(format!("node {u} has label 0; labels are positive")));
        }
        let mut succ = succ;
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(ParityGame { owners, succ, labels })
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

/// Same graph with reward `+N^ℓ(v)` on edges out of `v` for odd `ℓ(v)` and
/// `−N^ℓ(v)` for even, `N = n + 1`.
pub fn parity_to_mpg(g: &ParityGame, label_cap: u32) -> Result<MeanPayoffGame> {
    let top = g.labels.iter().copied().max().unwrap_or(1);
    if top > label_cap {
        return Err(Error::SizeCapExceeded { what: "parity label", size: top.into(), cap: label_cap.into() });
    }
    let base = g.len() as i64 + 1;
    let weight = |l: u32| -> Result<i64> {
        let m = base
            .checked_pow(l)
            .filter(|m| m.checked_mul(base).is_some())
            .ok_or(Error::SizeCapExceeded { what: "parity reward N^label", size: (base as u128).pow(l.min(38)), cap: i64::MAX as u128 })?;
        Ok(if l % 2 == 1 { m } else { -m })
    };
    let edges = (0..g.len())
        .map(|u| {
            let r = weight(g.labels[u])?;
            Ok(g.succ[u].iter().map(|&w| (w, r)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    MeanPayoffGame::new(g.owners.clone(), edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySolution {
    pub winners: Vec<Player>,
    pub max_strategy: PositionalStrategy,
    pub min_strategy: PositionalStrategy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityOutcome {
    pub winner: Player,
    /// The winner's strategy; it wins from every node that player wins.
    pub strategy: PositionalStrategy,
}

pub fn parity_solve(g: &ParityGame, label_cap: u32) -> Result<ParitySolution> {
    let sol = mpg_solve(&parity_to_mpg(g, label_cap)?)?;
    let winners = sol
        .values
        .iter()
        .map(|v| {
            if v.is_zero() {
                Err(Error::ValidationFailed("mean payoff 0 in a parity reduction".into()))
            } else if v.is_positive() {
                Ok(Player::One)
            } else {
                Ok(Player::Two)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParitySolution { winners, max_strategy: sol.max_strategy, min_strategy: sol.min_strategy })
}

pub fn parity_winner(g: &ParityGame, v: usize, label_cap: u32) -> Result<ParityOutcome> {
    if v >= g.len() {
        return Err(Error::invalid(format!("node {v} out of range")));
    }
    let sol = parity_solve(g, label_cap)?;
    let winner = sol.winners[v];
    let strategy = if winner == Player::One { sol.max_strategy } else { sol.min_strategy };
    Ok(ParityOutcome { winner, strategy })
}

/// Checks that each winner's strategy wins from every node ascribed to
/// that winner: with the strategy fixed and the opponent free, no reachable
/// cycle has a top label of the opponent's parity.
pub fn certify_parity(g: &ParityGame, winners: &[Player], s1: &PositionalStrategy, s2: &PositionalStrategy) -> bool {
    if winners.len() != g.len() {
        return false;
    }
    let succ = |p: Player| move |u: usize| (g.owners[u] == p).then(|| g.succ[u].clone());
    if s1.validate(succ(Player::One), g.len()).is_err() || s2.validate(succ(Player::Two), g.len()).is_err() {
        return false;
    }
    [(Player::One, s1), (Player::Two, s2)].into_iter().all(|(p, s)| {
        let next: Vec<Vec<usize>> = (0..g.len())
            .map(|u| if g.owners[u] == p { vec![s.choice(u).expect("validated")] } else { g.succ[u].clone() })
            .collect();
        let mut seen = vec![false; g.len()];
        let mut stack: Vec<usize> = (0..g.len()).filter(|&u| winners[u] == p).collect();
        for &u in &stack {
            seen[u] = true;
        }
        while let Some(u) = stack.pop() {
            for &w in &next[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let bad_parity = if p == Player::One { 0 } else { 1 };
        (0..g.len()).filter(|&u| seen[u] && g.labels[u] % 2 == bad_parity).all(|u| {
            // u must not return to itself through labels ≤ ℓ(u)
            let top = g.labels[u];
            let mut visited = vec![false; g.len()];
            let mut stack = vec![u];
            while let Some(x) = stack.pop() {
                for &w in &next[x] {
                    if w == u {
                        return false;
                    }
                    if !visited[w] && g.labels[w] <= top {
                        visited[w] = true;
                        stack.push(w);
                    }
                }
            }
            true
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    use Player::{One, Two};

    #[test]
    fn parity_certificate_rejects_a_wrong_winner() {
        // node 0 (player 2) chooses between an odd loop at 1 and an even loop at 2
        let g = ParityGame::new(vec![Two, One, One], vec![vec![1, 2], vec![1], vec![2]], vec![1, 3, 2]).unwrap();
        let sol = parity_solve(&g, DEFAULT_PARITY_LABEL_CAP).unwrap();
        assert_eq!(sol.winners, vec![Two, One, Two]);
        assert!(certify_parity(&g, &sol.winners, &sol.max_strategy, &sol.min_strategy));
        assert!(!certify_parity(&g, &[One, One, Two], &sol.max_strategy, &sol.min_strategy));
    }

    #[test]
    fn self_loop_value() {
        for r in [-7, 0, 4] {
            let g = MeanPayoffGame::new(vec![One], vec![vec![(0, r)]]).unwrap();
            assert_eq!(mpg_solve(&g).unwrap().values, vec![int(r)]);
        }
    }

    #[test]
    fn two_cycle_average() {
        let g = MeanPayoffGame::new(vec![One, Two], vec![vec![(1, 1)], vec![(0, 3)]]).unwrap();
        assert_eq!(mpg_solve(&g).unwrap().values, vec![int(2), int(2)]);
    }

    #[test]
    fn max_picks_the_better_cycle() {
        let g = MeanPayoffGame::new(vec![One, Two], vec![vec![(0, 2), (1, 4)], vec![(0, 6)]]).unwrap();
        let s = mpg_solve(&g).unwrap();
        assert_eq!(s.values, vec![int(5), int(5)]);
        assert_eq!(s.max_strategy.choice(0), Some(1));
    }

    #[test]
    fn fractional_value_and_min_choice() {
        // min at 0 chooses between a self-loop of 4 and a 3-cycle of mean 5/3
        let g = MeanPayoffGame::new(vec![Two, One, One], vec![vec![(0, 4), (1, 1)], vec![(2, 2)], vec![(0, 2)]]).unwrap();
        let s = mpg_solve(&g).unwrap();
        assert_eq!(s.values[0], crate::exact::rat(5, 3));
        assert_eq!(s.min_strategy.choice(0), Some(1));
    }

    #[test]
    fn max_tie_needs_the_right_cycle() {
        // max at 0: node 1 also has value 1 but only via its own loop; the
        // 0 → 0 loop pays 0, so the strategy must leave 0 for 1
        let g = MeanPayoffGame::new(vec![One, One], vec![vec![(0, 0), (1, 0)], vec![(1, 1)]]).unwrap();
        let s = mpg_solve(&g).unwrap();
        assert_eq!(s.values, vec![int(1), int(1)]);
        assert_eq!(s.max_strategy.choice(0), Some(1));
    }

    #[test]
    fn certificate_rejects_wrong_values() {
        let g = MeanPayoffGame::new(vec![One, Two], vec![vec![(1, 1)], vec![(0, 3)]]).unwrap();
        let s = mpg_solve(&g).unwrap();
        assert!(certify_mpg(&g, &s.values, &s.max_strategy, &s.min_strategy));
        assert!(!certify_mpg(&g, &[int(3), int(2)], &s.max_strategy, &s.min_strategy));
    }

    #[test]
    fn parity_examples() {
        let odd = ParityGame::new(vec![Two], vec![vec![0]], vec![3]).unwrap();
        assert_eq!(parity_winner(&odd, 0, DEFAULT_PARITY_LABEL_CAP).unwrap().winner, One);
        let even = ParityGame::new(vec![One], vec![vec![0]], vec![2]).unwrap();
        assert_eq!(parity_winner(&even, 0, DEFAULT_PARITY_LABEL_CAP).unwrap().winner, Two);
        let choice = ParityGame::new(vec![One, Two, Two], vec![vec![1, 2], vec![1], vec![2]], vec![1, 2, 1]).unwrap();
        let out = parity_winner(&choice, 0, DEFAULT_PARITY_LABEL_CAP).unwrap();
        assert_eq!(out.winner, One);
        assert_eq!(out.strategy.choice(0), Some(2));
        let cycle = ParityGame::new(vec![One, One], vec![vec![1], vec![0]], vec![1, 2]).unwrap();
        assert_eq!(parity_winner(&cycle, 0, DEFAULT_PARITY_LABEL_CAP).unwrap().winner, Two);
    }

    #[test]
    fn parity_weights_and_cap() {
        let g = ParityGame::new(vec![One, Two], vec![vec![1], vec![0]], vec![1, 2]).unwrap();
        let m = parity_to_mpg(&g, 4).unwrap();
        assert_eq!(m.edges(), &[vec![(1, 3)], vec![(0, -9)]]);
        assert!(matches!(parity_to_mpg(&g, 1), Err(Error::SizeCapExceeded { .. })));
    }
}
