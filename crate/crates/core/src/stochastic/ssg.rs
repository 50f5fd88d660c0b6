use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Player, PositionalStrategy};
use crate::exact::{
    bit_size, lp_optimize, rational_reconstruct, solve_linear_system, LinearProgram, Rational, RationalMatrix, Relation,
    Sense,
};
use crate::{Error, Partial, Result};

pub const DEFAULT_SSG_STEP_CAP: usize = 10_000;
/// Extra attempts of the discounted method, squaring `β` each time.
pub const DISCOUNT_RETRIES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SsgNode {
    Max(Vec<usize>),
    Min(Vec<usize>),
    Random(Vec<(usize, Rational)>),
    /// The 1-sink is won by player one, the 2-sink by player two.
    Sink(Player),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleStochasticGame {
    nodes: Vec<SsgNode>,
}

impl SimpleStochasticGame {
    pub fn new(nodes: Vec<SsgNode>) -> Result<Self> {
        let n = nodes.len();
        for (u, node) in nodes.iter().enumerate() {
            let succ: Vec<usize> = match node {
                SsgNode::Max(s) | SsgNode::Min(s) => s.clone(),
                SsgNode::Random(s) => s.iter().map(|(w, _)| *w).collect(),
                SsgNode::Sink(_) => continue,
            };
            if succ.is_empty() {
                return Err(Error::invalid(format!("node {u} has no successor")));
            }
            if let Some(&w) = succ.iter().find(|&&w| w >= n) {
                return Err(Error::invalid(format!("edge {u} -> {w} leaves the graph")));
            }
            let mut sorted = succ.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != succ.len() {
                return Err(Error::invalid(format!("node {u} lists a successor twice")));
            }
            if let SsgNode::Random(s) = node {
                if s.iter().any(|(_, p)| !p.is_positive()) {
                    return Err(Error::invalid(format!("random node {u} has a non-positive probability")));
                }
                let total: Rational = s.iter().map(|(_, p)| p).sum();
                if !total.is_one() {
                    return Err(Error::invalid(format!("random node {u}: probabilities sum to {total}")));
                }
            }
        }
        Ok(SimpleStochasticGame { nodes })
    }

    pub fn nodes(&self) -> &[SsgNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn successors(&self, u: usize) -> Vec<usize> {
        match &self.nodes[u] {
            SsgNode::Max(s) | SsgNode::Min(s) => s.clone(),
            SsgNode::Random(s) => s.iter().map(|(w, _)| *w).collect(),
            SsgNode::Sink(_) => Vec::new(),
        }
    }

    pub fn owner(&self, u: usize) -> Option<Player> {
        match self.nodes[u] {
            SsgNode::Max(_) => Some(Player::One),
            SsgNode::Min(_) => Some(Player::Two),
            _ => None,
        }
    }

    /// Strategy taking the first listed successor at every node of `p`.
    pub fn first_choice(&self, p: Player) -> PositionalStrategy {
        let choices = (0..self.len())
            .map(|u| (self.owner(u) == Some(p)).then(|| self.successors(u)[0]))
            .collect();
        PositionalStrategy { choices }
    }

    pub(crate) fn validate_strategy(&self, s: &PositionalStrategy, p: Player) -> Result<()> {
        s.validate(|u| (self.owner(u) == Some(p)).then(|| self.successors(u)), self.len())
    }

    /// Sum of the bit sizes of all probabilities plus the node count.
    pub fn bit_size(&self) -> u64 {
        let probs: u64 = self
            .nodes
            .iter()
            .map(|n| match n {
                SsgNode::Random(s) => s.iter().map(|(_, p)| bit_size(p)).sum(),
                _ => 0,
            })
            .sum();
        probs + self.len() as u64
    }
}

/// One application of the optimality equations.
pub fn ssg_operator(g: &SimpleStochasticGame, x: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != g.len() {
        return Err(Error::dims(format!("value vector has {} entries, game has {} nodes", x.len(), g.len())));
    }
    Ok(g.nodes.iter().enumerate().map(|(u, _)| local_value(g, u, x)).collect())
}

fn local_value(g: &SimpleStochasticGame, u: usize, x: &[Rational]) -> Rational {
    match &g.nodes[u] {
        SsgNode::Sink(Player::One) => Rational::one(),
        SsgNode::Sink(Player::Two) => Rational::zero(),
        SsgNode::Random(s) => s.iter().map(|(w, p)| p * &x[*w]).sum(),
        SsgNode::Max(s) => s.iter().map(|&w| &x[w]).max().expect("nonempty").clone(),
        SsgNode::Min(s) => s.iter().map(|&w| &x[w]).min().expect("nonempty").clone(),
    }
}

/// Transitions of the Markov chain obtained by fixing both strategies.
fn chain_step(g: &SimpleStochasticGame, s1: &PositionalStrategy, s2: &PositionalStrategy, u: usize) -> Vec<(usize, Rational)> {
    match &g.nodes[u] {
        SsgNode::Max(_) => vec![(s1.choice(u).expect("validated"), Rational::one())],
        SsgNode::Min(_) => vec![(s2.choice(u).expect("validated"), Rational::one())],
        SsgNode::Random(s) => s.clone(),
        SsgNode::Sink(_) => Vec::new(),
    }
}

/// Probability of reaching a 1-sink under `(s1, s2)`. Nodes that cannot
/// reach one get 0; the rest solve a non-singular linear system.
pub(crate) fn absorption(g: &SimpleStochasticGame, s1: &PositionalStrategy, s2: &PositionalStrategy) -> Result<Vec<Rational>> {
    let n = g.len();
    let steps: Vec<Vec<(usize, Rational)>> = (0..n).map(|u| chain_step(g, s1, s2, u)).collect();
    let mut pred = vec![Vec::new(); n];
    for (u, st) in steps.iter().enumerate() {
        for (w, _) in st {
            pred[*w].push(u);
        }
    }
    let mut reach = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&u| g.nodes[u] == SsgNode::Sink(Player::One)).collect();
    for &u in &stack {
        reach[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &p in &pred[u] {
            if !reach[p] {
                reach[p] = true;
                stack.push(p);
            }
        }
    }
    let unknown: Vec<usize> = (0..n).filter(|&u| reach[u] && !matches!(g.nodes[u], SsgNode::Sink(_))).collect();
    let mut index = vec![usize::MAX; n];
    for (k, &u) in unknown.iter().enumerate() {
        index[u] = k;
    }
    let m = unknown.len();
    let mut a = RationalMatrix::identity(m);
    let mut b = vec![Rational::zero(); m];
    for (k, &u) in unknown.iter().enumerate() {
        for (w, p) in &steps[u] {
            if g.nodes[*w] == SsgNode::Sink(Player::One) {
                b[k] += p;
            } else if index[*w] != usize::MAX {
                a[(k, index[*w])] -= p;
            }
        }
    }
    let sol = if m == 0 { Vec::new() } else { solve_linear_system(&a, &b)? };
    Ok((0..n)
        .map(|u| match g.nodes[u] {
            SsgNode::Sink(Player::One) => Rational::one(),
            _ if index[u] != usize::MAX => sol[index[u]].clone(),
            _ => Rational::zero(),
        })
        .collect())
}

/// Largest set avoiding the 1-sinks that player two can keep the play in.
/// With `fixed` given, player-one nodes follow it.
fn zero_set(g: &SimpleStochasticGame, fixed: Option<&PositionalStrategy>) -> Vec<bool> {
    let n = g.len();
    let mut inside: Vec<bool> = (0..n).map(|u| g.nodes[u] != SsgNode::Sink(Player::One)).collect();
    loop {
        let mut changed = false;
        for u in 0..n {
            if !inside[u] {
                continue;
            }
            let keep = match (&g.nodes[u], fixed) {
                (SsgNode::Sink(_), _) => true,
                (SsgNode::Min(s), _) => s.iter().any(|&w| inside[w]),
                (SsgNode::Max(_), Some(f)) => inside[f.choice(u).expect("validated")],
                (SsgNode::Max(s), None) => s.iter().all(|&w| inside[w]),
                (SsgNode::Random(s), _) => s.iter().all(|(w, _)| inside[*w]),
            };
            if !keep {
                inside[u] = false;
                changed = true;
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// Player two's optimal reply to `s1`: the greatest `v ≤ 1` with
/// `v ≤ T_{s1}(v)` once the value-0 nodes are pinned, found by LP.
fn min_best_response(g: &SimpleStochasticGame, s1: &PositionalStrategy) -> Result<(Vec<Rational>, PositionalStrategy)> {
    let n = g.len();
    let zero = zero_set(g, Some(s1));
    let unit = |i: usize| {
        let mut c = vec![Rational::zero(); n];
        c[i] = Rational::one();
        c
    };
    let mut lp = LinearProgram::new(Sense::Max, vec![Rational::one(); n]);
    for u in 0..n {
        if zero[u] {
            lp.add_constraint(unit(u), Relation::Eq, Rational::zero());
            continue;
        }
        lp.add_constraint(unit(u), Relation::Le, Rational::one());
        let bound_by = |terms: &[(usize, Rational)], lp: &mut LinearProgram| {
            let mut c = unit(u);
            for (w, p) in terms {
                c[*w] -= p;
            }
            lp.add_constraint(c, Relation::Le, Rational::zero());
        };
        match &g.nodes[u] {
            SsgNode::Sink(Player::One) => lp.add_constraint(unit(u), Relation::Eq, Rational::one()),
            SsgNode::Sink(Player::Two) => unreachable!("2-sinks lie in the zero set"),
            SsgNode::Random(s) => bound_by(s, &mut lp),
            SsgNode::Max(_) => bound_by(&[(s1.choice(u).expect("validated"), Rational::one())], &mut lp),
            SsgNode::Min(s) => {
                for &w in s {
                    bound_by(&[(w, Rational::one())], &mut lp);
                }
            }
        }
    }
    let v = lp_optimize(&lp)?.solution;
    let choices = (0..n)
        .map(|u| match &g.nodes[u] {
            SsgNode::Min(s) => {
                let inner = s.iter().copied().filter(|&w| !zero[u] || zero[w]);
                Some(inner.min_by(|&a, &b| v[a].cmp(&v[b])).expect("zero-set node keeps a successor inside"))
            }
            _ => None,
        })
        .collect();
    Ok((v, PositionalStrategy { choices }))
}

fn discounted_values(
    g: &SimpleStochasticGame,
    s1: &PositionalStrategy,
    s2: &PositionalStrategy,
    keep: &Rational,
) -> Result<Vec<Rational>> {
    let n = g.len();
    let mut a = RationalMatrix::identity(n);
    let mut b = vec![Rational::zero(); n];
    for u in 0..n {
        match g.nodes[u] {
            SsgNode::Sink(Player::One) => b[u] = Rational::one(),
            SsgNode::Sink(Player::Two) => {}
            _ => {
                for (w, p) in chain_step(g, s1, s2, u) {
                    a[(u, w)] -= keep * p;
                }
            }
        }
    }
    solve_linear_system(&a, &b)
}

/// Switches every node of `p` to its best successor when that is strictly
/// better than the current one. Returns whether anything changed.
fn improve(g: &SimpleStochasticGame, s: &mut PositionalStrategy, v: &[Rational], p: Player) -> bool {
    let mut changed = false;
    for u in 0..g.len() {
        if g.owner(u) != Some(p) {
            continue;
        }
        let succ = g.successors(u);
        let best = match p {
            Player::One => succ.iter().copied().reduce(|a, b| if v[b] > v[a] { b } else { a }),
            Player::Two => succ.iter().copied().reduce(|a, b| if v[b] < v[a] { b } else { a }),
        }
        .expect("nonempty");
        let cur = s.choice(u).expect("validated");
        let better = match p {
            Player::One => v[best] > v[cur],
            Player::Two => v[best] < v[cur],
        };
        if better {
            s.choices[u] = Some(best);
            changed = true;
        }
    }
    changed
}

fn cap_error(cap: usize) -> Error {
    Error::StepCapExceeded { cap, partial: Box::new(Partial::None) }
}

/// Exact policy iteration on the game that stops with probability `β` at
/// every non-sink step.
fn discounted_solve(
    g: &SimpleStochasticGame,
    beta: &Rational,
    cap: usize,
    steps: &mut usize,
) -> Result<(Vec<Rational>, PositionalStrategy, PositionalStrategy)> {
    let keep = Rational::one() - beta;
    let mut s1 = g.first_choice(Player::One);
    let mut s2 = g.first_choice(Player::Two);
    loop {
        let mut v;
        loop {
            v = discounted_values(g, &s1, &s2, &keep)?;
            *steps += 1;
            if *steps > cap {
                return Err(cap_error(cap));
            }
            if !improve(g, &mut s2, &v, Player::Two) {
                break;
            }
        }
        if !improve(g, &mut s1, &v, Player::One) {
            return Ok((v, s1, s2));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsgMethod {
    StrategyImprovement,
    Discounted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsgParams {
    /// Initial discount for [`SsgMethod::Discounted`]; defaults to
    /// [`ssg_default_beta`].
    pub beta: Option<Rational>,
    pub step_cap: usize,
}

impl Default for SsgParams {
    fn default() -> Self {
        SsgParams { beta: None, step_cap: DEFAULT_SSG_STEP_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SsgChecks {
    pub equations: bool,
    pub absorption: bool,
    pub no_improving_switch: bool,
}

impl SsgChecks {
    pub fn passed(&self) -> bool {
        self.equations && self.absorption && self.no_improving_switch
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsgCertificate {
    pub method: SsgMethod,
    /// Strategy-improvement rounds, or policy evaluations when discounting.
    pub steps: usize,
    /// Discount that produced the certified answer.
    pub beta: Option<Rational>,
    pub attempts: usize,
    pub checks: SsgChecks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsgSolution {
    pub values: Vec<Rational>,
    pub max_strategy: PositionalStrategy,
    pub min_strategy: PositionalStrategy,
    pub certificate: SsgCertificate,
}

/// `2^{−4B}` with `B` from [`SimpleStochasticGame::bit_size`].
pub fn ssg_default_beta(g: &SimpleStochasticGame) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << (4 * g.bit_size()))
}

pub fn ssg_solve(g: &SimpleStochasticGame, method: SsgMethod, params: &SsgParams) -> Result<SsgSolution> {
    match method {
        SsgMethod::StrategyImprovement => {
            let mut s1 = g.first_choice(Player::One);
            let mut steps = 0;
            loop {
                let (v, s2) = min_best_response(g, &s1)?;
                if !improve(g, &mut s1, &v, Player::One) {
                    let checks = certify_ssg_report(g, &v, &s1, &s2)?;
                    if !checks.passed() {
                        return Err(Error::CertificationFailed(format!("strategy improvement result failed {checks:?}")));
                    }
                    let certificate = SsgCertificate { method, steps, beta: None, attempts: 1, checks };
                    return Ok(SsgSolution { values: v, max_strategy: s1, min_strategy: s2, certificate });
                }
                steps += 1;
                if steps > params.step_cap {
                    return Err(cap_error(params.step_cap));
                }
            }
        }
        SsgMethod::Discounted => {
            let bound = BigInt::one() << (2 * g.bit_size());
            let mut beta = params.beta.clone().unwrap_or_else(|| ssg_default_beta(g));
            if !beta.is_positive() || beta >= Rational::one() {
                return Err(Error::invalid("discount must lie strictly between 0 and 1"));
            }
            let mut steps = 0;
            for attempt in 1..=DISCOUNT_RETRIES + 1 {
                let (x, s1, s2) = discounted_solve(g, &beta, params.step_cap, &mut steps)?;
                let values: Vec<Rational> = x.iter().map(|v| rational_reconstruct(v, &bound)).collect();
                let checks = certify_ssg_report(g, &values, &s1, &s2)?;
                if checks.passed() {
                    let certificate = SsgCertificate { method, steps, beta: Some(beta), attempts: attempt, checks };
                    return Ok(SsgSolution { values, max_strategy: s1, min_strategy: s2, certificate });
                }
                beta = &beta * &beta;
            }
            Err(Error::CertificationFailed(format!(
                "discounted values did not certify after {} attempts; try a smaller beta",
                DISCOUNT_RETRIES + 1
            )))
        }
    }
}

/// The three exact checks behind [`certify_ssg`]. Errors only on malformed
/// input (wrong lengths, strategies using missing edges).
pub fn certify_ssg_report(
    g: &SimpleStochasticGame,
    values: &[Rational],
    s1: &PositionalStrategy,
    s2: &PositionalStrategy,
) -> Result<SsgChecks> {
    if values.len() != g.len() {
        return Err(Error::dims(format!("{} values for {} nodes", values.len(), g.len())));
    }
    g.validate_strategy(s1, Player::One)?;
    g.validate_strategy(s2, Player::Two)?;
    let mut checks = SsgChecks { equations: false, absorption: false, no_improving_switch: false };
    checks.equations = (0..g.len()).all(|u| local_value(g, u, values) == values[u]);
    let a = absorption(g, s1, s2)?;
    checks.absorption = a == values;
    if !checks.absorption {
        return Ok(checks);
    }
    for u in 0..g.len() {
        let Some(p) = g.owner(u) else { continue };
        for w in g.successors(u) {
            let (mut t1, mut t2) = (s1.clone(), s2.clone());
            let (t, cur) = if p == Player::One { (&mut t1, s1) } else { (&mut t2, s2) };
            if cur.choice(u) == Some(w) {
                continue;
            }
            t.choices[u] = Some(w);
            let b = absorption(g, &t1, &t2)?;
            let gains = match p {
                Player::One => b.iter().zip(&a).any(|(x, y)| x > y),
                Player::Two => b.iter().zip(&a).any(|(x, y)| x < y),
            };
            if gains {
                return Ok(checks);
            }
        }
    }
    checks.no_improving_switch = true;
    Ok(checks)
}

/// Exact check that `(s1, s2)` is an optimal pair with the given values.
pub fn certify_ssg(g: &SimpleStochasticGame, values: &[Rational], s1: &PositionalStrategy, s2: &PositionalStrategy) -> bool {
    certify_ssg_report(g, values, s1, s2).is_ok_and(|c| c.passed())
}

/// Whether player one wins from `s` with probability at least `threshold`.
pub fn ssg_decision(g: &SimpleStochasticGame, s: usize, threshold: &Rational) -> Result<bool> {
    if s >= g.len() {
        return Err(Error::invalid(format!("node {s} out of range")));
    }
    let sol = ssg_solve(g, SsgMethod::StrategyImprovement, &SsgParams::default())?;
    Ok(sol.values[s] >= *threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    const WIN: SsgNode = SsgNode::Sink(Player::One);
    const LOSE: SsgNode = SsgNode::Sink(Player::Two);

    fn game(nodes: Vec<SsgNode>) -> SimpleStochasticGame {
        SimpleStochasticGame::new(nodes).unwrap()
    }

    fn third() -> SimpleStochasticGame {
        game(vec![SsgNode::Random(vec![(1, rat(1, 3)), (2, rat(2, 3))]), WIN, LOSE])
    }

    fn both(g: &SimpleStochasticGame) -> [SsgSolution; 2] {
        [SsgMethod::StrategyImprovement, SsgMethod::Discounted].map(|m| ssg_solve(g, m, &SsgParams::default()).unwrap())
    }

    #[test]
    fn operator_examples() {
        let g = third();
        let x = vec![int(0), int(0), int(0)];
        assert_eq!(ssg_operator(&g, &x).unwrap(), vec![int(0), int(1), int(0)]);
        let x = vec![int(0), int(1), int(0)];
        assert_eq!(ssg_operator(&g, &x).unwrap()[0], rat(1, 3));
        let m = game(vec![SsgNode::Max(vec![1, 2]), WIN, LOSE]);
        assert_eq!(ssg_operator(&m, &x).unwrap()[0], int(1));
        assert!(ssg_operator(&m, &x[..2]).is_err());
    }

    #[test]
    fn random_node_value() {
        for s in both(&third()) {
            assert_eq!(s.values[0], rat(1, 3));
        }
    }

    #[test]
    fn max_over_sinks() {
        let g = game(vec![SsgNode::Max(vec![2, 1]), WIN, LOSE]);
        for s in both(&g) {
            assert_eq!(s.values[0], int(1));
            assert_eq!(s.max_strategy.choice(0), Some(1));
        }
    }

    #[test]
    fn chain_prefers_the_random_node() {
        let g = game(vec![SsgNode::Max(vec![3, 1]), SsgNode::Random(vec![(2, rat(1, 2)), (3, rat(1, 2))]), WIN, LOSE]);
        for s in both(&g) {
            assert_eq!(s.values[0], rat(1, 2));
            assert_eq!(s.max_strategy.choice(0), Some(1));
        }
    }

    #[test]
    fn max_must_not_stall_on_a_cycle() {
        // 0 and 1 are max nodes in a cycle; 1 can also reach the 1-sink
        let g = game(vec![SsgNode::Max(vec![1]), SsgNode::Max(vec![0, 2]), WIN]);
        for s in both(&g) {
            assert_eq!(s.values, vec![int(1), int(1), int(1)]);
        }
    }

    #[test]
    fn min_traps_in_a_cycle() {
        // min at 0 loops forever instead of moving on; 1 must pass through 0
        let g = game(vec![
            SsgNode::Min(vec![2, 0]),
            SsgNode::Random(vec![(0, rat(1, 2)), (2, rat(1, 2))]),
            WIN,
        ]);
        for s in both(&g) {
            assert_eq!(s.values[0], int(0));
            assert_eq!(s.values[1], rat(1, 2));
            assert_eq!(s.min_strategy.choice(0), Some(0));
        }
    }

    #[test]
    fn certification_examples() {
        let g = third();
        let none = PositionalStrategy { choices: vec![None; 3] };
        assert!(certify_ssg(&g, &[rat(1, 3), int(1), int(0)], &none, &none));
        assert!(!certify_ssg(&g, &[rat(1, 2), int(1), int(0)], &none, &none));

        let cyc = game(vec![SsgNode::Max(vec![1]), SsgNode::Max(vec![0])]);
        let s1 = cyc.first_choice(Player::One);
        let s2 = cyc.first_choice(Player::Two);
        let report = certify_ssg_report(&cyc, &[int(1), int(1)], &s1, &s2).unwrap();
        assert!(report.equations && !report.absorption);
    }

    #[test]
    fn non_improving_switch_detected() {
        // max picks the losing sink although the winning one is available
        let g = game(vec![SsgNode::Max(vec![1, 2]), LOSE, WIN]);
        let s1 = g.first_choice(Player::One);
        let s2 = g.first_choice(Player::Two);
        let r = certify_ssg_report(&g, &[int(0), int(0), int(1)], &s1, &s2).unwrap();
        assert!(!r.equations && r.absorption && !r.no_improving_switch);
    }

    #[test]
    fn decision_threshold_is_inclusive() {
        let g = third();
        assert!(!ssg_decision(&g, 0, &rat(1, 2)).unwrap());
        assert!(ssg_decision(&g, 0, &rat(1, 3)).unwrap());
        let m = game(vec![SsgNode::Max(vec![1, 2]), WIN, LOSE]);
        assert!(ssg_decision(&m, 0, &int(1)).unwrap());
    }

    #[test]
    fn invalid_instances_rejected() {
        assert!(SimpleStochasticGame::new(vec![SsgNode::Random(vec![(1, rat(1, 3)), (2, rat(1, 3))]), WIN, LOSE]).is_err());
        assert!(SimpleStochasticGame::new(vec![SsgNode::Max(vec![])]).is_err());
        assert!(SimpleStochasticGame::new(vec![SsgNode::Min(vec![3])]).is_err());
    }
}
