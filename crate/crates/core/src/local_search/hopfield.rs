use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::Rational;
use crate::normal_form::NormalFormGame;
use crate::{Error, Partial, Result};

/// Largest network converted to a normal-form game by default.
pub const HOPFIELD_GAME_CAP: usize = 12;

/// Undirected network with rational edge weights and node thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfieldNet {
    thresholds: Vec<Rational>,
    edges: Vec<(usize, usize, Rational)>,
    adjacency: Vec<Vec<(usize, Rational)>>,
}

impl HopfieldNet {
    pub fn new(thresholds: Vec<Rational>, edges: Vec<(usize, usize, Rational)>) -> Result<Self> {
        let n = thresholds.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (u, v, w) in &edges {
            if *u >= n || *v >= n {
                return Err(Error::invalid(format!("edge ({u},{v}) names a missing node")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if !seen.insert((*u.min(v), *u.max(v))) {
                return Err(Error::invalid(format!("duplicate edge between {u} and {v}")));
            }
            adjacency[*u].push((*v, w.clone()));
            adjacency[*v].push((*u, w.clone()));
        }
        Ok(HopfieldNet { thresholds, edges, adjacency })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    fn check(&self, s: &Configuration) -> Result<()> {
        if s.len() == self.len() {
            Ok(())
        } else {
            Err(Error::dims(format!("configuration has {} states for {} nodes", s.len(), self.len())))
        }
    }

    fn field(&self, s: &Configuration, v: usize) -> Rational {
        self.adjacency[v]
            .iter()
            .fold(self.thresholds[v].clone(), |acc, (u, w)| acc + w * Rational::from_integer(s.0[*u].into()))
    }
}

/// One `±1` state per node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<i8>);

impl Configuration {
    pub fn new(states: Vec<i8>) -> Result<Self> {
        if states.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("node states must be +1 or -1"));
        }
        Ok(Configuration(states))
    }

    pub fn all_up(n: usize) -> Self {
        Configuration(vec![1; n])
    }

    /// Node `v` is `-1` iff bit `v` of `mask` is set.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Configuration((0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn states(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn flip(&mut self, v: usize) {
        self.0[v] = -self.0[v];
    }
}

/// `p(s) = Σ_{(v,u)∈E} w(v,u)s(v)s(u) + Σ_v t(v)s(v)`.
pub fn hopfield_potential(net: &HopfieldNet, s: &Configuration) -> Result<Rational> {
    net.check(s)?;
    let st = |v: usize| Rational::from_integer(s.0[v].into());
    let edges = net.edges.iter().fold(Rational::zero(), |acc, (u, v, w)| acc + w * st(*u) * st(*v));
    let thresholds = net.thresholds.iter().enumerate().fold(Rational::zero(), |acc, (v, t)| acc + t * st(v));
    Ok(edges + thresholds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStability {
    pub stable: bool,
    /// `Σ_u w(v,u)s(u) + t(v)`.
    pub field: Rational,
}

/// A node is stable when its state agrees with the sign of its field; a
/// zero field is compatible with either state.
pub fn node_stability(net: &HopfieldNet, s: &Configuration, v: usize) -> NodeStability {
    let field = net.field(s, v);
    let stable = if s.0[v] == 1 { !field.is_negative() } else { !field.is_positive() };
    NodeStability { stable, field }
}

/// Which unstable node switches next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchRule {
    /// Lowest-index unstable node.
    FirstUnstable,
    /// Largest `|field|`, lowest index on ties.
    BestImprovement,
    /// Uniform among unstable nodes, from a ChaCha8 stream with this seed.
    SeededRandom(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    pub node: usize,
    pub field: Rational,
    pub potential_before: Rational,
    pub potential_after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfieldRun {
    pub config: Configuration,
    pub trace: Vec<Switch>,
}

/// Asynchronous dynamics: switch one unstable node at a time until every
/// node is stable. Each switch raises the potential by exactly `2·|field|`.
pub fn hopfield_converge(net: &HopfieldNet, s0: &Configuration, rule: SwitchRule, step_cap: usize) -> Result<HopfieldRun> {
    net.check(s0)?;
    let mut s = s0.clone();
    let mut potential = hopfield_potential(net, &s)?;
    let mut trace = Vec::new();
    let mut rng = match rule {
        SwitchRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    loop {
        let unstable: Vec<(usize, Rational)> = (0..net.len())
            .filter_map(|v| {
                let st = node_stability(net, &s, v);
                (!st.stable).then_some((v, st.field))
            })
            .collect();
        if unstable.is_empty() {
            return Ok(HopfieldRun { config: s, trace });
        }
        if trace.len() >= step_cap {
            let partial = Partial::Hopfield(HopfieldRun { config: s, trace });
            return Err(Error::StepCapExceeded { cap: step_cap, partial: Box::new(partial) });
        }
        let (node, field) = match rule {
            SwitchRule::FirstUnstable => unstable[0].clone(),
            SwitchRule::BestImprovement => {
                let mut best = &unstable[0];
                for c in &unstable[1..] {
                    if c.1.abs() > best.1.abs() {
                        best = c;
                    }
                }
                best.clone()
            }
            SwitchRule::SeededRandom(_) => {
                let rng = rng.as_mut().expect("seeded rule has a generator");
                unstable[rng.gen_range(0..unstable.len())].clone()
            }
        };
        s.flip(node);
        let after = &potential + Rational::from_integer(2.into()) * field.abs();
        debug_assert_eq!(Ok(&after), hopfield_potential(net, &s).as_ref().map_err(|_| ()));
        trace.push(Switch { node, field, potential_before: potential, potential_after: after.clone() });
        potential = after;
    }
}

/// Every configuration in which all nodes are stable, by exhaustive scan in
/// mask order.
pub fn stable_configurations(net: &HopfieldNet) -> Result<Vec<Configuration>> {
    let n = net.len();
    if n > 24 {
        return Err(Error::SizeCapExceeded { what: "exhaustive scan nodes", size: n as u128, cap: 24 });
    }
    Ok((0..1u64 << n)
        .map(|m| Configuration::from_mask(n, m))
        .filter(|s| (0..n).all(|v| node_stability(net, s, v).stable))
        .collect())
}

/// The `n`-player game in which node `v` chooses its state (strategy 0 is
/// `+1`, strategy 1 is `-1`) and earns 1 when stable, 0 otherwise. Its pure
/// equilibria are exactly the stable configurations.
pub fn hopfield_to_game(net: &HopfieldNet, cap: usize) -> Result<NormalFormGame> {
    let n = net.len();
    if n > cap {
        return Err(Error::SizeCapExceeded { what: "network nodes", size: n as u128, cap: cap as u128 });
    }
    if n == 0 {
        return Err(Error::invalid("empty network"));
    }
    let size = 1usize << n;
    let mut payoffs = vec![vec![Rational::zero(); size]; n];
    for idx in 0..size {
        // player 0 is the most significant tensor index
        let states: Vec<i8> = (0..n).map(|v| if idx >> (n - 1 - v) & 1 == 1 { -1 } else { 1 }).collect();
        let s = Configuration(states);
        for (v, slot) in payoffs.iter_mut().enumerate() {
            if node_stability(net, &s, v).stable {
                slot[idx] = Rational::from_integer(1.into());
            }
        }
    }
    NormalFormGame::new(vec![2; n], payoffs)
}

impl Configuration {
    /// Strategy indices in the image of [`hopfield_to_game`].
    pub fn to_profile(&self) -> Vec<usize> {
        self.0.iter().map(|&s| usize::from(s == -1)).collect()
    }

    pub fn from_profile(profile: &[usize]) -> Self {
        Configuration(profile.iter().map(|&j| if j == 0 { 1 } else { -1 }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::local_search::{pure_equilibria, pure_nash_check};

    fn pair(w: i64) -> HopfieldNet {
        HopfieldNet::new(vec![int(0), int(0)], vec![(0, 1, int(w))]).unwrap()
    }

    fn cfg(v: &[i8]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    #[test]
    fn potential_examples() {
        let single = HopfieldNet::new(vec![int(1)], vec![]).unwrap();
        assert_eq!(hopfield_potential(&single, &cfg(&[1])).unwrap(), int(1));
        assert_eq!(hopfield_potential(&pair(-1), &cfg(&[1, -1])).unwrap(), int(1));
        let zero = HopfieldNet::new(vec![int(0); 3], vec![(0, 1, int(0)), (1, 2, int(0))]).unwrap();
        for m in 0..8 {
            assert_eq!(hopfield_potential(&zero, &Configuration::from_mask(3, m)).unwrap(), int(0));
        }
    }

    #[test]
    fn stability_examples() {
        let single = HopfieldNet::new(vec![int(1)], vec![]).unwrap();
        let st = node_stability(&single, &cfg(&[-1]), 0);
        assert!(!st.stable);
        assert_eq!(st.field, int(1));
        let zero = HopfieldNet::new(vec![int(0)], vec![]).unwrap();
        assert!(node_stability(&zero, &cfg(&[1]), 0).stable);
        assert!(node_stability(&zero, &cfg(&[-1]), 0).stable);
        let st = node_stability(&pair(-1), &cfg(&[1, 1]), 0);
        assert!(!st.stable);
        assert_eq!(st.field, int(-1));
    }

    #[test]
    fn stable_start_is_unchanged() {
        let run = hopfield_converge(&pair(-1), &cfg(&[1, -1]), SwitchRule::FirstUnstable, 10).unwrap();
        assert_eq!(run.config, cfg(&[1, -1]));
        assert!(run.trace.is_empty());
    }

    #[test]
    fn single_node_switches_once() {
        let single = HopfieldNet::new(vec![int(1)], vec![]).unwrap();
        let run = hopfield_converge(&single, &cfg(&[-1]), SwitchRule::BestImprovement, 10).unwrap();
        assert_eq!(run.config, cfg(&[1]));
        assert_eq!(run.trace.len(), 1);
        assert_eq!(&run.trace[0].potential_after - &run.trace[0].potential_before, int(2));
    }

    #[test]
    fn antiferromagnetic_pair() {
        let run = hopfield_converge(&pair(-1), &cfg(&[1, 1]), SwitchRule::FirstUnstable, 10).unwrap();
        assert_eq!(run.config, cfg(&[-1, 1]));
        let stable = stable_configurations(&pair(-1)).unwrap();
        assert_eq!(stable, vec![cfg(&[-1, 1]), cfg(&[1, -1])]);
        assert!(stable.contains(&run.config));
    }

    #[test]
    fn step_cap_returns_partial_trace() {
        let net = HopfieldNet::new(vec![int(1), int(1), int(1)], vec![]).unwrap();
        match hopfield_converge(&net, &cfg(&[-1, -1, -1]), SwitchRule::FirstUnstable, 2) {
            Err(Error::StepCapExceeded { cap: 2, partial }) => match *partial {
                Partial::Hopfield(run) => assert_eq!(run.trace.len(), 2),
                other => panic!("unexpected partial {other:?}"),
            },
            other => panic!("expected step cap, got {other:?}"),
        }
    }

    #[test]
    fn seeded_runs_reproduce() {
        let net = HopfieldNet::new(
            vec![rat(1, 2), int(-1), int(0), rat(3, 2)],
            vec![(0, 1, int(-3)), (1, 2, int(2)), (2, 3, int(-1)), (0, 3, int(4))],
        )
        .unwrap();
        let s0 = cfg(&[-1, 1, -1, -1]);
        let a = hopfield_converge(&net, &s0, SwitchRule::SeededRandom(7), 100).unwrap();
        let b = hopfield_converge(&net, &s0, SwitchRule::SeededRandom(7), 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn game_image_examples() {
        let single = HopfieldNet::new(vec![int(1)], vec![]).unwrap();
        let g = hopfield_to_game(&single, HOPFIELD_GAME_CAP).unwrap();
        assert_eq!(pure_equilibria(&g), vec![vec![0]]);

        let g = hopfield_to_game(&pair(-1), HOPFIELD_GAME_CAP).unwrap();
        let eq: Vec<Configuration> = pure_equilibria(&g).iter().map(|p| Configuration::from_profile(p)).collect();
        assert_eq!(eq, vec![cfg(&[1, -1]), cfg(&[-1, 1])]);
        for s in stable_configurations(&pair(-1)).unwrap() {
            assert!(pure_nash_check(&g, &s.to_profile()).holds);
        }
    }

    #[test]
    fn invalid_networks_rejected() {
        assert!(HopfieldNet::new(vec![int(0)], vec![(0, 0, int(1))]).is_err());
        assert!(HopfieldNet::new(vec![int(0); 2], vec![(0, 1, int(1)), (1, 0, int(2))]).is_err());
        assert!(Configuration::new(vec![0]).is_err());
        assert!(hopfield_to_game(&HopfieldNet::new(vec![int(0); 13], vec![]).unwrap(), 12).is_err());
    }
}
