//! Finite games in normal form, mixed profiles, Nash's map and exact
//! equilibrium checks.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::exact::{solve_linear_system, Rational, RationalMatrix};
use crate::{Error, Result};

/// Default bound on strategy counts for support enumeration.
pub const SUPPORT_ENUMERATION_CAP: usize = 5;

/// A `k`-player game with one rational payoff tensor per player.
///
/// Tensors are stored flat in row-major order: the first player's strategy
/// is the most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    counts: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl NormalFormGame {
    pub fn new(counts: Vec<usize>, payoffs: Vec<Vec<Rational>>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("a game needs at least one player"));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::invalid("every player needs at least one strategy"));
        }
        if payoffs.len() != counts.len() {
            return Err(Error::dims(format!("{} payoff tensors for {} players", payoffs.len(), counts.len())));
        }
        let size: usize = counts.iter().product();
        if let Some(i) = payoffs.iter().position(|p| p.len() != size) {
            return Err(Error::dims(format!("payoff tensor of player {i} has wrong size")));
        }
        Ok(NormalFormGame { counts, payoffs })
    }

    /// Two-player game where the row player gets `a` and the column player `b`.
    pub fn bimatrix(a: &RationalMatrix, b: &RationalMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::dims("payoff matrices differ in shape"));
        }
        Self::new(vec![a.rows(), a.cols()], vec![a.entries().to_vec(), b.entries().to_vec()])
    }

    pub fn players(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn num_profiles(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn payoff_tensor(&self, player: usize) -> &[Rational] {
        &self.payoffs[player]
    }

    pub fn index_of(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .zip(&self.counts)
            .fold(0, |acc, (&j, &c)| acc * c + j)
    }

    pub fn profile_of(&self, mut index: usize) -> Vec<usize> {
        let mut profile = vec![0; self.counts.len()];
        for (slot, &c) in profile.iter_mut().zip(&self.counts).rev() {
            *slot = index % c;
            index /= c;
        }
        profile
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> &Rational {
        &self.payoffs[player][self.index_of(profile)]
    }

    /// Largest absolute payoff over all players and profiles.
    pub fn max_abs_payoff(&self) -> Rational {
        self.payoffs
            .iter()
            .flatten()
            .map(|p| p.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Matrices `(A_1, A_2)` of a two-player game.
    pub fn as_bimatrix(&self) -> Option<(RationalMatrix, RationalMatrix)> {
        if self.players() != 2 {
            return None;
        }
        let (m, n) = (self.counts[0], self.counts[1]);
        let a = RationalMatrix::from_vec(m, n, self.payoffs[0].clone()).ok()?;
        let b = RationalMatrix::from_vec(m, n, self.payoffs[1].clone()).ok()?;
        Some((a, b))
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedProfile {
    blocks: Vec<Vec<Rational>>,
}

impl MixedProfile {
    /// Validates that every block is a probability distribution.
    pub fn new(blocks: Vec<Vec<Rational>>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() || b.iter().any(|p| p.is_negative()) || b.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::invalid(format!("block {i} is not a probability distribution")));
            }
        }
        Ok(MixedProfile { blocks })
    }

    pub fn pure(counts: &[usize], profile: &[usize]) -> Self {
        let blocks = counts
            .iter()
            .zip(profile)
            .map(|(&c, &j)| (0..c).map(|l| if l == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        MixedProfile { blocks }
    }

    pub fn uniform(counts: &[usize]) -> Self {
        let blocks = counts
            .iter()
            .map(|&c| vec![Rational::new(1.into(), (c as i64).into()); c])
            .collect();
        MixedProfile { blocks }
    }

    /// Splits a concatenated vector into blocks of the given sizes.
    pub fn from_flat(counts: &[usize], flat: &[Rational]) -> Result<Self> {
        if flat.len() != counts.iter().sum::<usize>() {
            return Err(Error::dims("flat profile length differs from total strategy count"));
        }
        let mut blocks = Vec::with_capacity(counts.len());
        let mut at = 0;
        for &c in counts {
            blocks.push(flat[at..at + c].to_vec());
            at += c;
        }
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<Rational>] {
        &self.blocks
    }

    pub fn block(&self, player: usize) -> &[Rational] {
        &self.blocks[player]
    }

    pub fn flat(&self) -> Vec<Rational> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn into_blocks(self) -> Vec<Vec<Rational>> {
        self.blocks
    }

    fn check_dims(&self, g: &NormalFormGame) -> Result<()> {
        let ok = self.blocks.len() == g.counts.len()
            && self.blocks.iter().zip(&g.counts).all(|(b, &c)| b.len() == c);
        if ok {
            Ok(())
        } else {
            Err(Error::dims("profile shape does not match the game"))
        }
    }

    /// Pure profile if every block is a unit vector.
    pub fn as_pure(&self) -> Option<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().position(|p| p.is_one()))
            .collect()
    }
}

/// `U_i(x_{-i}, j)` for every pure strategy `j` of `player`.
pub fn deviation_payoffs(g: &NormalFormGame, x: &MixedProfile, player: usize) -> Result<Vec<Rational>> {
    x.check_dims(g)?;
    if player >= g.players() {
        return Err(Error::dims(format!("no player {player}")));
    }
    let mut out = vec![Rational::zero(); g.counts[player]];
    let tensor = &g.payoffs[player];
    for (idx, u) in tensor.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        let profile = g.profile_of(idx);
        let mut w = Rational::one();
        for (l, &j) in profile.iter().enumerate() {
            if l == player {
                continue;
            }
            let p = &x.blocks[l][j];
            if p.is_zero() {
                w = Rational::zero();
                break;
            }
            w *= p;
        }
        if !w.is_zero() {
            out[profile[player]] += u * w;
        }
    }
    Ok(out)
}

/// `Σ x_{1,j_1}⋯x_{k,j_k} U_i(j_1,…,j_k)`.
pub fn expected_payoff(g: &NormalFormGame, x: &MixedProfile, player: usize) -> Result<Rational> {
    let dev = deviation_payoffs(g, x, player)?;
    Ok(dev.iter().zip(&x.blocks[player]).map(|(u, p)| u * p).sum())
}

fn gains(g: &NormalFormGame, x: &MixedProfile, player: usize) -> Result<Vec<Rational>> {
    let dev = deviation_payoffs(g, x, player)?;
    let current: Rational = dev.iter().zip(&x.blocks[player]).map(|(u, p)| u * p).sum();
    Ok(dev.into_iter().map(|u| u - &current).collect())
}

/// `g_{i,j}(x) = U_i(x_{-i}, j) − U_i(x)`.
pub fn gain(g: &NormalFormGame, x: &MixedProfile, player: usize, strategy: usize) -> Result<Rational> {
    let gs = gains(g, x, player)?;
    gs.into_iter()
        .nth(strategy)
        .ok_or_else(|| Error::dims(format!("player {player} has no strategy {strategy}")))
}

/// Nash's map `F_Γ(x)_{(i,j)} = (x_{i,j} + max(0, g_{i,j})) / (1 + Σ_l max(0, g_{i,l}))`.
pub fn nash_map(g: &NormalFormGame, x: &MixedProfile) -> Result<MixedProfile> {
    x.check_dims(g)?;
    let mut blocks = Vec::with_capacity(g.players());
    for i in 0..g.players() {
        let pos: Vec<Rational> = gains(g, x, i)?
            .into_iter()
            .map(|v| if v.is_positive() { v } else { Rational::zero() })
            .collect();
        let denom = Rational::one() + pos.iter().sum::<Rational>();
        blocks.push(x.blocks[i].iter().zip(&pos).map(|(p, d)| (p + d) / &denom).collect());
    }
    Ok(MixedProfile { blocks })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonNashReport {
    pub holds: bool,
    /// Largest gain over all players and pure deviations.
    pub worst_gain: Rational,
    /// A deviation attaining `worst_gain` as `(player, strategy)`.
    pub witness: (usize, usize),
}

/// Checks that no pure deviation gains more than `epsilon`. Since payoffs
/// are linear in each player's own strategy, this is equivalent to checking
/// mixed deviations.
pub fn epsilon_nash_check(g: &NormalFormGame, x: &MixedProfile, epsilon: &Rational) -> Result<EpsilonNashReport> {
    let mut worst: Option<(Rational, (usize, usize))> = None;
    for i in 0..g.players() {
        for (j, v) in gains(g, x, i)?.into_iter().enumerate() {
            if worst.as_ref().is_none_or(|(w, _)| v > *w) {
                worst = Some((v, (i, j)));
            }
        }
    }
    let (worst_gain, witness) = worst.expect("at least one strategy");
    Ok(EpsilonNashReport { holds: worst_gain <= *epsilon, worst_gain, witness })
}

/// `δ = ε / (k · M · Σ|S_i|)` with `M` the largest absolute payoff: every
/// profile within L∞ distance `δ` of an exact equilibrium is an `ε`-Nash
/// equilibrium. Returns `None` when all payoffs are zero (any profile works).
pub fn strong_to_weak_radius(g: &NormalFormGame, epsilon: &Rational) -> Option<Rational> {
    let m = g.max_abs_payoff();
    if m.is_zero() {
        return None;
    }
    let total: usize = g.counts.iter().sum();
    let scale = Rational::from_integer((g.players() * total).into()) * m;
    Some(epsilon / scale)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Solves `Σ_{j∈own} M[other_i][j]·p_j = v` for `other_i ∈ other`, `Σ p = 1`.
/// `m` is indexed `[other][own]`.
fn indifference(m: &RationalMatrix, other: &[usize], own: &[usize], own_len: usize) -> Option<Vec<Rational>> {
    let s = own.len();
    let mut a = RationalMatrix::zeros(s + 1, s + 1);
    let mut b = vec![Rational::zero(); s + 1];
    for (r, &oi) in other.iter().enumerate() {
        for (c, &j) in own.iter().enumerate() {
            a[(r, c)] = m[(oi, j)].clone();
        }
        a[(r, s)] = -Rational::one();
    }
    for c in 0..s {
        a[(s, c)] = Rational::one();
    }
    b[s] = Rational::one();
    let sol = solve_linear_system(&a, &b).ok()?;
    let mut p = vec![Rational::zero(); own_len];
    for (c, &j) in own.iter().enumerate() {
        if sol[c].is_negative() {
            return None;
        }
        p[j] = sol[c].clone();
    }
    Some(p)
}

/// All equilibria found by solving the indifference equations on every pair
/// of equal-size supports. Complete for nondegenerate games; for degenerate
/// games every returned profile is still an exact equilibrium (solutions
/// with zero weight on a support strategy are kept).
pub fn support_enumeration_nash(g: &NormalFormGame, size_cap: usize) -> Result<Vec<MixedProfile>> {
    let (a, b) = g
        .as_bimatrix()
        .ok_or_else(|| Error::invalid("support enumeration needs a two-player game"))?;
    let (m, n) = (a.rows(), a.cols());
    let big = m.max(n);
    if big > size_cap {
        return Err(Error::SizeCapExceeded { what: "strategy count", size: big as u128, cap: size_cap as u128 });
    }
    let bt = b.transpose();
    let mut found = BTreeSet::new();
    for s in 1..=m.min(n) {
        let rows = subsets(m, s);
        let cols = subsets(n, s);
        for i_set in &rows {
            for j_set in &cols {
                let Some(y) = indifference(&a, i_set, j_set, n) else { continue };
                let Some(x) = indifference(&bt, j_set, i_set, m) else { continue };
                let profile = MixedProfile { blocks: vec![x, y] };
                if epsilon_nash_check(g, &profile, &Rational::zero())?.holds {
                    found.insert(profile);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn bimatrix(a: &[&[i64]], b: &[&[i64]]) -> NormalFormGame {
        NormalFormGame::bimatrix(&RationalMatrix::from_i64(a), &RationalMatrix::from_i64(b)).unwrap()
    }

    fn pennies() -> NormalFormGame {
        bimatrix(&[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]])
    }

    fn lopsided() -> NormalFormGame {
        bimatrix(&[&[4, 0], &[0, 2]], &[&[4, 0], &[0, 2]])
    }

    fn profile(blocks: &[&[(i64, i64)]]) -> MixedProfile {
        MixedProfile::new(blocks.iter().map(|b| b.iter().map(|&(p, q)| rat(p, q)).collect()).collect()).unwrap()
    }

    #[test]
    fn pure_profile_reads_tensor_entry() {
        let g = bimatrix(&[&[1, 7], &[3, 4]], &[&[0, 5], &[2, 2]]);
        let x = MixedProfile::pure(&[2, 2], &[0, 1]);
        assert_eq!(expected_payoff(&g, &x, 0).unwrap(), int(7));
        assert_eq!(expected_payoff(&g, &x, 1).unwrap(), int(5));
    }

    #[test]
    fn four_term_hand_sum() {
        let x = MixedProfile::uniform(&[2, 2]);
        assert_eq!(expected_payoff(&pennies(), &x, 0).unwrap(), int(0));
        assert_eq!(expected_payoff(&lopsided(), &x, 0).unwrap(), rat(3, 2));
    }

    #[test]
    fn gains_at_uniform() {
        let x = MixedProfile::uniform(&[2, 2]);
        assert_eq!(gain(&lopsided(), &x, 0, 0).unwrap(), rat(1, 2));
        assert_eq!(gain(&lopsided(), &x, 0, 1).unwrap(), rat(-1, 2));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(gain(&pennies(), &x, i, j).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn gains_nonpositive_at_pure_equilibrium() {
        let x = MixedProfile::pure(&[2, 2], &[0, 0]);
        for i in 0..2 {
            for j in 0..2 {
                assert!(gain(&lopsided(), &x, i, j).unwrap() <= int(0));
            }
        }
    }

    #[test]
    fn nash_map_lopsided_uniform() {
        let y = nash_map(&lopsided(), &MixedProfile::uniform(&[2, 2])).unwrap();
        assert_eq!(y.block(0), &[rat(2, 3), rat(1, 3)]);
        assert_eq!(y.block(1), &[rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn nash_map_fixes_equilibria() {
        let x = MixedProfile::uniform(&[2, 2]);
        assert_eq!(nash_map(&pennies(), &x).unwrap(), x);
        let e = MixedProfile::pure(&[2, 2], &[1, 1]);
        assert_eq!(nash_map(&lopsided(), &e).unwrap(), e);
    }

    #[test]
    fn epsilon_check_examples() {
        let x = MixedProfile::uniform(&[2, 2]);
        let r = epsilon_nash_check(&lopsided(), &x, &rat(1, 4)).unwrap();
        assert!(!r.holds);
        assert_eq!(r.worst_gain, rat(1, 2));
        assert!(epsilon_nash_check(&lopsided(), &x, &int(4)).unwrap().holds);
        assert!(epsilon_nash_check(&pennies(), &x, &int(0)).unwrap().holds);
    }

    #[test]
    fn dimension_mismatch() {
        let x = MixedProfile::uniform(&[3, 2]);
        assert!(matches!(nash_map(&pennies(), &x), Err(Error::DimensionMismatch(_))));
        assert!(matches!(expected_payoff(&pennies(), &x, 0), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn coordination_game_has_three_equilibria() {
        let g = bimatrix(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]);
        let eqs = support_enumeration_nash(&g, 5).unwrap();
        let want = vec![
            profile(&[&[(0, 1), (1, 1)], &[(0, 1), (1, 1)]]),
            profile(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]),
            profile(&[&[(1, 1), (0, 1)], &[(1, 1), (0, 1)]]),
        ];
        assert_eq!(eqs, want);
    }

    #[test]
    fn matching_pennies_unique() {
        assert_eq!(support_enumeration_nash(&pennies(), 5).unwrap(), vec![MixedProfile::uniform(&[2, 2])]);
    }

    #[test]
    fn trivial_game() {
        let g = bimatrix(&[&[3]], &[&[-2]]);
        assert_eq!(support_enumeration_nash(&g, 5).unwrap(), vec![MixedProfile::pure(&[1, 1], &[0, 0])]);
    }

    #[test]
    fn size_cap_enforced() {
        let g = NormalFormGame::new(vec![6, 1], vec![vec![int(0); 6], vec![int(0); 6]]).unwrap();
        assert!(matches!(support_enumeration_nash(&g, 5), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn three_player_profile_indexing() {
        let counts = vec![2, 3, 2];
        let g = NormalFormGame::new(counts.clone(), vec![(0..12).map(int).collect(); 3]).unwrap();
        for idx in 0..12 {
            assert_eq!(g.index_of(&g.profile_of(idx)), idx);
        }
        assert_eq!(g.payoff(0, &[1, 2, 1]), &int(11));
    }

    /// Rational grid points of Δ_2 × Δ_2 with denominator `d`.
    fn grid(d: i64) -> Vec<MixedProfile> {
        let mut out = Vec::new();
        for a in 0..=d {
            for b in 0..=d {
                out.push(profile(&[&[(a, d), (d - a, d)], &[(b, d), (d - b, d)]]));
            }
        }
        out
    }

    #[test]
    fn equilibrium_iff_nash_map_fixed_point_on_grid() {
        let games = [
            pennies(),
            lopsided(),
            bimatrix(&[&[3, 0], &[5, 1]], &[&[3, 5], &[0, 1]]),
            bimatrix(&[&[2, -1], &[0, 1]], &[&[1, 0], &[-2, 2]]),
            bimatrix(&[&[0, 0], &[0, 0]], &[&[1, -1], &[2, 0]]),
        ];
        for g in &games {
            for d in 1..=4 {
                for x in grid(d) {
                    let eq = epsilon_nash_check(g, &x, &int(0)).unwrap().holds;
                    let fixed = nash_map(g, &x).unwrap() == x;
                    assert_eq!(eq, fixed, "profile {x:?}");
                }
            }
        }
    }

    #[test]
    fn nash_map_output_is_a_profile() {
        let g = NormalFormGame::new(
            vec![2, 2, 2],
            (0..3).map(|i| (0..8).map(|t| int((t * 7 + i * 3) % 5 - 2)).collect()).collect(),
        )
        .unwrap();
        for d in 1..=3 {
            for a in 0..=d {
                for b in 0..=d {
                    let x = profile(&[&[(a, d), (d - a, d)], &[(b, d), (d - b, d)], &[(1, 3), (2, 3)]]);
                    let y = nash_map(&g, &x).unwrap();
                    assert!(MixedProfile::new(y.into_blocks()).is_ok());
                }
            }
        }
    }
}
