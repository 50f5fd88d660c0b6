use num_traits::{One, Signed, Zero};

use crate::exact::{Rational, RationalMatrix};
use crate::normal_form::{MixedProfile, NormalFormGame};
use crate::{Error, Result};

/// Two-player game with row payoffs `a` and column payoffs `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    a: RationalMatrix,
    b: RationalMatrix,
}

impl BimatrixGame {
    pub fn new(a: RationalMatrix, b: RationalMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::dims("payoff matrices differ in shape"));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::invalid("bimatrix game needs at least one strategy per player"));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn from_normal_form(g: &NormalFormGame) -> Result<Self> {
        let (a, b) = g.as_bimatrix().ok_or_else(|| Error::invalid("game does not have two players"))?;
        Self::new(a, b)
    }

    pub fn to_normal_form(&self) -> NormalFormGame {
        NormalFormGame::bimatrix(&self.a, &self.b).expect("shapes agree")
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn b(&self) -> &RationalMatrix {
        &self.b
    }
}

/// Dictionary `M z + I s = 1` where column `v` carries label `v`.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns of the initial identity basis, used for the lexicographic
    /// ratio test.
    slack: std::ops::Range<usize>,
}

impl Tableau {
    fn pivot_in(&mut self, col: usize) -> Result<usize> {
        let rhs = self.rows[0].len() - 1;
        let mut best: Option<(usize, Vec<Rational>)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let key: Vec<Rational> = std::iter::once(&row[rhs])
                .chain(&row[self.slack.clone()])
                .map(|v| v / &row[col])
                .collect();
            if best.as_ref().is_none_or(|(_, k)| key < *k) {
                best = Some((r, key));
            }
        }
        let (r, _) = best.ok_or(Error::Unbounded)?;
        let p = self.rows[r][col].clone();
        for v in &mut self.rows[r] {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        Ok(std::mem::replace(&mut self.basis[r], col))
    }

    fn value(&self, var: usize) -> Rational {
        let rhs = self.rows[0].len() - 1;
        self.basis
            .iter()
            .position(|&b| b == var)
            .map_or_else(Rational::zero, |r| self.rows[r][rhs].clone())
    }

    fn sorted_basis(&self) -> Vec<usize> {
        let mut b = self.basis.clone();
        b.sort_unstable();
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemkeHowsonRun {
    pub profile: MixedProfile,
    pub pivots: usize,
    /// Sorted basis pair `(P, Q)` after every pivot.
    pub bases: Vec<(Vec<usize>, Vec<usize>)>,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Upper bound on the number of basis pairs of the two tableaux.
pub fn lemke_howson_pivot_bound(g: &BimatrixGame) -> usize {
    let (m, n) = (g.rows() as u128, g.cols() as u128);
    let pairs = binomial(m + n, n).saturating_mul(binomial(m + n, m));
    usize::try_from(pairs).unwrap_or(usize::MAX)
}

/// Lemke–Howson from the artificial equilibrium, dropping `dropped_label`
/// (rows are labels `0..m`, columns `m..m+n`).
pub fn lemke_howson(g: &BimatrixGame, dropped_label: usize) -> Result<MixedProfile> {
    lemke_howson_run(g, dropped_label, None).map(|r| r.profile)
}

/// As [`lemke_howson`], also returning the pivot count and basis log.
/// `pivot_limit` defaults to [`lemke_howson_pivot_bound`].
pub fn lemke_howson_run(g: &BimatrixGame, dropped_label: usize, pivot_limit: Option<usize>) -> Result<LemkeHowsonRun> {
    let (m, n) = (g.rows(), g.cols());
    if dropped_label >= m + n {
        return Err(Error::invalid(format!("label {dropped_label} out of range 0..{}", m + n)));
    }
    let limit = pivot_limit.unwrap_or_else(|| lemke_howson_pivot_bound(g));
    // shift both matrices to be strictly positive; equilibria are unchanged
    let low = g.a.min_entry().min(g.b.min_entry()).cloned().unwrap_or_else(Rational::zero);
    let shift = Rational::one() - low;
    // P = {x : B'ᵀx ≤ 1}: columns x_0..x_{m-1}, slacks s_0..s_{n-1}
    let mut p = Tableau {
        rows: (0..n)
            .map(|j| {
                let mut row = vec![Rational::zero(); m + n + 1];
                for i in 0..m {
                    row[i] = &g.b[(i, j)] + &shift;
                }
                row[m + j] = Rational::one();
                row[m + n] = Rational::one();
                row
            })
            .collect(),
        basis: (m..m + n).collect(),
        slack: m..m + n,
    };
    // Q = {y : A'y ≤ 1}: slacks r_0..r_{m-1}, columns y_0..y_{n-1}
    let mut q = Tableau {
        rows: (0..m)
            .map(|i| {
                let mut row = vec![Rational::zero(); m + n + 1];
                row[i] = Rational::one();
                for j in 0..n {
                    row[m + j] = &g.a[(i, j)] + &shift;
                }
                row[m + n] = Rational::one();
                row
            })
            .collect(),
        basis: (0..m).collect(),
        slack: 0..m,
    };
    let mut entering = dropped_label;
    let mut in_p = dropped_label < m;
    let mut pivots = 0;
    let mut bases = Vec::new();
    loop {
        if pivots >= limit {
            return Err(Error::PivotLimitExceeded(limit));
        }
        let left = if in_p { p.pivot_in(entering)? } else { q.pivot_in(entering)? };
        pivots += 1;
        bases.push((p.sorted_basis(), q.sorted_basis()));
        if left == dropped_label {
            break;
        }
        entering = left;
        in_p = !in_p;
    }
    let x: Vec<Rational> = (0..m).map(|i| p.value(i)).collect();
    let y: Vec<Rational> = (0..n).map(|j| q.value(m + j)).collect();
    let (sx, sy): (Rational, Rational) = (x.iter().sum(), y.iter().sum());
    let profile = MixedProfile::new(vec![
        x.iter().map(|v| v / &sx).collect(),
        y.iter().map(|v| v / &sy).collect(),
    ])?;
    Ok(LemkeHowsonRun { profile, pivots, bases })
}
