use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{bit_size, linf_distance, linf_norm, matrix_game_value, MatrixGameSolution, Rational, RationalMatrix};
use crate::{Error, Result};

/// Iterates stay exact while every coordinate fits in this many bits.
const EXACT_BITS: u64 = 256;

/// One state: rewards `A[i][j]`, stop probabilities `q[i][j]` and
/// `transitions[v][i][j]`, the probability of moving to state `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyState {
    pub rewards: RationalMatrix,
    pub stop: RationalMatrix,
    pub transitions: Vec<RationalMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyGame {
    states: Vec<ShapleyState>,
    q: Rational,
}

impl ShapleyGame {
    pub fn new(states: Vec<ShapleyState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::invalid("Shapley game needs at least one state"));
        }
        let n = states.len();
        let mut q: Option<Rational> = None;
        for (u, s) in states.iter().enumerate() {
            let (m, k) = (s.rewards.rows(), s.rewards.cols());
            if m == 0 || k == 0 {
                return Err(Error::invalid(format!("state {u} has an empty reward matrix")));
            }
            if s.stop.rows() != m || s.stop.cols() != k {
                return Err(Error::dims(format!("state {u}: stop matrix shape differs from rewards")));
            }
            if s.transitions.len() != n {
                return Err(Error::dims(format!("state {u}: expected {n} transition matrices")));
            }
            if s.transitions.iter().any(|t| t.rows() != m || t.cols() != k) {
                return Err(Error::dims(format!("state {u}: transition matrix shape differs from rewards")));
            }
            for i in 0..m {
                for j in 0..k {
                    let stop = &s.stop[(i, j)];
                    if !stop.is_positive() {
                        return Err(Error::invalid(format!("state {u}, cell ({i}, {j}): stop probability must be positive")));
                    }
                    if s.transitions.iter().any(|t| t[(i, j)].is_negative()) {
                        return Err(Error::invalid(format!("state {u}, cell ({i}, {j}): negative transition probability")));
                    }
                    let total: Rational = stop + s.transitions.iter().map(|t| &t[(i, j)]).sum::<Rational>();
                    if !total.is_one() {
                        return Err(Error::invalid(format!("state {u}, cell ({i}, {j}): probabilities sum to {total}")));
                    }
                    if q.as_ref().is_none_or(|q| stop < q) {
                        q = Some(stop.clone());
                    }
                }
            }
        }
        Ok(ShapleyGame { states, q: q.expect("at least one cell") })
    }

    pub fn states(&self) -> &[ShapleyState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Smallest stop probability; `F` contracts with factor `1 − q`.
    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `B_u(x)[i][j] = A_u[i][j] + Σ_v p^{uv}_{ij} x_v`.
    pub fn continuation_matrix(&self, u: usize, x: &[Rational]) -> RationalMatrix {
        let s = &self.states[u];
        let mut b = s.rewards.clone();
        for (t, xv) in s.transitions.iter().zip(x) {
            if xv.is_zero() {
                continue;
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if !t[(i, j)].is_zero() {
                        b[(i, j)] += &t[(i, j)] * xv;
                    }
                }
            }
        }
        b
    }
}

/// Optimal strategies of every `B_u(x)` along with its value.
pub fn shapley_operator_solutions(g: &ShapleyGame, x: &[Rational]) -> Result<Vec<MatrixGameSolution>> {
    if x.len() != g.len() {
        return Err(Error::dims(format!("value vector has {} entries, game has {} states", x.len(), g.len())));
    }
    (0..g.len()).map(|u| matrix_game_value(&g.continuation_matrix(u, x))).collect()
}

/// `F_u(x) = Val(B_u(x))`.
pub fn shapley_operator(g: &ShapleyGame, x: &[Rational]) -> Result<Vec<Rational>> {
    Ok(shapley_operator_solutions(g, x)?.into_iter().map(|s| s.value).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapleySolution {
    pub values: Vec<Rational>,
    /// `|F(values) − values|_∞`; the distance to the true values is at most
    /// `residual / q`.
    pub residual: Rational,
    /// Optimal (row, column) strategies of `B_u(values)`; ε-optimal in the
    /// stochastic game.
    pub strategies: Vec<(Vec<Rational>, Vec<Rational>)>,
    /// Number of updates `x ← F(x)`.
    pub iterations: usize,
    /// Residual at every evaluated iterate, starting from `x = 0`.
    pub residual_history: Vec<Rational>,
}

fn precision_bits(eps: &Rational, q: &Rational) -> u64 {
    // 2^-p ≤ ε q² / 8 keeps the rounding noise well under the stop test
    let target = eps * q * q / Rational::from_integer(8.into());
    let inv = target.recip().ceil().to_integer();
    inv.bits() + 1
}

/// Rounds `f` to a multiple of `2^-p` in the direction of `x`, never past
/// `x`. With non-negative rewards this keeps iterates from 0 monotone.
fn round_toward(f: &Rational, x: &Rational, p: u64) -> Rational {
    let scale = BigInt::one() << p;
    let scaled = f * Rational::from_integer(scale.clone());
    let (n, d) = (scaled.numer(), scaled.denom());
    let r = if f >= x { n.div_floor(d) } else { n.div_ceil(d) };
    let r = Rational::new(r, scale);
    if (f >= x && r < *x) || (f < x && r > *x) {
        x.clone()
    } else {
        r
    }
}

/// Value iteration from 0 until `|F(x) − x|_∞ ≤ ε q / 2`, so that
/// `|x − x*|_∞ ≤ ε/2`.
pub fn shapley_solve(g: &ShapleyGame, eps: &Rational) -> Result<ShapleySolution> {
    if !eps.is_positive() {
        return Err(Error::invalid("ε must be positive"));
    }
    let q = g.q().clone();
    let stop = eps * &q / Rational::from_integer(2.into());
    let p = precision_bits(eps, &q);
    let mut x = vec![Rational::zero(); g.len()];
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        let sols = shapley_operator_solutions(g, &x)?;
        let fx: Vec<Rational> = sols.iter().map(|s| s.value.clone()).collect();
        let residual = linf_distance(&fx, &x);
        history.push(residual.clone());
        if residual <= stop {
            let strategies = sols.into_iter().map(|s| (s.row_strategy, s.col_strategy)).collect();
            return Ok(ShapleySolution { values: x, residual, strategies, iterations, residual_history: history });
        }
        let exact = fx.iter().all(|v| bit_size(v) <= EXACT_BITS);
        x = if exact { fx } else { fx.iter().zip(&x).map(|(f, xv)| round_toward(f, xv, p)).collect() };
        iterations += 1;
    }
}

/// `⌈log(R / (ε q / 2)) / −log(1 − q)⌉` with `R = |F(0)|_∞`, in floating
/// point; used by tests as an independent bound on the iteration count.
pub fn shapley_iteration_bound(g: &ShapleyGame, eps: &Rational) -> Result<f64> {
    use crate::exact::to_f64;
    let r = to_f64(&linf_norm(&shapley_operator(g, &vec![Rational::zero(); g.len()])?));
    let q = to_f64(g.q());
    let target = to_f64(eps) * q / 2.0;
    if r <= target || q >= 1.0 {
        return Ok(1.0);
    }
    Ok(((r / target).ln() / -(1.0 - q).ln()).ceil())
}
