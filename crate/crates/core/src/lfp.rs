//! Least fixed points of monotone polynomial systems: branching-process
//! extinction and stochastic-grammar termination probabilities.
//!
//! Iterates start in exact rational arithmetic. Once their bit size passes
//! [`EXACT_BIT_CAP`] they are rounded down onto a dyadic grid, which keeps
//! every iterate a lower bound on the least fixed point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{bit_size, solve_linear_system, Rational, RationalMatrix};
use crate::{Error, Partial, Result};

/// Bit size above which iterates leave exact arithmetic.
pub const EXACT_BIT_CAP: u64 = 256;
pub const DEFAULT_ITER_CAP: usize = 10_000_000;
/// Extra Newton steps spent trying to certify an upper bound once the
/// residual target is met.
const POLISH_STEPS: usize = 64;

/// `coef · Π_k x_k^{exponents[k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coef: Rational,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn eval(&self, x: &[Rational]) -> Rational {
        self.exponents
            .iter()
            .zip(x)
            .filter(|(e, _)| **e > 0)
            .fold(self.coef.clone(), |acc, (&e, xk)| acc * num_traits::pow(xk.clone(), e as usize))
    }
}

/// `x = F(x)` with every `F_i` a polynomial with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePolySystem {
    polys: Vec<Vec<Monomial>>,
    probabilistic: bool,
}

impl MonotonePolySystem {
    pub fn new(polys: Vec<Vec<Monomial>>) -> Result<Self> {
        let n = polys.len();
        let mut out = Vec::with_capacity(n);
        for (i, p) in polys.into_iter().enumerate() {
            let mut kept = Vec::with_capacity(p.len());
            for m in p {
                if m.exponents.len() != n {
                    return Err(Error::dims(format!("monomial of F_{i} has {} exponents for {n} variables", m.exponents.len())));
                }
                if m.coef.is_negative() {
                    return Err(Error::invalid(format!("F_{i} has a negative coefficient")));
                }
                if !m.coef.is_zero() {
                    kept.push(m);
                }
            }
            out.push(kept);
        }
        Ok(MonotonePolySystem { polys: out, probabilistic: false })
    }

    /// Marks the system as mapping `[0,1]^n` into itself; iterates are then
    /// checked against the unit box.
    pub fn probabilistic(mut self) -> Self {
        self.probabilistic = true;
        self
    }

    pub fn is_probabilistic(&self) -> bool {
        self.probabilistic
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Vec<Monomial>] {
        &self.polys
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.polys.iter().map(|p| p.iter().map(|m| m.eval(x)).sum()).collect()
    }

    pub fn jacobian(&self, x: &[Rational]) -> RationalMatrix {
        let n = self.len();
        let mut j = RationalMatrix::zeros(n, n);
        for (i, p) in self.polys.iter().enumerate() {
            for m in p {
                for k in 0..n {
                    let e = m.exponents[k];
                    if e == 0 {
                        continue;
                    }
                    let mut d = m.clone();
                    d.coef *= Rational::from_integer(e.into());
                    d.exponents[k] -= 1;
                    j[(i, k)] += d.eval(x);
                }
            }
        }
        j
    }
}

/// A branching process: `rules[i]` lists `(p_ij, v_ij)` for type `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingProcess {
    rules: Vec<Vec<(Rational, Vec<u32>)>>,
}

impl BranchingProcess {
    pub fn new(rules: Vec<Vec<(Rational, Vec<u32>)>>) -> Result<Self> {
        let n = rules.len();
        for (i, r) in rules.iter().enumerate() {
            if let Some((_, v)) = r.iter().find(|(_, v)| v.len() != n) {
                return Err(Error::dims(format!("type {i} has an offspring vector of length {}", v.len())));
            }
            if r.iter().any(|(p, _)| p.is_negative()) {
                return Err(Error::invalid(format!("type {i} has a negative probability")));
            }
            if r.iter().map(|(p, _)| p).sum::<Rational>() != Rational::one() {
                return Err(Error::invalid(format!("probabilities of type {i} do not sum to 1")));
            }
        }
        Ok(BranchingProcess { rules })
    }

    pub fn types(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Vec<(Rational, Vec<u32>)>] {
        &self.rules
    }
}

/// `F_i(x) = Σ_j p_ij Π_k x_k^{v_ij[k]}`.
pub fn bp_to_system(b: &BranchingProcess) -> MonotonePolySystem {
    let polys = b
        .rules
        .iter()
        .map(|r| r.iter().map(|(p, v)| Monomial { coef: p.clone(), exponents: v.clone() }).collect())
        .collect();
    MonotonePolySystem::new(polys).expect("validated process").probabilistic()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Nonterminal(usize),
    Terminal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScfgRule {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
    pub prob: Rational,
}

/// Stochastic context-free grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scfg {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub rules: Vec<ScfgRule>,
    pub start: usize,
}

impl Scfg {
    pub fn new(nonterminals: Vec<String>, terminals: Vec<String>, rules: Vec<ScfgRule>, start: usize) -> Result<Self> {
        let n = nonterminals.len();
        if start >= n {
            return Err(Error::invalid("start symbol is not a nonterminal"));
        }
        let mut sums = vec![Rational::zero(); n];
        for r in &rules {
            if r.lhs >= n {
                return Err(Error::invalid(format!("rule for unknown nonterminal {}", r.lhs)));
            }
            if r.prob.is_negative() {
                return Err(Error::invalid("negative rule probability"));
            }
            for s in &r.rhs {
                let ok = match s {
                    Symbol::Nonterminal(j) => *j < n,
                    Symbol::Terminal(j) => *j < terminals.len(),
                };
                if !ok {
                    return Err(Error::invalid(format!("rule uses unknown symbol {s:?}")));
                }
            }
            sums[r.lhs] += &r.prob;
        }
        if let Some(i) = sums.iter().position(|s| !s.is_one()) {
            return Err(Error::invalid(format!("rule probabilities of {} do not sum to 1", nonterminals[i])));
        }
        Ok(Scfg { nonterminals, terminals, rules, start })
    }
}

/// One variable per nonterminal; terminals contribute a factor 1.
pub fn scfg_to_system(g: &Scfg) -> MonotonePolySystem {
    let n = g.nonterminals.len();
    let mut polys = vec![Vec::new(); n];
    for r in &g.rules {
        let mut exponents = vec![0u32; n];
        for s in &r.rhs {
            if let Symbol::Nonterminal(j) = s {
                exponents[*j] += 1;
            }
        }
        polys[r.lhs].push(Monomial { coef: r.prob.clone(), exponents });
    }
    MonotonePolySystem::new(polys).expect("validated grammar").probabilistic()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfpMethod {
    Kleene,
    Newton,
}

/// Outcome of an LFP iteration. `x` is always a lower bound on the least
/// fixed point; `upper`, when present, is a certified upper bound `y` with
/// `F(y) ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfpResult {
    pub method: LfpMethod,
    pub x: Vec<Rational>,
    /// Upper bound on `|F(x) − x|∞`.
    pub residual: Rational,
    pub iterations: usize,
    pub newton_steps: usize,
    pub kleene_steps: usize,
    pub upper: Option<Vec<Rational>>,
    /// No rounding happened.
    pub exact: bool,
}

fn precision_for(eps: &Rational) -> u64 {
    let inv_bits = eps.denom().bits().saturating_sub(eps.numer().bits()) + 1;
    (inv_bits + 64).max(128)
}

fn floor_scaled(x: &Rational, p: u64) -> BigInt {
    (x.numer() << p).div_floor(x.denom())
}

fn ceil_scaled(x: &Rational, p: u64) -> BigInt {
    -((-(x.numer() << p)).div_floor(x.denom()))
}

fn from_scaled(x: &BigInt, p: u64) -> Rational {
    Rational::new(x.clone(), BigInt::one() << p)
}

fn max_bits(x: &[Rational]) -> u64 {
    x.iter().map(bit_size).max().unwrap_or(0)
}

/// Monomials prepared for evaluation on a dyadic grid of pitch `2^-p`.
struct Scaled {
    p: u64,
    terms: Vec<Vec<(BigInt, BigInt, Vec<u32>, u64)>>,
}

impl Scaled {
    fn new(sys: &MonotonePolySystem, p: u64) -> Self {
        let terms = sys
            .polys
            .iter()
            .map(|poly| {
                poly.iter()
                    .map(|m| (m.coef.numer().clone(), m.coef.denom().clone(), m.exponents.clone(), u64::from(m.degree())))
                    .collect()
            })
            .collect();
        Scaled { p, terms }
    }

    /// Floor and ceiling of `F(X·2^-p)·2^p`, term by term.
    fn eval(&self, x: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut lo = Vec::with_capacity(self.terms.len());
        let mut hi = Vec::with_capacity(self.terms.len());
        for poly in &self.terms {
            let (mut l, mut h) = (BigInt::zero(), BigInt::zero());
            for (a, b, e, d) in poly {
                let mut num = a.clone();
                for (k, &ek) in e.iter().enumerate() {
                    for _ in 0..ek {
                        num *= &x[k];
                    }
                }
                let (fl, cl) = if *d == 0 {
                    let n = num << self.p;
                    (n.div_floor(b), n.div_ceil(b))
                } else {
                    let s = self.p * (d - 1);
                    let f = &num >> s;
                    let c = if (&f << s) == num { f.clone() } else { &f + 1 };
                    (f.div_floor(b), c.div_ceil(b))
                };
                l += fl;
                h += cl;
            }
            lo.push(l);
            hi.push(h);
        }
        (lo, hi)
    }
}

fn check_unit_box(sys: &MonotonePolySystem, x: &[Rational]) -> Result<()> {
    if sys.probabilistic && x.iter().any(|v| *v > Rational::one()) {
        return Err(Error::ValidationFailed("iterate left the unit box".into()));
    }
    Ok(())
}

/// Kleene iteration `x ← F(x)` from `0` until `|F(x) − x|∞ ≤ ε`.
pub fn kleene_lfp(sys: &MonotonePolySystem, eps: &Rational, iter_cap: usize) -> Result<LfpResult> {
    let n = sys.len();
    let p = precision_for(eps);
    let mut x = vec![Rational::zero(); n];
    let mut iterations = 0;
    // exact phase
    loop {
        let fx = sys.eval(&x);
        for (a, b) in x.iter().zip(&fx) {
            assert!(a <= b, "Kleene iterates must be nondecreasing");
        }
        check_unit_box(sys, &fx)?;
        let residual = fx.iter().zip(&x).map(|(a, b)| a - b).max().unwrap_or_else(Rational::zero);
        let done = residual <= *eps;
        let result = |x: Vec<Rational>, iterations| LfpResult {
            method: LfpMethod::Kleene,
            x,
            residual,
            iterations,
            newton_steps: 0,
            kleene_steps: iterations,
            upper: None,
            exact: true,
        };
        if done {
            return Ok(result(x, iterations));
        }
        if iterations >= iter_cap {
            let partial = Partial::Lfp(result(x, iterations));
            return Err(Error::IterCapExceeded { cap: iter_cap, partial: Box::new(partial) });
        }
        x = fx;
        iterations += 1;
        if max_bits(&x) > EXACT_BIT_CAP {
            break;
        }
    }
    // dyadic phase: X_{k+1} = floor(F(X_k)), so exact monotonicity persists
    let scaled = Scaled::new(sys, p);
    let eps_scaled = floor_scaled(eps, p);
    let one = BigInt::one() << p;
    let mut xs: Vec<BigInt> = x.iter().map(|v| floor_scaled(v, p)).collect();
    loop {
        let (lo, hi) = scaled.eval(&xs);
        for (a, b) in xs.iter().zip(&lo) {
            assert!(a <= b, "Kleene iterates must be nondecreasing");
        }
        if sys.probabilistic && lo.iter().any(|v| *v > one) {
            return Err(Error::ValidationFailed("iterate left the unit box".into()));
        }
        let res = hi.iter().zip(&xs).map(|(h, a)| h - a).max().unwrap_or_else(BigInt::zero);
        let done = res <= eps_scaled;
        if done || iterations >= iter_cap {
            let r = LfpResult {
                method: LfpMethod::Kleene,
                x: xs.iter().map(|v| from_scaled(v, p)).collect(),
                residual: from_scaled(&res, p),
                iterations,
                newton_steps: 0,
                kleene_steps: iterations,
                upper: None,
                exact: false,
            };
            if done {
                return Ok(r);
            }
            return Err(Error::IterCapExceeded { cap: iter_cap, partial: Box::new(Partial::Lfp(r)) });
        }
        xs = lo;
        iterations += 1;
    }
}

fn round_down(x: Vec<Rational>, p: u64, exact: &mut bool) -> Vec<Rational> {
    if max_bits(&x) <= EXACT_BIT_CAP {
        return x;
    }
    *exact = false;
    x.iter().map(|v| from_scaled(&floor_scaled(v, p), p)).collect()
}

fn round_up(x: Vec<Rational>, p: u64) -> Vec<Rational> {
    if max_bits(&x) <= EXACT_BIT_CAP {
        return x;
    }
    x.iter().map(|v| from_scaled(&ceil_scaled(v, p), p)).collect()
}

fn leq(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Looks for `y ≥ x` with `F(y) ≤ y`, which bounds the least fixed point
/// from above.
fn certify_upper(sys: &MonotonePolySystem, x: &[Rational], d: &[Rational], p: u64) -> Option<Vec<Rational>> {
    let ones = vec![Rational::one(); x.len()];
    let mut candidates = Vec::new();
    for t in [2, 4, 16] {
        let t = Rational::from_integer(t.into());
        let mut y: Vec<Rational> = x.iter().zip(d).map(|(a, b)| a + &t * b.abs()).collect();
        if sys.probabilistic {
            for v in &mut y {
                if *v > Rational::one() {
                    *v = Rational::one();
                }
            }
        }
        candidates.push(round_up(y, p));
    }
    if sys.probabilistic {
        candidates.push(ones);
    }
    candidates.into_iter().find(|y| leq(x, y) && leq(&sys.eval(y), y))
}

/// Newton's method on `F(x) − x = 0` from `0`, falling back to damped and
/// then Kleene steps whenever a full step would overshoot. Continues past
/// the residual target for a few steps while trying to certify an upper
/// bound within `ε`.
pub fn newton_lfp(sys: &MonotonePolySystem, eps: &Rational, iter_cap: usize) -> Result<LfpResult> {
    let n = sys.len();
    let p = precision_for(eps);
    let ones = vec![Rational::one(); n];
    let half = Rational::new(1.into(), 2.into());
    let mut x = vec![Rational::zero(); n];
    let mut exact = true;
    let (mut iterations, mut newton_steps, mut kleene_steps, mut polish) = (0, 0, 0, 0);
    let mut best_upper: Option<Vec<Rational>> = None;
    loop {
        let fx = sys.eval(&x);
        check_unit_box(sys, &fx)?;
        let r: Vec<Rational> = fx.iter().zip(&x).map(|(a, b)| a - b).collect();
        let residual = r.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
        let jac = sys.jacobian(&x);
        let mut m = RationalMatrix::identity(n);
        for i in 0..n {
            for k in 0..n {
                m[(i, k)] -= &jac[(i, k)];
            }
        }
        let d = solve_linear_system(&m, &r).ok();
        let mut finish = false;
        if residual <= *eps {
            if let Some(y) = certify_upper(sys, &x, d.as_deref().unwrap_or(&r), p) {
                let width = y.iter().zip(&x).map(|(a, b)| a - b).max().unwrap_or_else(Rational::zero);
                best_upper = Some(y);
                finish = width <= *eps;
            }
            polish += 1;
            finish |= polish > POLISH_STEPS;
        }
        let result = |x: Vec<Rational>, upper, exact| LfpResult {
            method: LfpMethod::Newton,
            x,
            residual: residual.clone(),
            iterations,
            newton_steps,
            kleene_steps,
            upper,
            exact,
        };
        if finish {
            return Ok(result(x, best_upper, exact));
        }
        if iterations >= iter_cap {
            let partial = Partial::Lfp(result(x, best_upper, exact));
            return Err(Error::IterCapExceeded { cap: iter_cap, partial: Box::new(partial) });
        }
        iterations += 1;
        let mut accepted = None;
        if let Some(d) = &d {
            let mut t = Rational::one();
            for _ in 0..3 {
                let mut rounded = exact;
                let cand: Vec<Rational> = x.iter().zip(d).map(|(a, b)| a + &t * b).collect();
                let cand = round_down(cand, p, &mut rounded);
                let within = !sys.probabilistic || leq(&cand, &ones);
                if within && leq(&x, &cand) && cand != x && leq(&cand, &sys.eval(&cand)) {
                    accepted = Some((cand, rounded));
                    break;
                }
                t *= &half;
            }
        }
        match accepted {
            Some((cand, rounded)) => {
                x = cand;
                exact = rounded;
                newton_steps += 1;
            }
            None => {
                x = round_down(fx, p, &mut exact);
                kleene_steps += 1;
            }
        }
    }
}

/// Answer to "is extinction certain?" for one type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qualitative {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtinctionReport {
    pub newton: LfpResult,
    pub kleene: LfpResult,
    /// `|newton − kleene|∞ ≤ 2ε`.
    pub agree: bool,
    /// Decided only from the computed bounds: `Yes` when the lower bound is
    /// exactly 1, `No` when a certified upper bound is below 1.
    pub almost_sure: Vec<Qualitative>,
}

pub fn extinction_report(b: &BranchingProcess, eps: &Rational, iter_cap: usize) -> Result<ExtinctionReport> {
    let sys = bp_to_system(b);
    let newton = newton_lfp(&sys, eps, iter_cap)?;
    let kleene = kleene_lfp(&sys, eps, iter_cap)?;
    let two_eps = eps * Rational::from_integer(2.into());
    let agree = crate::exact::linf_distance(&newton.x, &kleene.x) <= two_eps;
    let almost_sure = (0..sys.len())
        .map(|i| {
            if newton.x[i].is_one() || kleene.x[i].is_one() {
                Qualitative::Yes
            } else if newton.upper.as_ref().is_some_and(|u| u[i] < Rational::one()) {
                Qualitative::No
            } else {
                Qualitative::Unknown
            }
        })
        .collect();
    Ok(ExtinctionReport { newton, kleene, agree, almost_sure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn binary(q: Rational) -> BranchingProcess {
        BranchingProcess::new(vec![vec![(q.clone(), vec![0]), (Rational::one() - q, vec![2])]]).unwrap()
    }

    fn one_var(terms: &[(Rational, u32)]) -> MonotonePolySystem {
        MonotonePolySystem::new(vec![terms.iter().map(|(c, e)| Monomial { coef: c.clone(), exponents: vec![*e] }).collect()])
            .unwrap()
    }

    fn eps9() -> Rational {
        rat(1, 1_000_000_000)
    }

    #[test]
    fn bp_systems() {
        let die = BranchingProcess::new(vec![vec![(int(1), vec![0])]]).unwrap();
        assert_eq!(bp_to_system(&die).eval(&[rat(1, 7)]), vec![int(1)]);
        let s = bp_to_system(&binary(rat(1, 4)));
        assert_eq!(s.eval(&[rat(1, 2)]), vec![rat(1, 4) + rat(3, 4) * rat(1, 4)]);
        let two = BranchingProcess::new(vec![vec![(int(1), vec![1, 1])], vec![(int(1), vec![0, 0])]]).unwrap();
        assert_eq!(bp_to_system(&two).eval(&[rat(2, 3), rat(3, 5)])[0], rat(2, 5));
        assert!(BranchingProcess::new(vec![vec![(rat(1, 2), vec![0])]]).is_err());
    }

    #[test]
    fn kleene_examples() {
        let r = kleene_lfp(&one_var(&[(int(1), 0)]), &eps9(), 100).unwrap();
        assert_eq!((r.x, r.residual, r.iterations), (vec![int(1)], int(0), 1));

        let r = kleene_lfp(&one_var(&[(rat(1, 4), 0), (rat(3, 4), 2)]), &eps9(), 1000).unwrap();
        assert!(r.x[0] < rat(1, 3));
        assert!(rat(1, 3) - &r.x[0] <= int(2) * eps9());

        let r = kleene_lfp(&one_var(&[(rat(1, 2), 0), (rat(1, 2), 2)]), &eps9(), 1_000_000).unwrap();
        assert!(r.residual <= eps9());
        assert!(r.x[0] < int(1));
    }

    #[test]
    fn kleene_cap_returns_lower_bound() {
        match kleene_lfp(&one_var(&[(rat(1, 2), 0), (rat(1, 2), 2)]), &eps9(), 5) {
            Err(Error::IterCapExceeded { cap: 5, partial }) => match *partial {
                Partial::Lfp(r) => {
                    assert_eq!(r.iterations, 5);
                    assert!(r.x[0] < int(1));
                }
                other => panic!("unexpected partial {other:?}"),
            },
            other => panic!("expected cap, got {other:?}"),
        }
    }

    #[test]
    fn newton_examples() {
        let r = newton_lfp(&one_var(&[(rat(1, 4), 0), (rat(3, 4), 2)]), &eps9(), 100).unwrap();
        assert!(r.newton_steps <= 10);
        assert!(r.x[0] <= rat(1, 3) && rat(1, 3) - &r.x[0] <= eps9());
        let up = r.upper.unwrap();
        assert!(up[0] >= rat(1, 3));

        let r = newton_lfp(&one_var(&[(rat(1, 2), 0), (rat(1, 4), 1)]), &eps9(), 100).unwrap();
        assert_eq!(r.x, vec![rat(2, 3)]);
        assert_eq!(r.newton_steps, 1);
        assert!(r.exact);

        let r = newton_lfp(&one_var(&[(int(1), 0)]), &eps9(), 100).unwrap();
        assert_eq!(r.x, vec![int(1)]);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn critical_newton_certifies_one() {
        let r = newton_lfp(&bp_to_system(&binary(rat(1, 2))), &eps9(), 1000).unwrap();
        assert!(int(1) - &r.x[0] <= eps9());
        assert_eq!(r.upper, Some(vec![int(1)]));
    }

    #[test]
    fn scfg_examples() {
        let s = |p: Rational, q: Rational| {
            let rules = vec![
                ScfgRule { lhs: 0, rhs: vec![Symbol::Nonterminal(0), Symbol::Nonterminal(0)], prob: p },
                ScfgRule { lhs: 0, rhs: vec![Symbol::Terminal(0)], prob: q },
            ];
            Scfg::new(vec!["S".into()], vec!["a".into()], rules, 0).unwrap()
        };
        let a = Scfg::new(
            vec!["S".into()],
            vec!["a".into()],
            vec![ScfgRule { lhs: 0, rhs: vec![Symbol::Terminal(0)], prob: int(1) }],
            0,
        )
        .unwrap();
        assert_eq!(newton_lfp(&scfg_to_system(&a), &eps9(), 10).unwrap().x, vec![int(1)]);
        let sys = scfg_to_system(&s(rat(1, 2), rat(1, 2)));
        assert_eq!(sys.eval(&[int(1)]), vec![int(1)]);
        let r = newton_lfp(&scfg_to_system(&s(rat(2, 3), rat(1, 3))), &eps9(), 100).unwrap();
        assert!(r.x[0] <= rat(1, 2) && rat(1, 2) - &r.x[0] <= eps9());
        assert!(Scfg::new(vec!["S".into()], vec![], vec![], 0).is_err());
    }

    #[test]
    fn extinction_examples() {
        let die = BranchingProcess::new(vec![vec![(int(1), vec![0])]]).unwrap();
        let r = extinction_report(&die, &eps9(), 100).unwrap();
        assert_eq!(r.newton.x, vec![int(1)]);
        assert_eq!(r.almost_sure, vec![Qualitative::Yes]);

        let r = extinction_report(&binary(rat(1, 4)), &eps9(), 10_000).unwrap();
        assert!(r.agree);
        assert_eq!(r.almost_sure, vec![Qualitative::No]);

        let r = extinction_report(&binary(int(0)), &eps9(), 100).unwrap();
        assert_eq!(r.newton.x, vec![int(0)]);
        assert_eq!(r.kleene.x, vec![int(0)]);
    }
}
