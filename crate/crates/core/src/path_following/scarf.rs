use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::simplicial::follow_path;
use crate::circuits::{circuit_eval, AlgebraicCircuit, CircuitBuilder, DomainSpec, Operand};
use crate::exact::{linf_distance, Rational};
use crate::{Error, Result};

pub const DEFAULT_SCARF_RETRIES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScarfOptions {
    /// Grid pitch; defaults to `ε/4`.
    pub pitch: Option<Rational>,
    /// Number of times the pitch is halved after a failed residual check.
    pub retries: usize,
    pub step_cap: usize,
}

impl Default for ScarfOptions {
    fn default() -> Self {
        ScarfOptions { pitch: None, retries: DEFAULT_SCARF_RETRIES, step_cap: usize::MAX }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScarfResult {
    pub x: Vec<Rational>,
    /// `|F(x) − x|∞`, computed by direct evaluation.
    pub residual: Rational,
    pub pitch: Rational,
    /// Grid resolution `M`, so vertices have denominators dividing `M`.
    pub resolution: u64,
    pub refinements: usize,
    pub pivots: usize,
}

/// Domains other than a single simplex are run on the simplex `Δ_N`,
/// `N` = total coordinate count, through a retraction onto the embedded copy
/// of the product (see [`retract`]).
struct Embedding {
    blocks: Vec<usize>,
    cube: bool,
}

impl Embedding {
    fn new(d: &DomainSpec) -> Self {
        match d {
            DomainSpec::UnitCube(n) => Embedding { blocks: vec![2; *n], cube: true },
            DomainSpec::UnitSimplex(n) => Embedding { blocks: vec![*n], cube: false },
            DomainSpec::ProductSimplex(b) => Embedding { blocks: b.clone(), cube: false },
        }
    }

    fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Maps `z ∈ Δ_N` onto the product of simplexes. Block `i` with sum
    /// `s_i` and size `m_i` becomes `(z_j + max(0, 1/k − s_i)/m_i) / max(s_i, 1/k)`,
    /// which is `k·z` on the embedded copy where every `s_i = 1/k`.
    fn retract(&self, z: &[Rational]) -> Vec<Rational> {
        if self.blocks.len() == 1 {
            return z.to_vec();
        }
        let t = Rational::new(BigInt::one(), BigInt::from(self.blocks.len()));
        let mut out = Vec::with_capacity(z.len());
        let mut at = 0;
        for &m in &self.blocks {
            let part = &z[at..at + m];
            let s: Rational = part.iter().sum();
            let deficit = if s < t { (&t - &s) / Rational::from_integer(m.into()) } else { Rational::zero() };
            let scale = if s > t { s } else { t.clone() };
            out.extend(part.iter().map(|v| (v + &deficit) / &scale));
            at += m;
        }
        out
    }

    fn to_domain(&self, product: Vec<Rational>) -> Vec<Rational> {
        if self.cube {
            product.into_iter().step_by(2).collect()
        } else {
            product
        }
    }

    fn from_domain(&self, y: Vec<Rational>) -> Vec<Rational> {
        if self.cube {
            y.into_iter().flat_map(|v| [v.clone(), Rational::one() - v]).collect()
        } else {
            y
        }
    }

    /// `G(z) = F(r(z))/k` on the simplex.
    fn lifted(&self, f: &AlgebraicCircuit, z: &[Rational]) -> Result<Vec<Rational>> {
        let x = self.to_domain(self.retract(z));
        let y = self.from_domain(circuit_eval(f, &x)?);
        if self.blocks.len() == 1 {
            return Ok(y);
        }
        let k = Rational::from_integer(self.blocks.len().into());
        Ok(y.into_iter().map(|v| v / &k).collect())
    }
}

/// Sperner label used by Scarf's algorithm: the first `i` with
/// `v_i > F_i(v)`, or the first maximal coordinate at a fixed point.
fn scarf_label(v: &[Rational], fv: &[Rational]) -> usize {
    if let Some(i) = v.iter().zip(fv).position(|(a, b)| a > b) {
        return i;
    }
    let mx = v.iter().max().expect("nonempty point");
    v.iter().position(|a| a == mx).expect("max is attained")
}

fn resolution_for(pitch: &Rational) -> Result<u64> {
    if !pitch.is_positive() {
        return Err(Error::invalid("grid pitch must be positive"));
    }
    let inv = pitch.recip();
    let (q, r) = inv.numer().div_rem(inv.denom());
    let m = if r.is_zero() { q } else { q + 1 };
    m.to_u64().filter(|&m| m <= i64::MAX as u64).ok_or_else(|| Error::invalid("grid pitch too small"))
}

/// Weak approximate fixed point of a circuit mapping `domain` into itself:
/// a point `x` with `|F(x) − x|∞ ≤ ε`, found via a fully labeled cell of a
/// Freudenthal grid and checked by evaluating the circuit at the returned
/// barycenter. The pitch is halved on every failed check.
pub fn scarf_weak_fixpoint(
    f: &AlgebraicCircuit,
    domain: &DomainSpec,
    eps: &Rational,
    opts: &ScarfOptions,
) -> Result<ScarfResult> {
    domain.validate()?;
    if !eps.is_positive() {
        return Err(Error::invalid("ε must be positive"));
    }
    let dim = domain.dimension();
    if f.inputs() != dim || f.outputs().len() != dim {
        return Err(Error::dims(format!("circuit is {} -> {}, domain has dimension {dim}", f.inputs(), f.outputs().len())));
    }
    let emb = Embedding::new(domain);
    let n = emb.dim();
    let mut pitch = opts.pitch.clone().unwrap_or_else(|| eps / Rational::from_integer(4.into()));
    let half = Rational::new(1.into(), 2.into());
    for refinement in 0..=opts.retries {
        let m = resolution_for(&pitch)?;
        let mr = Rational::from_integer(m.into());
        let walk = follow_path(
            n - 1,
            m as i64,
            |v| {
                let z: Vec<Rational> = v.iter().map(|&c| Rational::from_integer(c.into()) / &mr).collect();
                let g = emb.lifted(f, &z)?;
                Ok(scarf_label(&z, &g))
            },
            opts.step_cap,
        )
        .map_err(|e| match e {
            Error::Invalid(msg) => Error::invalid(format!("map does not send the domain into itself: {msg}")),
            other => other,
        })?;
        let count = Rational::from_integer((walk.cell.vertices.len() as u64 * m).into());
        let mut bary = vec![Rational::zero(); n];
        for v in &walk.cell.vertices {
            for (b, &c) in bary.iter_mut().zip(v) {
                *b += Rational::from_integer(c.into());
            }
        }
        let bary: Vec<Rational> = bary.into_iter().map(|b| b / &count).collect();
        let x = emb.to_domain(emb.retract(&bary));
        let fx = circuit_eval(f, &x)?;
        let residual = linf_distance(&fx, &x);
        if residual <= *eps {
            return Ok(ScarfResult { x, residual, pitch, resolution: m, refinements: refinement, pivots: walk.pivots });
        }
        pitch *= &half;
    }
    Err(Error::ResidualNotMet { retries: opts.retries })
}

/// Exchange economy given by its excess-demand circuit `g : Δ_n → R^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeEconomy {
    excess: AlgebraicCircuit,
}

impl ExchangeEconomy {
    pub fn new(excess: AlgebraicCircuit) -> Result<Self> {
        if excess.inputs() == 0 || excess.inputs() != excess.outputs().len() {
            return Err(Error::dims("excess demand must map n prices to n commodities, n ≥ 1"));
        }
        Ok(ExchangeEconomy { excess })
    }

    pub fn commodities(&self) -> usize {
        self.excess.inputs()
    }

    pub fn excess(&self) -> &AlgebraicCircuit {
        &self.excess
    }
}

/// `η = ε/(4n)`.
pub fn default_eta(e: &ExchangeEconomy, eps: &Rational) -> Rational {
    eps / Rational::from_integer((4 * e.commodities()).into())
}

/// `c(p) = (1 − nη)p + η`, which keeps every price at least `η`.
fn clamp_gates(b: &mut CircuitBuilder, n: usize, eta: &Rational) -> Vec<Operand> {
    let scale = Rational::one() - eta * Rational::from_integer(n.into());
    (0..n)
        .map(|i| {
            let s = b.constant(scale.clone());
            let x = b.input(i);
            let p = b.mul(s, x);
            let e = b.constant(eta.clone());
            b.add(p, e)
        })
        .collect()
}

/// `F_i(p) = (p_i + max(0, g_i(c(p)))) / (1 + Σ_j max(0, g_j(c(p))))`.
pub fn market_map_circuit(e: &ExchangeEconomy, eta: &Rational) -> AlgebraicCircuit {
    let n = e.commodities();
    let mut b = CircuitBuilder::new(n);
    let c = clamp_gates(&mut b, n, eta);
    let g = b.inline(&e.excess, &c);
    let zero = b.constant(Rational::zero());
    let pos: Vec<Operand> = g.into_iter().map(|gi| b.max(zero.clone(), gi)).collect();
    let s = b.sum(pos.iter().cloned());
    let one = b.constant(Rational::one());
    let denom = b.add(one, s);
    let outs = pos
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            let p = b.input(i);
            let num = b.add(p, h);
            b.div(num, denom.clone())
        })
        .collect();
    b.finish(outs)
}

/// Sampled checks of Walras' law `Σ p_i g_i(p) = 0` and of homogeneity
/// `g(λp) = g(p)` for `λ ∈ {2, 1/3}` at clamped interior points.
pub fn validate_economy(e: &ExchangeEconomy, eta: &Rational, samples: usize, seed: u64) -> Result<()> {
    let n = e.commodities();
    let simplex = DomainSpec::UnitSimplex(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = Rational::one() - eta * Rational::from_integer(n.into());
    let lambdas = [Rational::from_integer(2.into()), Rational::new(1.into(), 3.into())];
    let fail = |msg: String| Error::ValidationFailed(msg);
    for _ in 0..samples {
        let p: Vec<Rational> = simplex.sample(&mut rng, 16).iter().map(|v| &scale * v + eta).collect();
        let g = circuit_eval(&e.excess, &p).map_err(|err| fail(format!("excess demand undefined at {p:?}: {err}")))?;
        let walras: Rational = p.iter().zip(&g).map(|(a, b)| a * b).sum();
        if !walras.is_zero() {
            return Err(fail(format!("Walras' law fails at {p:?}: p·g(p) = {walras}")));
        }
        for l in &lambdas {
            let lp: Vec<Rational> = p.iter().map(|v| v * l).collect();
            let gl = circuit_eval(&e.excess, &lp).map_err(|err| fail(format!("excess demand undefined at {lp:?}: {err}")))?;
            if gl != g {
                return Err(fail(format!("excess demand is not homogeneous of degree 0 at {p:?}")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketResult {
    pub prices: Vec<Rational>,
    pub residual: Rational,
    pub eta: Rational,
    pub scarf: ScarfResult,
}

/// Weak approximate market equilibrium: prices with `|F(p) − p|∞ ≤ ε` for
/// the excess-demand map above.
pub fn market_equilibrium_weak(e: &ExchangeEconomy, eps: &Rational, opts: &ScarfOptions) -> Result<MarketResult> {
    let eta = default_eta(e, eps);
    validate_economy(e, &eta, 16, 0)?;
    let f = market_map_circuit(e, &eta);
    let scarf = scarf_weak_fixpoint(&f, &DomainSpec::UnitSimplex(e.commodities()), eps, opts)?;
    Ok(MarketResult { prices: scarf.x.clone(), residual: scarf.residual.clone(), eta, scarf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{export_nash_circuit, NashCircuitForm};
    use crate::exact::{int, rat, RationalMatrix};
    use crate::normal_form::NormalFormGame;

    fn eps() -> Rational {
        rat(1, 100)
    }

    #[test]
    fn identity_has_zero_residual() {
        for d in [DomainSpec::UnitSimplex(3), DomainSpec::ProductSimplex(vec![2, 2]), DomainSpec::UnitCube(2)] {
            let id = AlgebraicCircuit::identity(d.dimension());
            let r = scarf_weak_fixpoint(&id, &d, &eps(), &ScarfOptions::default()).unwrap();
            assert_eq!(r.residual, int(0));
            assert!(d.contains(&r.x));
        }
    }

    #[test]
    fn constant_map_found() {
        let c = vec![rat(1, 5), rat(1, 2), rat(3, 10)];
        let f = AlgebraicCircuit::constant(3, c.clone());
        let r = scarf_weak_fixpoint(&f, &DomainSpec::UnitSimplex(3), &eps(), &ScarfOptions::default()).unwrap();
        assert!(linf_distance(&r.x, &c) <= eps());
    }

    #[test]
    fn matching_pennies_near_uniform() {
        let a = RationalMatrix::from_i64(&[&[1, -1], &[-1, 1]]);
        let g = NormalFormGame::bimatrix(&a, &a.map(|v| -v)).unwrap();
        for form in [NashCircuitForm::DivisionFree, NashCircuitForm::Division] {
            let f = export_nash_circuit(&g, form);
            let r = scarf_weak_fixpoint(&f, &DomainSpec::ProductSimplex(vec![2, 2]), &eps(), &ScarfOptions::default())
                .unwrap();
            assert!(r.residual <= eps());
            let uniform = vec![rat(1, 2); 4];
            assert!(linf_distance(&r.x, &uniform) <= rat(1, 10), "{:?}", r.x);
        }
    }

    #[test]
    fn non_self_map_rejected() {
        let f = AlgebraicCircuit::constant(2, vec![int(2), int(-1)]);
        assert!(scarf_weak_fixpoint(&f, &DomainSpec::UnitSimplex(2), &eps(), &ScarfOptions::default()).is_err());
    }

    fn two_good_economy() -> ExchangeEconomy {
        let c: AlgebraicCircuit = "inputs 2\ng0 = div(x1, x0)\ng1 = sub(g0, 1)\ng2 = div(x0, x1)\ng3 = sub(g2, 1)\noutputs g1, g3"
            .parse()
            .unwrap();
        ExchangeEconomy::new(c).unwrap()
    }

    #[test]
    fn market_examples() {
        let zero = ExchangeEconomy::new(AlgebraicCircuit::constant(2, vec![int(0), int(0)])).unwrap();
        let r = market_equilibrium_weak(&zero, &eps(), &ScarfOptions::default()).unwrap();
        assert_eq!(r.residual, int(0));

        let e = two_good_economy();
        let eps = rat(1, 1000);
        validate_economy(&e, &default_eta(&e, &eps), 32, 5).unwrap();
        let r = market_equilibrium_weak(&e, &eps, &ScarfOptions::default()).unwrap();
        assert!(r.residual <= eps);
        assert!(linf_distance(&r.prices, &[rat(1, 2), rat(1, 2)]) <= rat(1, 100));
    }

    #[test]
    fn market_validation_failures() {
        let bad: AlgebraicCircuit = "inputs 2\noutputs 1, 1".parse().unwrap();
        let e = ExchangeEconomy::new(bad).unwrap();
        assert!(matches!(market_equilibrium_weak(&e, &eps(), &ScarfOptions::default()), Err(Error::ValidationFailed(_))));
        let not_homogeneous: AlgebraicCircuit = "inputs 2\ng0 = sub(x1, x0)\ng1 = sub(x0, x1)\ng2 = mul(x1, g0)\ng3 = mul(x0, g1)\noutputs g2, g3"
            .parse()
            .unwrap();
        // Walras holds identically: p0·p1(p1 − p0) + p1·p0(p0 − p1) = 0
        let e = ExchangeEconomy::new(not_homogeneous).unwrap();
        assert!(matches!(validate_economy(&e, &rat(1, 100), 8, 0), Err(Error::ValidationFailed(_))));
    }
}
