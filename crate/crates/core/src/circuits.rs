//! Algebraic circuits over `{+, −, *, /, max, min}` with rational constants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{format_rational, parse_rational, Rational};
use crate::normal_form::NormalFormGame;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Max,
    Min,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Max => "max",
            Op::Min => "min",
        }
    }

    fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "add" => Op::Add,
            "sub" => Op::Sub,
            "mul" => Op::Mul,
            "div" => Op::Div,
            "max" => Op::Max,
            "min" => Op::Min,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Gate(usize),
    Input(usize),
    Const(Rational),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Gate(j) => write!(f, "g{j}"),
            Operand::Input(j) => write!(f, "x{j}"),
            Operand::Const(c) => f.write_str(&format_rational(c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub op: Op,
    pub lhs: Operand,
    pub rhs: Operand,
}

/// Gates in topological order; every gate operand refers to an earlier gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicCircuit {
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Operand>,
}

impl AlgebraicCircuit {
    pub fn new(inputs: usize, gates: Vec<Gate>, outputs: Vec<Operand>) -> Result<Self> {
        let check = |o: &Operand, limit: usize, at: &str| match o {
            Operand::Gate(j) if *j >= limit => Err(Error::invalid(format!("{at} refers to g{j} before it is defined"))),
            Operand::Input(j) if *j >= inputs => Err(Error::invalid(format!("{at} refers to missing input x{j}"))),
            _ => Ok(()),
        };
        for (k, g) in gates.iter().enumerate() {
            check(&g.lhs, k, &format!("g{k}"))?;
            check(&g.rhs, k, &format!("g{k}"))?;
        }
        for o in &outputs {
            check(o, gates.len(), "output")?;
        }
        Ok(AlgebraicCircuit { inputs, gates, outputs })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> &[Operand] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn identity(n: usize) -> Self {
        AlgebraicCircuit { inputs: n, gates: Vec::new(), outputs: (0..n).map(Operand::Input).collect() }
    }

    pub fn constant(inputs: usize, values: Vec<Rational>) -> Self {
        AlgebraicCircuit { inputs, gates: Vec::new(), outputs: values.into_iter().map(Operand::Const).collect() }
    }
}

/// Appends gates with light constant folding.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    inputs: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(inputs: usize) -> Self {
        CircuitBuilder { inputs, gates: Vec::new() }
    }

    pub fn input(&self, j: usize) -> Operand {
        assert!(j < self.inputs, "input x{j} out of range");
        Operand::Input(j)
    }

    pub fn constant(&self, c: Rational) -> Operand {
        Operand::Const(c)
    }

    pub fn gate(&mut self, op: Op, lhs: Operand, rhs: Operand) -> Operand {
        if let (Operand::Const(a), Operand::Const(b)) = (&lhs, &rhs) {
            if !(op == Op::Div && b.is_zero()) {
                return Operand::Const(apply(op, a, b).expect("nonzero divisor"));
            }
        }
        let is = |o: &Operand, v: i64| matches!(o, Operand::Const(c) if *c == Rational::from_integer(v.into()));
        match op {
            Op::Add if is(&lhs, 0) => return rhs,
            Op::Add | Op::Sub if is(&rhs, 0) => return lhs,
            Op::Mul if is(&lhs, 1) => return rhs,
            Op::Mul | Op::Div if is(&rhs, 1) => return lhs,
            Op::Mul if is(&lhs, 0) || is(&rhs, 0) => return Operand::Const(Rational::zero()),
            _ => {}
        }
        self.gates.push(Gate { op, lhs, rhs });
        Operand::Gate(self.gates.len() - 1)
    }

    pub fn add(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Add, a, b)
    }

    pub fn sub(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Sub, a, b)
    }

    pub fn mul(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Mul, a, b)
    }

    pub fn div(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Div, a, b)
    }

    pub fn max(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Max, a, b)
    }

    pub fn min(&mut self, a: Operand, b: Operand) -> Operand {
        self.gate(Op::Min, a, b)
    }

    pub fn sum(&mut self, terms: impl IntoIterator<Item = Operand>) -> Operand {
        terms.into_iter().fold(Operand::Const(Rational::zero()), |acc, t| self.add(acc, t))
    }

    /// Appends a copy of `c` applied to `args` and returns its outputs.
    pub fn inline(&mut self, c: &AlgebraicCircuit, args: &[Operand]) -> Vec<Operand> {
        assert_eq!(args.len(), c.inputs, "argument count must match circuit inputs");
        let mut map: Vec<Operand> = Vec::with_capacity(c.gates.len());
        let sub = |map: &[Operand], o: &Operand| match o {
            Operand::Gate(j) => map[*j].clone(),
            Operand::Input(j) => args[*j].clone(),
            Operand::Const(v) => Operand::Const(v.clone()),
        };
        for g in &c.gates {
            let (a, b) = (sub(&map, &g.lhs), sub(&map, &g.rhs));
            let out = self.gate(g.op, a, b);
            map.push(out);
        }
        c.outputs.iter().map(|o| sub(&map, o)).collect()
    }

    pub fn finish(self, outputs: Vec<Operand>) -> AlgebraicCircuit {
        AlgebraicCircuit::new(self.inputs, self.gates, outputs).expect("builder emits valid references")
    }
}

fn apply(op: Op, a: &Rational, b: &Rational) -> Option<Rational> {
    Some(match op {
        Op::Add => a + b,
        Op::Sub => a - b,
        Op::Mul => a * b,
        Op::Div => {
            if b.is_zero() {
                return None;
            }
            a / b
        }
        Op::Max => a.max(b).clone(),
        Op::Min => a.min(b).clone(),
    })
}

/// Which side each max/min gate selected; `true` means the left operand
/// (ties count as left).
pub type Selections = Vec<(usize, bool)>;

fn eval_inner(c: &AlgebraicCircuit, x: &[Rational], mut sel: Option<&mut Selections>) -> Result<Vec<Rational>> {
    if x.len() != c.inputs {
        return Err(Error::dims(format!("circuit takes {} inputs, got {}", c.inputs, x.len())));
    }
    let mut vals: Vec<Rational> = Vec::with_capacity(c.gates.len());
    let get = |vals: &[Rational], o: &Operand| -> Rational {
        match o {
            Operand::Gate(j) => vals[*j].clone(),
            Operand::Input(j) => x[*j].clone(),
            Operand::Const(v) => v.clone(),
        }
    };
    for (k, g) in c.gates.iter().enumerate() {
        let a = get(&vals, &g.lhs);
        let b = get(&vals, &g.rhs);
        if let Some(s) = sel.as_deref_mut() {
            if matches!(g.op, Op::Max) {
                s.push((k, a >= b));
            } else if matches!(g.op, Op::Min) {
                s.push((k, a <= b));
            }
        }
        vals.push(apply(g.op, &a, &b).ok_or(Error::DivisionByZero(k))?);
    }
    Ok(c.outputs.iter().map(|o| get(&vals, o)).collect())
}

/// Exact gate-by-gate evaluation.
pub fn circuit_eval(c: &AlgebraicCircuit, x: &[Rational]) -> Result<Vec<Rational>> {
    eval_inner(c, x, None)
}

/// Evaluation that also records the branch taken at every max/min gate.
pub fn circuit_eval_traced(c: &AlgebraicCircuit, x: &[Rational]) -> Result<(Vec<Rational>, Selections)> {
    let mut sel = Vec::new();
    let out = eval_inner(c, x, Some(&mut sel))?;
    Ok((out, sel))
}

/// True iff the circuit uses only `{+, −, max, min}` and multiplication or
/// division by constants. An operand counts as constant when it is computed
/// from constants alone.
pub fn is_linear_circuit(c: &AlgebraicCircuit) -> bool {
    let mut constant = Vec::with_capacity(c.gates.len());
    let is_const = |constant: &[bool], o: &Operand| match o {
        Operand::Const(_) => true,
        Operand::Input(_) => false,
        Operand::Gate(j) => constant[*j],
    };
    for g in &c.gates {
        let (l, r) = (is_const(&constant, &g.lhs), is_const(&constant, &g.rhs));
        match g.op {
            Op::Mul if !l && !r => return false,
            Op::Div if !r => return false,
            _ => {}
        }
        constant.push(l && r);
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSpec {
    UnitCube(usize),
    UnitSimplex(usize),
    ProductSimplex(Vec<usize>),
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::UnitCube(_) => Ok(()),
            DomainSpec::UnitSimplex(0) => Err(Error::invalid("simplex needs at least one coordinate")),
            DomainSpec::UnitSimplex(_) => Ok(()),
            DomainSpec::ProductSimplex(b) if b.is_empty() || b.contains(&0) => {
                Err(Error::invalid("product blocks must be nonempty and have size at least 1"))
            }
            DomainSpec::ProductSimplex(_) => Ok(()),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            DomainSpec::UnitCube(n) | DomainSpec::UnitSimplex(n) => *n,
            DomainSpec::ProductSimplex(b) => b.iter().sum(),
        }
    }

    /// Block sizes, treating a simplex as one block and a cube as none.
    pub fn blocks(&self) -> Vec<usize> {
        match self {
            DomainSpec::UnitCube(_) => Vec::new(),
            DomainSpec::UnitSimplex(n) => vec![*n],
            DomainSpec::ProductSimplex(b) => b.clone(),
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.dimension() || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        match self {
            DomainSpec::UnitCube(_) => x.iter().all(|v| *v <= Rational::one()),
            _ => {
                let mut at = 0;
                self.blocks().iter().all(|&b| {
                    let s: Rational = x[at..at + b].iter().sum();
                    at += b;
                    s.is_one()
                })
            }
        }
    }

    /// All vertices, or `None` when there are more than `cap`.
    pub fn vertices(&self, cap: usize) -> Option<Vec<Vec<Rational>>> {
        let choices: Vec<Vec<Vec<Rational>>> = match self {
            DomainSpec::UnitCube(n) => vec![vec![vec![Rational::zero()], vec![Rational::one()]]; *n],
            _ => self
                .blocks()
                .iter()
                .map(|&b| {
                    (0..b)
                        .map(|j| (0..b).map(|l| if l == j { Rational::one() } else { Rational::zero() }).collect())
                        .collect()
                })
                .collect(),
        };
        let count = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
        if count > cap {
            return None;
        }
        let mut out = vec![Vec::new()];
        for c in &choices {
            let mut next = Vec::with_capacity(out.len() * c.len());
            for prefix in &out {
                for part in c {
                    let mut v: Vec<Rational> = prefix.clone();
                    v.extend(part.iter().cloned());
                    next.push(v);
                }
            }
            out = next;
        }
        Some(out)
    }

    /// A random rational point with denominators dividing `den`.
    pub fn sample<R: Rng>(&self, rng: &mut R, den: u32) -> Vec<Rational> {
        let d = BigInt::from(den);
        match self {
            DomainSpec::UnitCube(n) => {
                (0..*n).map(|_| Rational::new(rng.gen_range(0..=den).into(), d.clone())).collect()
            }
            _ => {
                let mut out = Vec::new();
                for b in self.blocks() {
                    let w: Vec<u32> = (0..b).map(|_| rng.gen_range(0..=den)).collect();
                    let total: u32 = w.iter().sum();
                    if total == 0 {
                        out.extend((0..b).map(|l| if l == 0 { Rational::one() } else { Rational::zero() }));
                    } else {
                        out.extend(w.iter().map(|&v| Rational::new(v.into(), total.into())));
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    Outside(Vec<Rational>),
    DivisionByZero(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub point: Vec<Rational>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfMapReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl SelfMapReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const VERTEX_CAP: usize = 4096;

/// Evaluates at every vertex (when there are at most 4096) and at `samples`
/// seeded random points. Passing is evidence only.
pub fn validate_self_map(c: &AlgebraicCircuit, d: &DomainSpec, samples: usize, seed: u64) -> Result<SelfMapReport> {
    d.validate()?;
    if c.inputs != d.dimension() || c.outputs.len() != d.dimension() {
        return Err(Error::dims(format!(
            "circuit is {} -> {}, domain has dimension {}",
            c.inputs,
            c.outputs.len(),
            d.dimension()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = d.vertices(VERTEX_CAP).unwrap_or_default();
    points.extend((0..samples).map(|_| d.sample(&mut rng, 32)));
    let mut violations = Vec::new();
    for p in &points {
        match circuit_eval(c, p) {
            Ok(y) if d.contains(&y) => {}
            Ok(y) => violations.push(Violation { point: p.clone(), kind: ViolationKind::Outside(y) }),
            Err(Error::DivisionByZero(g)) => {
                violations.push(Violation { point: p.clone(), kind: ViolationKind::DivisionByZero(g) })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SelfMapReport { checked: points.len(), violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NashCircuitForm {
    /// `x ↦ Π_Δ(x + u(x))`, the Euclidean projection of each block onto its
    /// simplex. Its fixed points are exactly the equilibria.
    #[default]
    DivisionFree,
    /// `x_ij ↦ (x_ij + g_ij)/(1 + Σ_l g_il)`, the classical Nash map.
    Division,
}

/// Circuit on the flattened product of simplexes computing the chosen Nash
/// self-map. Deviation payoffs are expanded into product gates.
pub fn export_nash_circuit(g: &NormalFormGame, form: NashCircuitForm) -> AlgebraicCircuit {
    let counts = g.strategy_counts().to_vec();
    let k = counts.len();
    let offsets: Vec<usize> = counts.iter().scan(0, |acc, &c| Some(std::mem::replace(acc, *acc + c))).collect();
    let total: usize = counts.iter().sum();
    let mut b = CircuitBuilder::new(total);
    let mut outputs = Vec::with_capacity(total);
    for i in 0..k {
        let u = deviation_payoff_gates(&mut b, g, i, &counts, &offsets);
        let x: Vec<Operand> = (0..counts[i]).map(|j| b.input(offsets[i] + j)).collect();
        match form {
            NashCircuitForm::Division => {
                let weighted: Vec<Operand> = x.iter().zip(&u).map(|(xj, uj)| b.mul(xj.clone(), uj.clone())).collect();
                let value = b.sum(weighted);
                let zero = b.constant(Rational::zero());
                let gains: Vec<Operand> = u
                    .iter()
                    .map(|uj| {
                        let d = b.sub(uj.clone(), value.clone());
                        b.max(zero.clone(), d)
                    })
                    .collect();
                let s = b.sum(gains.iter().cloned());
                let one = b.constant(Rational::one());
                let denom = b.add(one, s);
                for (xj, gj) in x.iter().zip(&gains) {
                    let num = b.add(xj.clone(), gj.clone());
                    outputs.push(b.div(num, denom.clone()));
                }
            }
            NashCircuitForm::DivisionFree => {
                let y: Vec<Operand> = x.iter().zip(&u).map(|(xj, uj)| b.add(xj.clone(), uj.clone())).collect();
                outputs.extend(simplex_projection_gates(&mut b, &y));
            }
        }
    }
    b.finish(outputs)
}

fn deviation_payoff_gates(
    b: &mut CircuitBuilder,
    g: &NormalFormGame,
    i: usize,
    counts: &[usize],
    offsets: &[usize],
) -> Vec<Operand> {
    let mut terms: Vec<Vec<Operand>> = vec![Vec::new(); counts[i]];
    let mut products: std::collections::HashMap<Vec<usize>, Operand> = std::collections::HashMap::new();
    for idx in 0..g.num_profiles() {
        let profile = g.profile_of(idx);
        let pay = g.payoff(i, &profile);
        if pay.is_zero() {
            continue;
        }
        let mut others = profile.clone();
        others[i] = usize::MAX;
        let prod = products
            .entry(others)
            .or_insert_with(|| {
                let mut acc = Operand::Const(Rational::one());
                for (l, &s) in profile.iter().enumerate() {
                    if l != i {
                        let xi = b.input(offsets[l] + s);
                        acc = b.mul(acc, xi);
                    }
                }
                acc
            })
            .clone();
        let c = b.constant(pay.clone());
        terms[profile[i]].push(b.mul(c, prod));
    }
    terms.into_iter().map(|t| b.sum(t)).collect()
}

/// Euclidean projection of `y` onto the unit simplex using only max, min,
/// addition and constant scaling: sort descending with an odd-even
/// transposition network, take `τ = max_k (S_k − 1)/k` over prefix sums,
/// and output `max(0, y_j − τ)`.
fn simplex_projection_gates(b: &mut CircuitBuilder, y: &[Operand]) -> Vec<Operand> {
    let n = y.len();
    let mut s = y.to_vec();
    for round in 0..n {
        let mut j = round % 2;
        while j + 1 < n {
            let hi = b.max(s[j].clone(), s[j + 1].clone());
            let lo = b.min(s[j].clone(), s[j + 1].clone());
            s[j] = hi;
            s[j + 1] = lo;
            j += 2;
        }
    }
    let one = b.constant(Rational::one());
    let mut prefix = b.constant(Rational::zero());
    let mut tau: Option<Operand> = None;
    for (k, v) in s.iter().enumerate() {
        prefix = b.add(prefix, v.clone());
        let shifted = b.sub(prefix.clone(), one.clone());
        let scale = b.constant(Rational::new(1.into(), BigInt::from(k + 1)));
        let t = b.mul(scale, shifted);
        tau = Some(match tau {
            None => t,
            Some(prev) => b.max(prev, t),
        });
    }
    let tau = tau.expect("nonempty block");
    let zero = b.constant(Rational::zero());
    y.iter()
        .map(|v| {
            let d = b.sub(v.clone(), tau.clone());
            b.max(zero.clone(), d)
        })
        .collect()
}

impl fmt::Display for AlgebraicCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {}", self.inputs)?;
        for (k, g) in self.gates.iter().enumerate() {
            writeln!(f, "g{k} = {}({}, {})", g.op.name(), g.lhs, g.rhs)?;
        }
        let outs: Vec<String> = self.outputs.iter().map(|o| o.to_string()).collect();
        writeln!(f, "outputs {}", outs.join(", "))
    }
}

fn parse_operand(s: &str, line: usize) -> Result<Operand> {
    let s = s.trim();
    let bad = || Error::invalid(format!("line {line}: bad operand {s:?}"));
    if let Some(rest) = s.strip_prefix('g') {
        return rest.parse().map(Operand::Gate).map_err(|_| bad());
    }
    if let Some(rest) = s.strip_prefix('x') {
        return rest.parse().map(Operand::Input).map_err(|_| bad());
    }
    parse_rational(s).map(Operand::Const).ok_or_else(bad)
}

impl FromStr for AlgebraicCircuit {
    type Err = Error;

    /// Reads `inputs n`, then lines `g<k> = op(a, b)` with `k` counting up
    /// from 0, then `outputs a, b, ...`. Text after `#` is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut inputs = None;
        let mut gates = Vec::new();
        let mut outputs = None;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("inputs") {
                let n = rest.trim().parse().map_err(|_| Error::invalid(format!("line {line_no}: bad input count")))?;
                inputs = Some(n);
            } else if let Some(rest) = line.strip_prefix("outputs") {
                let rest = rest.trim();
                let outs = if rest.is_empty() {
                    Vec::new()
                } else {
                    rest.split(',').map(|t| parse_operand(t, line_no)).collect::<Result<Vec<_>>>()?
                };
                outputs = Some(outs);
            } else {
                let bad = || Error::invalid(format!("line {line_no}: expected g<k> = op(a, b)"));
                let (lhs, rhs) = line.split_once('=').ok_or_else(bad)?;
                let k: usize = lhs.trim().strip_prefix('g').and_then(|v| v.parse().ok()).ok_or_else(bad)?;
                if k != gates.len() {
                    return Err(Error::invalid(format!("line {line_no}: gate g{k} out of order")));
                }
                let rhs = rhs.trim();
                let (name, args) = rhs.split_once('(').ok_or_else(bad)?;
                let args = args.strip_suffix(')').ok_or_else(bad)?;
                let op = Op::parse(name.trim()).ok_or_else(|| Error::invalid(format!("line {line_no}: unknown op {name:?}")))?;
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                gates.push(Gate { op, lhs: parse_operand(a, line_no)?, rhs: parse_operand(b, line_no)? });
            }
        }
        let inputs = inputs.ok_or_else(|| Error::invalid("missing inputs line"))?;
        let outputs = outputs.ok_or_else(|| Error::invalid("missing outputs line"))?;
        AlgebraicCircuit::new(inputs, gates, outputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, RationalMatrix};
    use crate::normal_form::{nash_map, support_enumeration_nash, MixedProfile, SUPPORT_ENUMERATION_CAP};

    fn bimatrix(a: &[&[i64]], b: &[&[i64]]) -> NormalFormGame {
        NormalFormGame::bimatrix(&RationalMatrix::from_i64(a), &RationalMatrix::from_i64(b)).unwrap()
    }

    fn pennies() -> NormalFormGame {
        bimatrix(&[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]])
    }

    #[test]
    fn eval_examples() {
        let c: AlgebraicCircuit = "inputs 1\ng0 = max(0, x0)\noutputs g0".parse().unwrap();
        assert_eq!(circuit_eval(&c, &[int(-1)]).unwrap(), vec![int(0)]);
        let c: AlgebraicCircuit = "inputs 1\ng0 = add(1, x0)\ng1 = div(x0, g0)\noutputs g1".parse().unwrap();
        assert_eq!(circuit_eval(&c, &[int(1)]).unwrap(), vec![rat(1, 2)]);
        assert!(matches!(circuit_eval(&c, &[int(-1)]), Err(Error::DivisionByZero(1))));
        assert!(circuit_eval(&c, &[]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "inputs 2\n# comment\ng0 = mul(1/2, x0)\ng1 = max(x0, x1)\ng2 = add(g1, g0)\noutputs g2, x1, -3\n";
        let c: AlgebraicCircuit = text.parse().unwrap();
        let again: AlgebraicCircuit = c.to_string().parse().unwrap();
        assert_eq!(c, again);
        assert!("inputs 1\ng1 = add(x0, x0)\noutputs g1".parse::<AlgebraicCircuit>().is_err());
        assert!("inputs 1\ng0 = add(g0, x0)\noutputs g0".parse::<AlgebraicCircuit>().is_err());
        assert!("inputs 1\ng0 = pow(x0, x0)\noutputs g0".parse::<AlgebraicCircuit>().is_err());
    }

    #[test]
    fn linearity_examples() {
        let c: AlgebraicCircuit = "inputs 2\ng0 = max(x0, x1)\ng1 = mul(1/2, x0)\ng2 = add(g0, g1)\noutputs g2".parse().unwrap();
        assert!(is_linear_circuit(&c));
        let c: AlgebraicCircuit = "inputs 2\ng0 = mul(x0, x1)\noutputs g0".parse().unwrap();
        assert!(!is_linear_circuit(&c));
        let c: AlgebraicCircuit = "inputs 1\ng0 = add(1, 2)\ng1 = mul(g0, x0)\ng2 = div(x0, g0)\noutputs g2".parse().unwrap();
        assert!(is_linear_circuit(&c));
        let coordination = bimatrix(&[&[2, 0], &[0, 1]], &[&[2, 0], &[0, 1]]);
        assert!(!is_linear_circuit(&export_nash_circuit(&coordination, NashCircuitForm::Division)));
        // with two players the projection form only scales inputs by payoffs
        assert!(is_linear_circuit(&export_nash_circuit(&coordination, NashCircuitForm::DivisionFree)));
        let three = NormalFormGame::new(vec![2, 2, 2], vec![(1..=8).map(int).collect(); 3]).unwrap();
        assert!(!is_linear_circuit(&export_nash_circuit(&three, NashCircuitForm::DivisionFree)));
    }

    #[test]
    fn nash_export_examples() {
        let single = bimatrix(&[&[3]], &[&[-2]]);
        for form in [NashCircuitForm::DivisionFree, NashCircuitForm::Division] {
            let c = export_nash_circuit(&single, form);
            assert_eq!(circuit_eval(&c, &[int(1), int(1)]).unwrap(), vec![int(1), int(1)]);
        }
        let uniform = MixedProfile::uniform(&[2, 2]).flat();
        for form in [NashCircuitForm::DivisionFree, NashCircuitForm::Division] {
            assert_eq!(circuit_eval(&export_nash_circuit(&pennies(), form), &uniform).unwrap(), uniform);
        }
        let coordination = bimatrix(&[&[2, 0], &[0, 1]], &[&[2, 0], &[0, 1]]);
        let e1 = vec![int(1), int(0), int(1), int(0)];
        assert_eq!(circuit_eval(&export_nash_circuit(&coordination, NashCircuitForm::default()), &e1).unwrap(), e1);
    }

    #[test]
    fn division_form_matches_nash_map() {
        let g = bimatrix(&[&[3, 0, 1], &[-1, 2, 2]], &[&[1, 4, 0], &[2, -3, 1]]);
        let c = export_nash_circuit(&g, NashCircuitForm::Division);
        let x = MixedProfile::new(vec![vec![rat(1, 3), rat(2, 3)], vec![rat(1, 2), rat(1, 4), rat(1, 4)]]).unwrap();
        assert_eq!(circuit_eval(&c, &x.flat()).unwrap(), nash_map(&g, &x).unwrap().flat());
    }

    #[test]
    fn projection_fixed_points_are_equilibria() {
        let g = bimatrix(&[&[3, 0], &[5, 1]], &[&[3, 5], &[0, 1]]);
        let c = export_nash_circuit(&g, NashCircuitForm::DivisionFree);
        let eqs = support_enumeration_nash(&g, SUPPORT_ENUMERATION_CAP).unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                let x = vec![rat(i, 6), rat(6 - i, 6), rat(j, 6), rat(6 - j, 6)];
                let fixed = circuit_eval(&c, &x).unwrap() == x;
                let prof = MixedProfile::new(vec![x[..2].to_vec(), x[2..].to_vec()]).unwrap();
                assert_eq!(fixed, eqs.contains(&prof), "at {x:?}");
            }
        }
    }

    #[test]
    fn self_map_examples() {
        let r = validate_self_map(&AlgebraicCircuit::identity(3), &DomainSpec::UnitCube(3), 50, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 58);
        let two = AlgebraicCircuit::constant(2, vec![int(2), int(2)]);
        let r = validate_self_map(&two, &DomainSpec::UnitCube(2), 20, 1).unwrap();
        assert_eq!(r.violations.len(), r.checked);
        let c = export_nash_circuit(&pennies(), NashCircuitForm::DivisionFree);
        let r = validate_self_map(&c, &DomainSpec::ProductSimplex(vec![2, 2]), 1000, 9).unwrap();
        assert!(r.passed());
        assert!(validate_self_map(&c, &DomainSpec::UnitCube(3), 1, 1).is_err());
    }
}
