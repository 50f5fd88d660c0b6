//! On-disk instance format: one JSON object tagged by `kind`. Numbers are
//! JSON integers or `"num/den"` strings.

use equilibria::circuits::{AlgebraicCircuit, DomainSpec};
use equilibria::exact::{format_rational, parse_rational, Rational, RationalMatrix, SlpCircuit};
use equilibria::lfp::{BranchingProcess, Scfg, ScfgRule, Symbol};
use equilibria::local_search::{CongestionGame, Configuration, HopfieldNet};
use equilibria::normal_form::NormalFormGame;
use equilibria::path_following::{BimatrixGame, ExchangeEconomy};
use equilibria::stochastic::{
    MeanPayoffGame, ParityGame, Player, ShapleyGame, ShapleyState, SimpleStochasticGame, SsgNode,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const KINDS: [&str; 15] = [
    "hopfield", "congestion", "nfg", "bimatrix", "sperner", "market", "shapley", "ssg", "mpg", "parity", "bp", "scfg",
    "circuit", "sqrtsum", "posslp",
];

/// An exact number as written in a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_rational(&self) -> CliResult<Rational> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s).ok_or_else(|| CliError::BadRational(s.clone())),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        match r.is_integer().then(|| r.numer().to_i64()).flatten() {
            Some(n) => Num::Int(n),
            None => Num::Text(format_rational(r)),
        }
    }

    fn to_integer(&self) -> CliResult<BigInt> {
        let r = self.to_rational()?;
        if !r.is_integer() {
            return Err(CliError::Schema(format!("expected an integer, found {}", format_rational(&r))));
        }
        Ok(r.to_integer())
    }

    fn to_positive(&self) -> CliResult<BigUint> {
        let n = self.to_integer()?;
        if !n.is_positive() {
            return Err(CliError::Schema(format!("expected a positive integer, found {n}")));
        }
        Ok(n.to_biguint().expect("positive"))
    }
}

fn rationals(v: &[Num]) -> CliResult<Vec<Rational>> {
    v.iter().map(Num::to_rational).collect()
}

fn matrix(rows: &[Vec<Num>], what: &str) -> CliResult<RationalMatrix> {
    let rows = rows.iter().map(|r| rationals(r)).collect::<CliResult<Vec<_>>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Schema(format!("{what}: rows differ in length")));
    }
    RationalMatrix::from_rows(rows).map_err(CliError::schema)
}

fn nums(m: &RationalMatrix) -> Vec<Vec<Num>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(Num::from_rational).collect()).collect()
}

fn player(n: u8, what: &str) -> CliResult<Player> {
    Player::from_number(n.into()).ok_or_else(|| CliError::Schema(format!("{what}: player must be 1 or 2, found {n}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfieldDoc {
    pub thresholds: Vec<Num>,
    /// `[u, v, weight]`.
    pub edges: Vec<(usize, usize, Num)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongestionDoc {
    pub resources: usize,
    /// Per player, per strategy, the resources used.
    pub strategies: Vec<Vec<Vec<usize>>>,
    /// Per resource, the cost at load `0..=players`.
    pub costs: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfgDoc {
    pub strategies: Vec<usize>,
    /// One flat payoff tensor per player, first player's strategy most
    /// significant.
    pub payoffs: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimatrixDoc {
    pub a: Vec<Vec<Num>>,
    pub b: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpernerDoc {
    pub n: u64,
    /// Circuit text mapping `(i_1, i_2, i_3)` to a color in `{1, 2, 3}`.
    pub coloring: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketDoc {
    /// Circuit text for the excess-demand map on the price simplex.
    pub excess: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapleyStateDoc {
    pub rewards: Vec<Vec<Num>>,
    pub stop: Vec<Vec<Num>>,
    /// One matrix per target state.
    pub transitions: Vec<Vec<Vec<Num>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapleyDoc {
    pub states: Vec<ShapleyStateDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SsgNodeDoc {
    Max { succ: Vec<usize> },
    Min { succ: Vec<usize> },
    Random { succ: Vec<(usize, Num)> },
    Sink { player: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsgDoc {
    pub nodes: Vec<SsgNodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpgDoc {
    pub owners: Vec<u8>,
    /// Per node, `[successor, reward]` pairs.
    pub edges: Vec<Vec<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityDoc {
    pub owners: Vec<u8>,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpRuleDoc {
    pub prob: Num,
    /// Number of children of each type.
    pub offspring: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpDoc {
    pub types: Vec<Vec<BpRuleDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScfgRuleDoc {
    pub lhs: String,
    pub rhs: Vec<String>,
    pub prob: Num,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScfgDoc {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub start: String,
    pub rules: Vec<ScfgRuleDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainDoc {
    Cube { dim: usize },
    Simplex { dim: usize },
    Product { blocks: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub domain: DomainDoc,
    pub circuit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqrtSumDoc {
    pub d: Vec<Num>,
    pub k: Num,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosSlpDoc {
    /// Straight-line program text.
    pub program: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceDocument {
    Hopfield(HopfieldDoc),
    Congestion(CongestionDoc),
    Nfg(NfgDoc),
    Bimatrix(BimatrixDoc),
    Sperner(SpernerDoc),
    Market(MarketDoc),
    Shapley(ShapleyDoc),
    Ssg(SsgDoc),
    Mpg(MpgDoc),
    Parity(ParityDoc),
    Bp(BpDoc),
    Scfg(ScfgDoc),
    Circuit(CircuitDoc),
    Sqrtsum(SqrtSumDoc),
    Posslp(PosSlpDoc),
}

/// Validated instance built from a document.
#[derive(Debug, Clone)]
pub enum Instance {
    Hopfield { net: HopfieldNet, initial: Configuration },
    Congestion { game: CongestionGame, initial: Vec<usize> },
    Nfg(NormalFormGame),
    Bimatrix(BimatrixGame),
    Sperner { n: u64, coloring: AlgebraicCircuit },
    Market(ExchangeEconomy),
    Shapley(ShapleyGame),
    Ssg(SimpleStochasticGame),
    Mpg(MeanPayoffGame),
    Parity(ParityGame),
    Bp(BranchingProcess),
    Scfg(Scfg),
    Circuit { circuit: AlgebraicCircuit, domain: DomainSpec },
    SqrtSum { d: Vec<BigUint>, k: BigUint },
    PosSlp(SlpCircuit),
}

fn circuit(text: &str, what: &str) -> CliResult<AlgebraicCircuit> {
    text.parse().map_err(|e| CliError::Schema(format!("{what}: {e}")))
}

/// Parses and validates a document. Syntax errors carry the line and
/// column, shape errors the path of the offending field.
pub fn parse_instance(text: &str) -> CliResult<InstanceDocument> {
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let obj = value.as_object_mut().ok_or_else(|| CliError::Schema("instance must be a JSON object".into()))?;
    let kind = match obj.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        Some(_) => return Err(CliError::Schema("field `kind` must be a string".into())),
        None => return Err(CliError::Schema("missing field `kind`".into())),
    };
    fn body<T: serde::de::DeserializeOwned>(kind: &str, v: serde_json::Value) -> CliResult<T> {
        serde_path_to_error::deserialize(v).map_err(|e| {
            let path = e.path().to_string();
            let at = if path == "." { String::new() } else { format!(" at `{path}`") };
            CliError::Schema(format!("{kind}{at}: {}", e.into_inner()))
        })
    }
    use InstanceDocument as D;
    let doc = match kind.as_str() {
        "hopfield" => D::Hopfield(body(&kind, value)?),
        "congestion" => D::Congestion(body(&kind, value)?),
        "nfg" => D::Nfg(body(&kind, value)?),
        "bimatrix" => D::Bimatrix(body(&kind, value)?),
        "sperner" => D::Sperner(body(&kind, value)?),
        "market" => D::Market(body(&kind, value)?),
        "shapley" => D::Shapley(body(&kind, value)?),
        "ssg" => D::Ssg(body(&kind, value)?),
        "mpg" => D::Mpg(body(&kind, value)?),
        "parity" => D::Parity(body(&kind, value)?),
        "bp" => D::Bp(body(&kind, value)?),
        "scfg" => D::Scfg(body(&kind, value)?),
        "circuit" => D::Circuit(body(&kind, value)?),
        "sqrtsum" => D::Sqrtsum(body(&kind, value)?),
        "posslp" => D::Posslp(body(&kind, value)?),
        _ => return Err(CliError::UnknownKind(kind)),
    };
    doc.to_instance()?;
    Ok(doc)
}

/// Canonical JSON form, pretty-printed with a trailing newline.
pub fn emit_instance(doc: &InstanceDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

impl InstanceDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceDocument::Hopfield(_) => "hopfield",
            InstanceDocument::Congestion(_) => "congestion",
            InstanceDocument::Nfg(_) => "nfg",
            InstanceDocument::Bimatrix(_) => "bimatrix",
            InstanceDocument::Sperner(_) => "sperner",
            InstanceDocument::Market(_) => "market",
            InstanceDocument::Shapley(_) => "shapley",
            InstanceDocument::Ssg(_) => "ssg",
            InstanceDocument::Mpg(_) => "mpg",
            InstanceDocument::Parity(_) => "parity",
            InstanceDocument::Bp(_) => "bp",
            InstanceDocument::Scfg(_) => "scfg",
            InstanceDocument::Circuit(_) => "circuit",
            InstanceDocument::Sqrtsum(_) => "sqrtsum",
            InstanceDocument::Posslp(_) => "posslp",
        }
    }

    pub fn to_instance(&self) -> CliResult<Instance> {
        use InstanceDocument as D;
        Ok(match self {
            D::Hopfield(d) => {
                let edges = d
                    .edges
                    .iter()
                    .map(|(u, v, w)| Ok((*u, *v, w.to_rational()?)))
                    .collect::<CliResult<Vec<_>>>()?;
                let net = HopfieldNet::new(rationals(&d.thresholds)?, edges).map_err(CliError::schema)?;
                let initial = match &d.initial {
                    Some(s) if s.len() != net.len() => {
                        return Err(CliError::Schema(format!("initial configuration has {} entries, net has {}", s.len(), net.len())))
                    }
                    Some(s) => Configuration::new(s.clone()).map_err(CliError::schema)?,
                    None => Configuration::all_up(net.len()),
                };
                Instance::Hopfield { net, initial }
            }
            D::Congestion(d) => {
                let game = CongestionGame::new(d.resources, d.strategies.clone(), d.costs.clone()).map_err(CliError::schema)?;
                let initial = d.initial.clone().unwrap_or_else(|| vec![0; game.players()]);
                game.validate_profile(&initial).map_err(CliError::schema)?;
                Instance::Congestion { game, initial }
            }
            D::Nfg(d) => {
                let payoffs = d.payoffs.iter().map(|p| rationals(p)).collect::<CliResult<Vec<_>>>()?;
                Instance::Nfg(NormalFormGame::new(d.strategies.clone(), payoffs).map_err(CliError::schema)?)
            }
            D::Bimatrix(d) => {
                let g = BimatrixGame::new(matrix(&d.a, "a")?, matrix(&d.b, "b")?).map_err(CliError::schema)?;
                Instance::Bimatrix(g)
            }
            D::Sperner(d) => {
                let coloring = circuit(&d.coloring, "coloring")?;
                if coloring.inputs() != 3 || coloring.outputs().len() != 1 {
                    return Err(CliError::Schema("coloring must map 3 inputs to 1 output".into()));
                }
                if d.n == 0 {
                    return Err(CliError::Schema("resolution n must be at least 1".into()));
                }
                Instance::Sperner { n: d.n, coloring }
            }
            D::Market(d) => Instance::Market(ExchangeEconomy::new(circuit(&d.excess, "excess")?).map_err(CliError::schema)?),
            D::Shapley(d) => {
                let states = d
                    .states
                    .iter()
                    .enumerate()
                    .map(|(u, s)| {
                        Ok(ShapleyState {
                            rewards: matrix(&s.rewards, &format!("state {u} rewards"))?,
                            stop: matrix(&s.stop, &format!("state {u} stop"))?,
                            transitions: s
                                .transitions
                                .iter()
                                .map(|t| matrix(t, &format!("state {u} transitions")))
                                .collect::<CliResult<_>>()?,
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Instance::Shapley(ShapleyGame::new(states).map_err(CliError::schema)?)
            }
            D::Ssg(d) => {
                let nodes = d
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(u, n)| {
                        Ok(match n {
                            SsgNodeDoc::Max { succ } => SsgNode::Max(succ.clone()),
                            SsgNodeDoc::Min { succ } => SsgNode::Min(succ.clone()),
                            SsgNodeDoc::Random { succ } => SsgNode::Random(
                                succ.iter().map(|(w, p)| Ok((*w, p.to_rational()?))).collect::<CliResult<_>>()?,
                            ),
                            SsgNodeDoc::Sink { player: p } => SsgNode::Sink(player(*p, &format!("node {u}"))?),
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Instance::Ssg(SimpleStochasticGame::new(nodes).map_err(CliError::schema)?)
            }
            D::Mpg(d) => {
                let owners = d.owners.iter().map(|&p| player(p, "owners")).collect::<CliResult<Vec<_>>>()?;
                Instance::Mpg(MeanPayoffGame::new(owners, d.edges.clone()).map_err(CliError::schema)?)
            }
            D::Parity(d) => {
                let owners = d.owners.iter().map(|&p| player(p, "owners")).collect::<CliResult<Vec<_>>>()?;
                Instance::Parity(ParityGame::new(owners, d.succ.clone(), d.labels.clone()).map_err(CliError::schema)?)
            }
            D::Bp(d) => {
                let rules = d
                    .types
                    .iter()
                    .map(|t| t.iter().map(|r| Ok((r.prob.to_rational()?, r.offspring.clone()))).collect::<CliResult<Vec<_>>>())
                    .collect::<CliResult<Vec<_>>>()?;
                Instance::Bp(BranchingProcess::new(rules).map_err(CliError::schema)?)
            }
            D::Scfg(d) => {
                let find = |name: &str| -> CliResult<Symbol> {
                    if let Some(i) = d.nonterminals.iter().position(|n| n == name) {
                        Ok(Symbol::Nonterminal(i))
                    } else if let Some(i) = d.terminals.iter().position(|n| n == name) {
                        Ok(Symbol::Terminal(i))
                    } else {
                        Err(CliError::Schema(format!("unknown grammar symbol {name:?}")))
                    }
                };
                let nonterminal = |name: &str| match find(name)? {
                    Symbol::Nonterminal(i) => Ok(i),
                    Symbol::Terminal(_) => Err(CliError::Schema(format!("{name:?} is a terminal"))),
                };
                let rules = d
                    .rules
                    .iter()
                    .map(|r| {
                        Ok(ScfgRule {
                            lhs: nonterminal(&r.lhs)?,
                            rhs: r.rhs.iter().map(|s| find(s)).collect::<CliResult<_>>()?,
                            prob: r.prob.to_rational()?,
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let start = nonterminal(&d.start)?;
                Instance::Scfg(Scfg::new(d.nonterminals.clone(), d.terminals.clone(), rules, start).map_err(CliError::schema)?)
            }
            D::Circuit(d) => {
                let domain = match &d.domain {
                    DomainDoc::Cube { dim } => DomainSpec::UnitCube(*dim),
                    DomainDoc::Simplex { dim } => DomainSpec::UnitSimplex(*dim),
                    DomainDoc::Product { blocks } => DomainSpec::ProductSimplex(blocks.clone()),
                };
                domain.validate().map_err(CliError::schema)?;
                let circuit = circuit(&d.circuit, "circuit")?;
                let dim = domain.dimension();
                if circuit.inputs() != dim || circuit.outputs().len() != dim {
                    return Err(CliError::Schema(format!(
                        "circuit maps {} inputs to {} outputs, domain has dimension {dim}",
                        circuit.inputs(),
                        circuit.outputs().len()
                    )));
                }
                Instance::Circuit { circuit, domain }
            }
            D::Sqrtsum(d) => {
                if d.d.is_empty() {
                    return Err(CliError::Schema("sqrtsum needs at least one radicand".into()));
                }
                Instance::SqrtSum { d: d.d.iter().map(Num::to_positive).collect::<CliResult<_>>()?, k: d.k.to_positive()? }
            }
            D::Posslp(d) => Instance::PosSlp(d.program.parse().map_err(CliError::schema)?),
        })
    }
}

/// Circuit document for a circuit on a domain.
pub fn circuit_document(c: &AlgebraicCircuit, domain: &DomainSpec) -> InstanceDocument {
    let domain = match domain {
        DomainSpec::UnitCube(n) => DomainDoc::Cube { dim: *n },
        DomainSpec::UnitSimplex(n) => DomainDoc::Simplex { dim: *n },
        DomainSpec::ProductSimplex(b) => DomainDoc::Product { blocks: b.clone() },
    };
    InstanceDocument::Circuit(CircuitDoc { domain, circuit: c.to_string() })
}

pub fn bimatrix_document(a: &RationalMatrix, b: &RationalMatrix) -> InstanceDocument {
    InstanceDocument::Bimatrix(BimatrixDoc { a: nums(a), b: nums(b) })
}
