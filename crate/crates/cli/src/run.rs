//! Command dispatch: `solve`, `decide`, `certify`, `oracle` and
//! `export-circuit` for every instance kind.

use std::time::Instant;

use equilibria::circuits::{circuit_eval, export_nash_circuit, DomainSpec, NashCircuitForm};
use equilibria::exact::{linf_distance, posslp_decide, sqrt_sum_compare, Rational, Sign, SqrtSumOutcome};
use equilibria::lfp::{
    bp_to_system, extinction_report, kleene_lfp, newton_lfp, scfg_to_system, LfpResult, MonotonePolySystem, Qualitative,
    DEFAULT_ITER_CAP,
};
use equilibria::local_search::{
    congestion_converge, hopfield_converge, hopfield_potential, node_stability, pure_equilibria, pure_nash_check,
    rosenthal_potential, stable_configurations, Configuration, ImprovementRule, SwitchRule, DEFAULT_STEP_CAP,
};
use equilibria::normal_form::{
    epsilon_nash_check, nash_map, support_enumeration_nash, MixedProfile, NormalFormGame, SUPPORT_ENUMERATION_CAP,
};
use equilibria::path_following::{
    brute_force_sperner, default_eta, lemke_howson_run, market_equilibrium_weak, market_map_circuit,
    scarf_weak_fixpoint, sperner_orientation_counts, sperner_solve, ScarfOptions, ScarfResult,
    SpernerInstance, TrichromaticCell, BRUTE_FORCE_SPERNER_CAP,
};
use equilibria::stochastic::{
    brute_force_positional, certify_mpg, certify_parity, certify_ssg_report, mpg_solve, parity_solve, parity_winner,
    shapley_operator_solutions, shapley_solve, ssg_decision, ssg_solve, Player, SsgMethod, SsgParams,
    DEFAULT_PARITY_LABEL_CAP, DEFAULT_SSG_STEP_CAP,
};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::document::{circuit_document, Instance, InstanceDocument};
use crate::error::{CliError, CliResult};
use crate::result::{player, rat, rat_blocks, rats, strategy, Reader, ResultDocument, SOLVER};

/// Environment variable read when `--cap` is absent.
pub const CAP_ENV: &str = "EQUILIBRIA_CAP";

const DEFAULT_POSSLP_BITS: u64 = 1 << 20;
const DEFAULT_SQRT_PRECISION: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Decide,
    Certify,
    Oracle,
    ExportCircuit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Decide => "decide",
            Command::Certify => "certify",
            Command::Oracle => "oracle",
            Command::ExportCircuit => "export-circuit",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub epsilon: Option<Rational>,
    pub seed: u64,
    pub method: Option<String>,
    /// Primary work cap of the chosen solver: steps, pivots, iterations or
    /// bits depending on the kind.
    pub cap: Option<u64>,
    pub timing: bool,
    pub node: Option<usize>,
    pub threshold: Option<Rational>,
    pub beta: Option<Rational>,
    pub label_cap: Option<u32>,
    pub form: Option<String>,
    pub oracle_check: bool,
    pub dropped_label: Option<usize>,
    pub pitch: Option<Rational>,
    pub retries: Option<usize>,
    /// Result to re-validate under `certify`; solved afresh when absent.
    pub result: Option<ResultDocument>,
}

impl Flags {
    /// `--cap`, then the environment variable, then `default`.
    pub fn cap_or(&self, default: u64) -> CliResult<u64> {
        if let Some(c) = self.cap {
            return Ok(c);
        }
        match std::env::var(CAP_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{CAP_ENV}={s:?} is not a non-negative integer"))),
            Err(_) => Ok(default),
        }
    }

    fn cap_usize(&self, default: usize) -> CliResult<usize> {
        Ok(usize::try_from(self.cap_or(default as u64)?).unwrap_or(usize::MAX))
    }
}

/// Output of a command: a result document, or an instance document for
/// `export-circuit`.
#[derive(Debug, Clone)]
pub enum Output {
    Result(ResultDocument),
    Instance(InstanceDocument),
}

/// What each kind handler returns before the envelope is added.
struct Outcome {
    method: Option<String>,
    exact: bool,
    epsilon: Option<Rational>,
    counts: Value,
    solution: Value,
    certificate: Value,
}

impl Outcome {
    fn exact(method: Option<&str>, counts: Value, solution: Value, certificate: Value) -> Self {
        Outcome { method: method.map(str::to_string), exact: true, epsilon: None, counts, solution, certificate }
    }
}

fn default_epsilon(kind: &str) -> Rational {
    let (n, d): (i64, i64) = match kind {
        "market" | "circuit" => (1, 100),
        "shapley" => (1, 1_000_000),
        _ => (1, 1_000_000_000),
    };
    Rational::new(n.into(), d.into())
}

fn unsupported(command: Command, kind: &str) -> CliError {
    CliError::Usage(format!("command {} is not available for kind {kind}", command.name()))
}

fn bad_method(kind: &str, m: &str, allowed: &str) -> CliError {
    CliError::Usage(format!("unknown method {m:?} for {kind}; expected one of {allowed}"))
}

pub fn run(doc: &InstanceDocument, command: Command, flags: &Flags) -> CliResult<Output> {
    let instance = doc.to_instance()?;
    let kind = doc.kind();
    let start = Instant::now();
    let outcome = match command {
        Command::ExportCircuit => return export(&instance, kind, flags).map(Output::Instance),
        Command::Solve => solve(&instance, kind, flags)?,
        Command::Decide => decide(&instance, kind, flags)?,
        Command::Oracle => oracle(&instance, kind, flags)?,
        Command::Certify => {
            let target = match &flags.result {
                Some(r) => {
                    if r.kind != kind {
                        return Err(CliError::Usage(format!("result is for kind {}, instance is {kind}", r.kind)));
                    }
                    r.clone()
                }
                None => envelope(kind, Command::Solve, flags, solve(&instance, kind, flags)?, None),
            };
            certify(&instance, &target)?
        }
    };
    let elapsed = flags.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let doc = envelope(kind, command, flags, outcome, elapsed);
    if command == Command::Certify && doc.solution["valid"] != Value::Bool(true) {
        return Err(CliError::Certification(format!("checks failed: {}", doc.solution["checks"])));
    }
    if command == Command::Solve && doc.certificate.get("oracle_agrees") == Some(&Value::Bool(false)) {
        return Err(CliError::Certification("solution is not in the oracle's set".into()));
    }
    Ok(Output::Result(doc))
}

fn envelope(kind: &str, command: Command, flags: &Flags, o: Outcome, wall_clock_ms: Option<f64>) -> ResultDocument {
    ResultDocument {
        solver: SOLVER.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        kind: kind.into(),
        command: command.name().into(),
        method: o.method,
        exact: o.exact,
        epsilon: o.epsilon.as_ref().map(equilibria::exact::format_rational),
        seed: flags.seed,
        counts: o.counts,
        solution: o.solution,
        certificate: o.certificate,
        wall_clock_ms,
    }
}

fn profile_json(p: &MixedProfile) -> Value {
    rat_blocks(p.blocks())
}

fn config_json(c: &Configuration) -> Value {
    json!(c.states())
}

fn cell_json(c: &TrichromaticCell) -> Value {
    json!(c.vertices)
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Zero => "zero",
        Sign::Negative => "negative",
    }
}

fn outcome_name(o: SqrtSumOutcome) -> &'static str {
    match o {
        SqrtSumOutcome::Less => "less",
        SqrtSumOutcome::Equal => "equal",
        SqrtSumOutcome::Greater => "greater",
        SqrtSumOutcome::Undecided => "undecided",
    }
}

fn qualitative_name(q: Qualitative) -> &'static str {
    match q {
        Qualitative::Yes => "yes",
        Qualitative::No => "no",
        Qualitative::Unknown => "unknown",
    }
}

fn switch_rule(kind: &str, flags: &Flags) -> CliResult<(SwitchRule, &'static str)> {
    match flags.method.as_deref().unwrap_or("first") {
        "first" => Ok((SwitchRule::FirstUnstable, "first")),
        "best" => Ok((SwitchRule::BestImprovement, "best")),
        "random" => Ok((SwitchRule::SeededRandom(flags.seed), "random")),
        m => Err(bad_method(kind, m, "first, best, random")),
    }
}

fn improvement_rule(kind: &str, flags: &Flags) -> CliResult<(ImprovementRule, &'static str)> {
    match flags.method.as_deref().unwrap_or("first") {
        "first" => Ok((ImprovementRule::FirstImproving, "first")),
        "best" => Ok((ImprovementRule::BestImproving, "best")),
        "random" => Ok((ImprovementRule::SeededRandom(flags.seed), "random")),
        m => Err(bad_method(kind, m, "first, best, random")),
    }
}

fn ssg_method(flags: &Flags) -> CliResult<(SsgMethod, &'static str)> {
    match flags.method.as_deref().unwrap_or("strategy-improvement") {
        "strategy-improvement" | "si" => Ok((SsgMethod::StrategyImprovement, "strategy-improvement")),
        "discounted" => Ok((SsgMethod::Discounted, "discounted")),
        m => Err(bad_method("ssg", m, "strategy-improvement, discounted")),
    }
}

fn scarf_options(flags: &Flags) -> CliResult<ScarfOptions> {
    let mut o = ScarfOptions::default();
    o.pitch = flags.pitch.clone();
    if let Some(r) = flags.retries {
        o.retries = r;
    }
    o.step_cap = flags.cap_usize(usize::MAX)?;
    Ok(o)
}

fn scarf_certificate(s: &ScarfResult) -> Value {
    json!({
        "residual": rat(&s.residual),
        "pitch": rat(&s.pitch),
        "resolution": s.resolution,
        "refinements": s.refinements,
    })
}

fn lfp_json(r: &LfpResult) -> Value {
    json!({
        "x": rats(&r.x),
        "upper": r.upper.as_deref().map(rats),
    })
}

fn lfp_counts(r: &LfpResult) -> Value {
    json!({"iterations": r.iterations, "newton_steps": r.newton_steps, "kleene_steps": r.kleene_steps})
}

fn lfp_system(inst: &Instance) -> Option<MonotonePolySystem> {
    match inst {
        Instance::Bp(b) => Some(bp_to_system(b)),
        Instance::Scfg(g) => Some(scfg_to_system(g)),
        _ => None,
    }
}

fn bimatrix_game(inst: &Instance) -> Option<NormalFormGame> {
    match inst {
        Instance::Nfg(g) => Some(g.clone()),
        Instance::Bimatrix(g) => Some(g.to_normal_form()),
        _ => None,
    }
}

fn gain_certificate(g: &NormalFormGame, p: &MixedProfile) -> CliResult<Value> {
    let report = epsilon_nash_check(g, p, &Rational::zero())?;
    Ok(json!({"worst_gain": rat(&report.worst_gain), "witness": [report.witness.0, report.witness.1]}))
}

fn solve(inst: &Instance, kind: &str, flags: &Flags) -> CliResult<Outcome> {
    Ok(match inst {
        Instance::Hopfield { net, initial } => {
            let (rule, name) = switch_rule(kind, flags)?;
            let run = hopfield_converge(net, initial, rule, flags.cap_usize(DEFAULT_STEP_CAP)?)?;
            let trace: Vec<Value> = run
                .trace
                .iter()
                .map(|s| {
                    json!({"node": s.node, "field": rat(&s.field), "potential_before": rat(&s.potential_before),
                           "potential_after": rat(&s.potential_after)})
                })
                .collect();
            let mut certificate = json!({"initial": config_json(initial), "trace": trace});
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(stable_configurations(net)?.contains(&run.config));
            }
            Outcome::exact(
                Some(name),
                json!({"switches": run.trace.len()}),
                json!({"configuration": config_json(&run.config), "potential": rat(&hopfield_potential(net, &run.config)?)}),
                certificate,
            )
        }
        Instance::Congestion { game, initial } => {
            let (rule, name) = improvement_rule(kind, flags)?;
            let run = congestion_converge(game, initial, rule, flags.cap_usize(DEFAULT_STEP_CAP)?)?;
            let trace: Vec<Value> = run
                .trace
                .iter()
                .map(|m| {
                    json!({"player": m.player, "from": m.from, "to": m.to,
                           "cost_before": m.cost_before.to_string(), "cost_after": m.cost_after.to_string(),
                           "potential_before": m.potential_before.to_string(),
                           "potential_after": m.potential_after.to_string()})
                })
                .collect();
            let mut certificate = json!({"initial": initial, "trace": trace});
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(pure_equilibria(game).contains(&run.profile));
            }
            Outcome::exact(
                Some(name),
                json!({"moves": run.trace.len()}),
                json!({"profile": run.profile, "potential": rosenthal_potential(game, &run.profile).to_string()}),
                certificate,
            )
        }
        Instance::Nfg(g) => {
            match flags.method.as_deref().unwrap_or("support") {
                "support" => {}
                m => return Err(bad_method(kind, m, "support")),
            }
            let cap = flags.cap_usize(SUPPORT_ENUMERATION_CAP)?;
            let all = support_enumeration_nash(g, cap)?;
            let p = all.first().ok_or_else(|| CliError::Solver(equilibria::Error::Infeasible))?;
            Outcome::exact(
                Some("support"),
                json!({"equilibria_found": all.len()}),
                json!({"profile": profile_json(p)}),
                gain_certificate(g, p)?,
            )
        }
        Instance::Bimatrix(b) => {
            let g = b.to_normal_form();
            let method = flags.method.as_deref().unwrap_or("lemke-howson");
            let (p, counts, mut certificate) = match method {
                "lemke-howson" => {
                    let label = flags.dropped_label.unwrap_or(0);
                    let limit = flags.cap.is_some() || std::env::var(CAP_ENV).is_ok();
                    let limit = if limit { Some(flags.cap_usize(usize::MAX)?) } else { None };
                    let run = lemke_howson_run(b, label, limit)?;
                    let mut c = gain_certificate(&g, &run.profile)?;
                    c["dropped_label"] = json!(label);
                    (run.profile, json!({"pivots": run.pivots}), c)
                }
                "support" => {
                    let all = support_enumeration_nash(&g, flags.cap_usize(SUPPORT_ENUMERATION_CAP)?)?;
                    let p = all.into_iter().next().ok_or(CliError::Solver(equilibria::Error::Infeasible))?;
                    let c = gain_certificate(&g, &p)?;
                    (p, json!({}), c)
                }
                m => return Err(bad_method(kind, m, "lemke-howson, support")),
            };
            if flags.oracle_check {
                let all = support_enumeration_nash(&g, SUPPORT_ENUMERATION_CAP)?;
                certificate["oracle_agrees"] = json!(all.contains(&p));
            }
            Outcome::exact(Some(method), counts, json!({"profile": profile_json(&p)}), certificate)
        }
        Instance::Sperner { n, coloring } => {
            let si = SpernerInstance::from_circuit(*n, coloring)?;
            let cell = sperner_solve(&si)?;
            let mut certificate = json!({"orientation": cell.orientation()});
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(brute_force_sperner(&si)?.contains(&cell));
            }
            Outcome::exact(None, json!({}), json!({"cell": cell_json(&cell)}), certificate)
        }
        Instance::Market(e) => {
            let eps = flags.epsilon.clone().unwrap_or_else(|| default_epsilon(kind));
            let r = market_equilibrium_weak(e, &eps, &scarf_options(flags)?)?;
            let mut certificate = scarf_certificate(&r.scarf);
            certificate["eta"] = rat(&r.eta);
            Outcome {
                method: Some("scarf".into()),
                exact: false,
                epsilon: Some(eps),
                counts: json!({"pivots": r.scarf.pivots}),
                solution: json!({"prices": rats(&r.prices)}),
                certificate,
            }
        }
        Instance::Circuit { circuit, domain } => {
            let eps = flags.epsilon.clone().unwrap_or_else(|| default_epsilon(kind));
            let r = scarf_weak_fixpoint(circuit, domain, &eps, &scarf_options(flags)?)?;
            Outcome {
                method: Some("scarf".into()),
                exact: false,
                epsilon: Some(eps),
                counts: json!({"pivots": r.pivots}),
                solution: json!({"x": rats(&r.x)}),
                certificate: scarf_certificate(&r),
            }
        }
        Instance::Shapley(g) => {
            let eps = flags.epsilon.clone().unwrap_or_else(|| default_epsilon(kind));
            let s = shapley_solve(g, &eps)?;
            let strategies: Vec<Value> =
                s.strategies.iter().map(|(r, c)| json!({"row": rats(r), "col": rats(c)})).collect();
            Outcome {
                method: Some("value-iteration".into()),
                exact: false,
                epsilon: Some(eps),
                counts: json!({"iterations": s.iterations}),
                solution: json!({"values": rats(&s.values), "strategies": strategies}),
                certificate: json!({"residual": rat(&s.residual), "q": rat(g.q())}),
            }
        }
        Instance::Ssg(g) => {
            let (method, name) = ssg_method(flags)?;
            let params = SsgParams { beta: flags.beta.clone(), step_cap: flags.cap_usize(DEFAULT_SSG_STEP_CAP)? };
            let s = ssg_solve(g, method, &params)?;
            let c = &s.certificate;
            let mut certificate = json!({
                "beta": c.beta.as_ref().map(rat),
                "attempts": c.attempts,
                "checks": {"equations": c.checks.equations, "absorption": c.checks.absorption,
                           "no_improving_switch": c.checks.no_improving_switch},
            });
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(brute_force_positional(g)? == s.values);
            }
            Outcome::exact(
                Some(name),
                json!({"steps": c.steps}),
                json!({"values": rats(&s.values), "max_strategy": strategy(&s.max_strategy),
                       "min_strategy": strategy(&s.min_strategy)}),
                certificate,
            )
        }
        Instance::Mpg(g) => {
            let s = mpg_solve(g)?;
            let mut certificate = json!({"horizon": s.horizon});
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(brute_force_positional(g)? == s.values);
            }
            Outcome::exact(
                Some("zwick-paterson"),
                json!({"horizon": s.horizon}),
                json!({"values": rats(&s.values), "max_strategy": strategy(&s.max_strategy),
                       "min_strategy": strategy(&s.min_strategy)}),
                certificate,
            )
        }
        Instance::Parity(g) => {
            let label_cap = flags.label_cap.unwrap_or(DEFAULT_PARITY_LABEL_CAP);
            let s = parity_solve(g, label_cap)?;
            let mut certificate = json!({"label_cap": label_cap});
            if flags.oracle_check {
                certificate["oracle_agrees"] = json!(brute_force_positional(g)? == s.winners);
            }
            Outcome::exact(
                Some("mean-payoff-reduction"),
                json!({}),
                json!({"winners": s.winners.iter().map(|p| player(*p)).collect::<Vec<_>>(),
                       "max_strategy": strategy(&s.max_strategy), "min_strategy": strategy(&s.min_strategy)}),
                certificate,
            )
        }
        Instance::Bp(_) | Instance::Scfg(_) => {
            let sys = lfp_system(inst).expect("lfp kind");
            let eps = flags.epsilon.clone().unwrap_or_else(|| default_epsilon(kind));
            let cap = flags.cap_usize(DEFAULT_ITER_CAP)?;
            let method = flags.method.as_deref().unwrap_or("newton");
            let (r, extra) = match (method, inst) {
                ("newton", _) => (newton_lfp(&sys, &eps, cap)?, None),
                ("kleene", _) => (kleene_lfp(&sys, &eps, cap)?, None),
                ("both", Instance::Bp(b)) => {
                    let rep = extinction_report(b, &eps, cap)?;
                    let extra = json!({
                        "kleene_x": rats(&rep.kleene.x),
                        "agree": rep.agree,
                        "almost_sure": rep.almost_sure.iter().map(|q| qualitative_name(*q)).collect::<Vec<_>>(),
                    });
                    (rep.newton, Some(extra))
                }
                ("both", _) => {
                    let n = newton_lfp(&sys, &eps, cap)?;
                    let k = kleene_lfp(&sys, &eps, cap)?;
                    let two = &eps * Rational::from_integer(2.into());
                    let extra = json!({"kleene_x": rats(&k.x), "agree": linf_distance(&n.x, &k.x) <= two});
                    (n, Some(extra))
                }
                (m, _) => return Err(bad_method(kind, m, "newton, kleene, both")),
            };
            let mut solution = lfp_json(&r);
            if let Some(Value::Object(extra)) = extra {
                solution.as_object_mut().expect("object").extend(extra);
            }
            Outcome {
                method: Some(method.into()),
                exact: r.exact,
                epsilon: Some(eps),
                counts: lfp_counts(&r),
                solution,
                certificate: json!({"residual": rat(&r.residual)}),
            }
        }
        Instance::SqrtSum { d, k } => {
            let cap = flags.cap_or(DEFAULT_SQRT_PRECISION)?;
            let o = sqrt_sum_compare(d, k, cap);
            Outcome {
                method: None,
                exact: o != SqrtSumOutcome::Undecided,
                epsilon: None,
                counts: json!({}),
                solution: json!({"outcome": outcome_name(o)}),
                certificate: json!({"precision_cap": cap}),
            }
        }
        Instance::PosSlp(c) => {
            let cap = flags.cap_or(DEFAULT_POSSLP_BITS)?;
            let s = posslp_decide(c, cap)?;
            Outcome::exact(None, json!({}), json!({"sign": sign_name(s)}), json!({"bit_cap": cap}))
        }
    })
}

fn need_node(flags: &Flags, n: usize) -> CliResult<usize> {
    let v = flags.node.ok_or_else(|| CliError::Usage("decide needs --node".into()))?;
    if v >= n {
        return Err(CliError::Usage(format!("--node {v} is out of range for {n} nodes")));
    }
    Ok(v)
}

fn decide(inst: &Instance, kind: &str, flags: &Flags) -> CliResult<Outcome> {
    let half = Rational::new(1.into(), 2.into());
    Ok(match inst {
        Instance::Ssg(g) => {
            let v = need_node(flags, g.len())?;
            let t = flags.threshold.clone().unwrap_or(half);
            let holds = ssg_decision(g, v, &t)?;
            let mut o = solve(inst, kind, flags)?;
            o.solution = json!({"node": v, "threshold": rat(&t), "holds": holds, "values": o.solution["values"]});
            o
        }
        Instance::Mpg(g) => {
            let v = need_node(flags, g.len())?;
            let t = flags.threshold.clone().unwrap_or_else(Rational::zero);
            let mut o = solve(inst, kind, flags)?;
            let values = Reader::new(&o.solution, "solution").get("values")?.rationals()?;
            o.solution = json!({"node": v, "threshold": rat(&t), "holds": values[v] >= t, "values": rats(&values)});
            o
        }
        Instance::Parity(g) => {
            let v = need_node(flags, g.len())?;
            let label_cap = flags.label_cap.unwrap_or(DEFAULT_PARITY_LABEL_CAP);
            let w = parity_winner(g, v, label_cap)?;
            Outcome::exact(
                Some("mean-payoff-reduction"),
                json!({}),
                json!({"node": v, "winner": player(w.winner), "strategy": strategy(&w.strategy)}),
                json!({"label_cap": label_cap}),
            )
        }
        Instance::Shapley(g) => {
            let v = need_node(flags, g.len())?;
            let t = flags.threshold.clone().unwrap_or_else(Rational::zero);
            let mut o = solve(inst, kind, flags)?;
            let values = Reader::new(&o.solution, "solution").get("values")?.rationals()?;
            // values are within ε/2 of the true ones
            let slack = o.epsilon.clone().expect("approximate") / Rational::from_integer(2.into());
            let answer = if values[v] >= &t + &slack {
                json!(true)
            } else if values[v] < &t - &slack {
                json!(false)
            } else {
                json!("undecided")
            };
            o.solution = json!({"node": v, "threshold": rat(&t), "holds": answer, "values": rats(&values)});
            o
        }
        Instance::Bp(_) => {
            let mut flags = flags.clone();
            flags.method = Some("both".into());
            let mut o = solve(inst, kind, &flags)?;
            let sure = o.solution["almost_sure"].clone();
            let v = need_node(&flags, sure.as_array().map_or(0, Vec::len))?;
            o.solution = json!({"node": v, "almost_sure_extinction": sure[v], "x": o.solution["x"]});
            o
        }
        Instance::SqrtSum { .. } | Instance::PosSlp(_) => solve(inst, kind, flags)?,
        _ => return Err(unsupported(Command::Decide, kind)),
    })
}

fn oracle(inst: &Instance, kind: &str, flags: &Flags) -> CliResult<Outcome> {
    Ok(match inst {
        Instance::Hopfield { net, .. } => {
            let all = stable_configurations(net)?;
            Outcome::exact(
                Some("exhaustive"),
                json!({"found": all.len()}),
                json!({"equilibria": all.iter().map(config_json).collect::<Vec<_>>()}),
                json!({}),
            )
        }
        Instance::Congestion { game, .. } => {
            let all = pure_equilibria(game);
            Outcome::exact(Some("exhaustive"), json!({"found": all.len()}), json!({"equilibria": all}), json!({}))
        }
        Instance::Nfg(_) | Instance::Bimatrix(_) => {
            let g = bimatrix_game(inst).expect("two-player kind");
            let all = support_enumeration_nash(&g, flags.cap_usize(SUPPORT_ENUMERATION_CAP)?)?;
            Outcome::exact(
                Some("support"),
                json!({"found": all.len()}),
                json!({"equilibria": all.iter().map(profile_json).collect::<Vec<_>>()}),
                json!({}),
            )
        }
        Instance::Sperner { n, coloring } => {
            let si = SpernerInstance::from_circuit(*n, coloring)?;
            if *n > BRUTE_FORCE_SPERNER_CAP {
                return Err(equilibria::Error::SizeCapExceeded {
                    what: "Sperner resolution",
                    size: (*n).into(),
                    cap: BRUTE_FORCE_SPERNER_CAP.into(),
                }
                .into());
            }
            let cells = brute_force_sperner(&si)?;
            let counts = sperner_orientation_counts(&si)?;
            Outcome::exact(
                Some("exhaustive"),
                json!({"found": cells.len(), "positive": counts.positive, "negative": counts.negative}),
                json!({"cells": cells.iter().map(cell_json).collect::<Vec<_>>()}),
                json!({}),
            )
        }
        Instance::Ssg(g) => {
            let v = brute_force_positional(g)?;
            Outcome::exact(Some("exhaustive"), json!({}), json!({"values": rats(&v)}), json!({}))
        }
        Instance::Mpg(g) => {
            let v = brute_force_positional(g)?;
            Outcome::exact(Some("exhaustive"), json!({}), json!({"values": rats(&v)}), json!({}))
        }
        Instance::Parity(g) => {
            let w = brute_force_positional(g)?;
            Outcome::exact(
                Some("exhaustive"),
                json!({}),
                json!({"winners": w.iter().map(|p| player(*p)).collect::<Vec<_>>()}),
                json!({}),
            )
        }
        _ => return Err(unsupported(Command::Oracle, kind)),
    })
}

fn export(inst: &Instance, kind: &str, flags: &Flags) -> CliResult<InstanceDocument> {
    match inst {
        Instance::Nfg(_) | Instance::Bimatrix(_) => {
            let g = bimatrix_game(inst).expect("game kind");
            let form = match flags.form.as_deref().unwrap_or("division-free") {
                "division-free" => NashCircuitForm::DivisionFree,
                "division" => NashCircuitForm::Division,
                f => return Err(CliError::Usage(format!("unknown --form {f:?}; expected division-free or division"))),
            };
            let c = export_nash_circuit(&g, form);
            Ok(circuit_document(&c, &DomainSpec::ProductSimplex(g.strategy_counts().to_vec())))
        }
        Instance::Market(e) => {
            let eps = flags.epsilon.clone().unwrap_or_else(|| default_epsilon(kind));
            let c = market_map_circuit(e, &default_eta(e, &eps));
            Ok(circuit_document(&c, &DomainSpec::UnitSimplex(e.commodities())))
        }
        Instance::Circuit { circuit, domain } => Ok(circuit_document(circuit, domain)),
        _ => Err(unsupported(Command::ExportCircuit, kind)),
    }
}

/// Re-validates `r` against the instance with the owning module's checker,
/// reading everything from the emitted JSON.
fn certify(inst: &Instance, r: &ResultDocument) -> CliResult<Outcome> {
    if r.command != "solve" {
        return Err(CliError::Usage(format!("only solve results can be certified, got {}", r.command)));
    }
    let sol = Reader::new(&r.solution, "solution");
    let cert = Reader::new(&r.certificate, "certificate");
    let eps = r.epsilon.as_deref().map(|e| Reader::new(&Value::String(e.into()), "epsilon").rational()).transpose()?;
    let mut checks = Map::new();
    let mut check = |name: &str, ok: bool| {
        checks.insert(name.into(), Value::Bool(ok));
    };
    match inst {
        Instance::Hopfield { net, initial } => {
            let states: Vec<i8> =
                sol.get("configuration")?.items()?.iter().map(|s| s.i64().map(|v| v as i8)).collect::<CliResult<_>>()?;
            let config = Configuration::new(states).map_err(|e| CliError::Certification(e.to_string()))?;
            let sized = config.len() == net.len();
            check("size", sized);
            if sized {
                check("all_stable", (0..net.len()).all(|v| node_stability(net, &config, v).stable));
                // replay the trace from the instance's initial configuration
                let mut s = initial.states().to_vec();
                let mut ok = true;
                for step in cert.get("trace")?.items()? {
                    let v = step.get("node")?.usize()?;
                    let before = step.get("potential_before")?.rational()?;
                    let after = step.get("potential_after")?.rational()?;
                    let field = step.get("field")?.rational()?;
                    let cur = Configuration::new(s.clone()).expect("valid states");
                    if v >= s.len() || node_stability(net, &cur, v).field != field {
                        ok = false;
                        break;
                    }
                    ok &= hopfield_potential(net, &cur)? == before;
                    s[v] = -s[v];
                    let next = Configuration::new(s.clone()).expect("valid states");
                    let p = hopfield_potential(net, &next)?;
                    ok &= p == after && &after - &before == Rational::from_integer(2.into()) * field.abs() && after > before;
                }
                check("trace_monotone", ok && s == config.states());
                check("potential", hopfield_potential(net, &config)? == sol.get("potential")?.rational()?);
            }
        }
        Instance::Congestion { game, initial } => {
            let profile = sol.get("profile")?.usizes()?;
            let valid = game.validate_profile(&profile).is_ok();
            check("valid_profile", valid);
            if valid {
                check("pure_nash", pure_nash_check(game, &profile).holds);
                let mut s = initial.clone();
                let mut ok = true;
                for m in cert.get("trace")?.items()? {
                    let (i, to) = (m.get("player")?.usize()?, m.get("to")?.usize()?);
                    if i >= s.len() || to >= game.strategies()[i].len() {
                        ok = false;
                        break;
                    }
                    let pb = rosenthal_potential(game, &s);
                    let cb = equilibria::local_search::congestion_cost(game, &s, i);
                    s[i] = to;
                    let pa = rosenthal_potential(game, &s);
                    let ca = equilibria::local_search::congestion_cost(game, &s, i);
                    ok &= ca < cb && ca - cb == pa - pb;
                    ok &= m.get("potential_after")?.str()? == pa.to_string();
                }
                check("trace_rosenthal", ok && s == profile);
            }
        }
        Instance::Nfg(_) | Instance::Bimatrix(_) => {
            let g = bimatrix_game(inst).expect("game kind");
            let blocks = sol.get("profile")?.rational_blocks()?;
            match MixedProfile::new(blocks) {
                Ok(p) if p.blocks().len() == g.players()
                    && p.blocks().iter().zip(g.strategy_counts()).all(|(b, &c)| b.len() == c) =>
                {
                    check("exact_nash", epsilon_nash_check(&g, &p, &Rational::zero())?.holds);
                    check("nash_map_fixed", nash_map(&g, &p)? == p);
                }
                _ => check("valid_profile", false),
            }
        }
        Instance::Sperner { n, coloring } => {
            let si = SpernerInstance::from_circuit(*n, coloring)?;
            let verts: Vec<Vec<u64>> = sol
                .get("cell")?
                .items()?
                .iter()
                .map(|v| v.items()?.iter().map(Reader::u64).collect::<CliResult<Vec<_>>>())
                .collect::<CliResult<_>>()?;
            let shaped = verts.len() == 3 && verts.iter().all(|v| v.len() == 3 && v.iter().sum::<u64>() == *n);
            check("on_grid", shaped);
            if shaped {
                let vs: Vec<[u64; 3]> = verts.iter().map(|v| [v[0], v[1], v[2]]).collect();
                // vertices of one grid triangle differ by one unit step pairwise
                let adjacent = (0..3).all(|a| {
                    (a + 1..3).all(|b| (0..3).map(|k| vs[a][k].abs_diff(vs[b][k])).sum::<u64>() == 2)
                });
                check("cell", adjacent);
                let colors = vs.iter().map(|v| si.color(*v)).collect::<Result<Vec<_>, _>>()?;
                check("trichromatic", colors == vec![1, 2, 3]);
            }
        }
        Instance::Market(e) => {
            let eps = eps.clone().ok_or_else(|| CliError::Certification("result has no epsilon".into()))?;
            let prices = sol.get("prices")?.rationals()?;
            let eta = cert.get("eta")?.rational()?;
            let f = market_map_circuit(e, &eta);
            let d = DomainSpec::UnitSimplex(e.commodities());
            let inside = d.contains(&prices);
            check("on_simplex", inside);
            if inside {
                check("residual", linf_distance(&circuit_eval(&f, &prices)?, &prices) <= eps);
            }
        }
        Instance::Circuit { circuit, domain } => {
            let eps = eps.clone().ok_or_else(|| CliError::Certification("result has no epsilon".into()))?;
            let x = sol.get("x")?.rationals()?;
            let inside = domain.contains(&x);
            check("in_domain", inside);
            if inside {
                check("residual", linf_distance(&circuit_eval(circuit, &x)?, &x) <= eps);
            }
        }
        Instance::Shapley(g) => {
            let eps = eps.clone().ok_or_else(|| CliError::Certification("result has no epsilon".into()))?;
            let x = sol.get("values")?.rationals()?;
            if x.len() != g.len() {
                check("size", false);
            } else {
                let sols = shapley_operator_solutions(g, &x)?;
                let fx: Vec<Rational> = sols.iter().map(|s| s.value.clone()).collect();
                let stop = &eps * g.q() / Rational::from_integer(2.into());
                check("residual", linf_distance(&fx, &x) <= stop);
                let mut optimal = true;
                for (u, st) in sol.get("strategies")?.items()?.iter().enumerate() {
                    let (row, col) = (st.get("row")?.rationals()?, st.get("col")?.rationals()?);
                    let b = g.continuation_matrix(u, &x);
                    if row.len() != b.rows() || col.len() != b.cols() {
                        optimal = false;
                        continue;
                    }
                    // the row strategy guarantees at least the value, the column at most
                    let row_floor = (0..b.cols())
                        .map(|j| (0..b.rows()).map(|i| &row[i] * &b[(i, j)]).sum::<Rational>())
                        .min()
                        .expect("nonempty");
                    let col_ceiling = (0..b.rows())
                        .map(|i| (0..b.cols()).map(|j| &col[j] * &b[(i, j)]).sum::<Rational>())
                        .max()
                        .expect("nonempty");
                    optimal &= row_floor >= fx[u] && col_ceiling <= fx[u];
                }
                check("strategies_optimal", optimal);
            }
        }
        Instance::Ssg(g) => {
            let values = sol.get("values")?.rationals()?;
            let (s1, s2) = (sol.get("max_strategy")?.strategy()?, sol.get("min_strategy")?.strategy()?);
            match certify_ssg_report(g, &values, &s1, &s2) {
                Ok(c) => {
                    check("equations", c.equations);
                    check("absorption", c.absorption);
                    check("no_improving_switch", c.no_improving_switch);
                }
                Err(_) => check("well_formed", false),
            }
        }
        Instance::Mpg(g) => {
            let values = sol.get("values")?.rationals()?;
            let (s1, s2) = (sol.get("max_strategy")?.strategy()?, sol.get("min_strategy")?.strategy()?);
            let n = g.len();
            check("mean_cycles", values.len() == n && certify_mpg(g, &values, &s1, &s2));
            check("denominators", values.iter().all(|v| *v.denom() <= n.into()));
        }
        Instance::Parity(g) => {
            let winners = sol.get("winners")?.items()?.iter().map(Reader::player).collect::<CliResult<Vec<Player>>>()?;
            let (s1, s2) = (sol.get("max_strategy")?.strategy()?, sol.get("min_strategy")?.strategy()?);
            check("winning_strategies", certify_parity(g, &winners, &s1, &s2));
        }
        Instance::Bp(_) | Instance::Scfg(_) => {
            let sys = lfp_system(inst).expect("lfp kind");
            let eps = eps.clone().ok_or_else(|| CliError::Certification("result has no epsilon".into()))?;
            let x = sol.get("x")?.rationals()?;
            if x.len() != sys.len() || x.iter().any(Rational::is_negative) {
                check("well_formed", false);
            } else {
                let fx = sys.eval(&x);
                check("residual", linf_distance(&fx, &x) <= eps);
                // x ≤ F(x) from 0 keeps x below the least fixed point
                check("post_fixed", x.iter().zip(&fx).all(|(a, b)| a <= b));
                if let Some(u) = sol.opt("upper") {
                    let u = u.rationals()?;
                    let ok = u.len() == x.len()
                        && sys.eval(&u).iter().zip(&u).all(|(a, b)| a <= b)
                        && x.iter().zip(&u).all(|(a, b)| a <= b);
                    check("upper_bound", ok);
                }
                if sys.is_probabilistic() {
                    check("unit_box", x.iter().all(|v| *v <= Rational::one()));
                }
            }
        }
        Instance::SqrtSum { d, k } => {
            let cap = cert.get("precision_cap")?.u64()?;
            check("recomputed", outcome_name(sqrt_sum_compare(d, k, cap)) == sol.get("outcome")?.str()?);
        }
        Instance::PosSlp(c) => {
            let cap = cert.get("bit_cap")?.u64()?;
            check("recomputed", sign_name(posslp_decide(c, cap)?) == sol.get("sign")?.str()?);
        }
    }
    let valid = checks.values().all(|v| *v == Value::Bool(true));
    Ok(Outcome {
        method: r.method.clone(),
        exact: r.exact,
        epsilon: eps,
        counts: json!({}),
        solution: json!({"valid": valid, "checks": checks}),
        certificate: json!({"of": {"kind": r.kind, "command": r.command, "method": r.method}}),
    })
}
