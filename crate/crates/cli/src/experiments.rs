//! Turns a validated config into reports.

use std::sync::Arc;

use anyhow::{bail, Result};
use weakverify::hypotheses::Membership;
use weakverify::propositional::{
    limiting_verifier_prop, open_verifier, simulate_inquiry, solver_prop, OpenSet, PropMethod, SequenceWorld,
};
use weakverify::rational::{dyadic, parse_rational, ratio, Rational};
use weakverify::{
    certify, contains, disjoin, limiting_verifier, run_trials, solver, subbasic_verifier, verifier_for_open,
    weak_convergence_check, AcceptTarget, Atom, CantorPairing, Claim, Event, Hypothesis, Level, Partition, Payload,
    SampleSpace, TrialPlan, VerifierFamily, World,
};

use crate::config::{ClaimSpec, Experiment, Num, Source, SpaceSpec, WorldSpec};
use crate::examples;
use crate::parse;
use crate::report::{PropRun, PropStage, Results, RunReport, StabilityOutcome, TrialRun};

/// Values overriding the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

pub fn run(src: &Source, overrides: &Overrides) -> Result<RunReport> {
    let cfg = &src.config;
    let seed = overrides.seed.or(cfg.seed).unwrap_or(0);
    let results = match cfg.experiment {
        Experiment::Verify | Experiment::Limit | Experiment::Solve => trials(src, overrides, seed)?,
        Experiment::Prop => prop(src)?,
        Experiment::WeakConvergence => weak(src)?,
    };
    Ok(RunReport { experiment: cfg.experiment, seed, results })
}

fn space(src: &Source) -> Result<Arc<SampleSpace>> {
    Ok(match &src.config.space {
        None => SampleSpace::coin(),
        Some(SpaceSpec::Named(n)) if n == "coin" => SampleSpace::coin(),
        Some(SpaceSpec::Named(n)) if n == "real" || n == "real-line" => SampleSpace::real_line(),
        Some(SpaceSpec::Named(n)) => bail!(src.key_error("space", format!("unknown space `{n}`"))),
        Some(SpaceSpec::Symbols(s)) => {
            SampleSpace::finite(s.clone()).map_err(|e| src.key_error("space", e.to_string()))?
        }
    })
}

fn num(src: &Source, key: &str, n: &Num) -> Result<Rational> {
    parse_rational(&n.to_string()).map_err(|e| src.key_error(key, e.to_string()))
}

fn world(src: &Source, space: &Arc<SampleSpace>, spec: &WorldSpec, key: &str) -> Result<Vec<World>> {
    let err = |e: weakverify::Error| src.key_error(key, e.to_string());
    let w = match spec {
        WorldSpec::Bernoulli { p, label } => {
            let w = World::bernoulli(num(src, key, p)?).map_err(err)?;
            match label {
                Some(l) => w.with_label(l.clone()),
                None => w,
            }
        }
        WorldSpec::Categorical { probs, label } => {
            let probs = probs.iter().map(|p| num(src, key, p)).collect::<Result<_>>()?;
            let label = label.clone().unwrap_or_else(|| "categorical".into());
            World::categorical(space, probs, label).map_err(err)?
        }
        WorldSpec::Uniform { lo, hi, atoms, label } => {
            let atoms = atoms
                .iter()
                .map(|a| Ok(Atom { at: num(src, key, &a.at)?, mass: num(src, key, &a.mass)? }))
                .collect::<Result<Vec<_>>>()?;
            let w = World::uniform_with_atoms(num(src, key, lo)?, num(src, key, hi)?, atoms).map_err(err)?;
            match label {
                Some(l) => w.with_label(l.clone()),
                None => w,
            }
        }
        WorldSpec::Named { name } => examples::world(name).map_err(|e| src.key_error(key, e.to_string()))?,
        WorldSpec::DyadicCoins { base, count } => {
            let base = num(src, key, base)?;
            return (1..=*count).map(|k| World::bernoulli(&base + dyadic(k)).map_err(err)).collect();
        }
        WorldSpec::Sequence { .. } => {
            bail!(src.key_error(key, "sequence worlds are only used by the prop experiment"))
        }
    };
    if w.space() != space {
        bail!(src.key_error(key, format!("world {w} is not over the configured space")));
    }
    Ok(vec![w])
}

fn worlds(src: &Source, space: &Arc<SampleSpace>) -> Result<Vec<World>> {
    if src.config.worlds.is_empty() {
        bail!(src.key_error("worlds", "at least one world is required"));
    }
    let mut out = Vec::new();
    for spec in &src.config.worlds {
        out.extend(world(src, space, spec, "worlds")?);
    }
    Ok(out)
}

fn level(src: &Source) -> Result<Level> {
    let a = src.require(&src.config.alpha, "alpha")?;
    let a = num(src, "alpha", a)?;
    Level::new(a).map_err(|e| src.key_error("alpha", e.to_string()))
}

/// `⋃_i {μ : μ({H}) > 1/2 + 2^-i}`, which equals `{μ : μ({H}) > 1/2}`.
fn dyadic_union(space: &Arc<SampleSpace>, alpha: &Level) -> Result<VerifierFamily> {
    let heads = Event::parse(space, "{H}")?;
    let target = Hypothesis::sub_basic(heads.clone(), ratio(1, 2))?;
    Ok(disjoin(space.clone(), "union_i P({H}) > 1/2 + 2^-i", Some(target), None, alpha, move |i, level| {
        let h = Hypothesis::sub_basic(heads.clone(), ratio(1, 2) + dyadic(i as u32))?;
        subbasic_verifier(&h, &level)
    })?)
}

fn hypothesis(src: &Source, space: &Arc<SampleSpace>) -> Result<Hypothesis> {
    let text = src.require(&src.config.hypothesis, "hypothesis")?;
    parse::hypothesis(space, text).map_err(|e| src.key_error("hypothesis", format!("{e:#}")))
}

fn partition(src: &Source, space: &Arc<SampleSpace>) -> Result<Partition> {
    let cfg = &src.config;
    match (&cfg.partition, cfg.answers.is_empty()) {
        (Some(name), true) => examples::partition(space, name).map_err(|e| src.key_error("partition", e.to_string())),
        (None, false) => {
            let mut hs = Vec::new();
            for a in &cfg.answers {
                hs.push(
                    parse::hypothesis(space, &a.hypothesis)
                        .map_err(|e| src.key_error("answers", format!("{}: {e:#}", a.label)))?,
                );
            }
            let labels = cfg.answers.iter().map(|a| a.label.clone()).collect();
            Partition::new(hs, labels).map_err(|e| src.key_error("answers", e.to_string()))
        }
        (Some(_), false) => bail!(src.key_error("answers", "give either `partition` or `answers`, not both")),
        (None, true) => bail!(src.key_error("partition", "missing key for solve")),
    }
}

fn accept_target(src: &Source) -> Result<Option<AcceptTarget>> {
    let Some(text) = &src.config.accept else { return Ok(None) };
    let bad = || src.key_error("accept", format!("expected `any`, `piece:J` or `answer:I`, got `{text}`"));
    if text == "any" {
        return Ok(Some(AcceptTarget::Any));
    }
    let (kind, idx) = text.split_once(':').ok_or_else(bad)?;
    let idx: usize = idx.trim().parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(bad());
    }
    Ok(Some(AcceptTarget::Payload(match kind.trim() {
        "piece" => Payload::Piece(idx),
        "answer" => Payload::Answer(idx),
        "target" => Payload::Target,
        _ => return Err(bad()),
    })))
}

fn claim(spec: &ClaimSpec) -> Option<(Claim, Option<usize>)> {
    match *spec {
        ClaimSpec::Sv3Bound { alpha, world } => Some((Claim::Sv3Bound { alpha }, world)),
        ClaimSpec::Sv4Eventual { target, world } => Some((Claim::Sv4Eventual { target }, world)),
        ClaimSpec::Convergence { horizon, world } => Some((Claim::Convergence { horizon }, world)),
        _ => None,
    }
}

fn trials(src: &Source, overrides: &Overrides, seed: u64) -> Result<Results> {
    let cfg = &src.config;
    let space = space(src)?;
    let alpha = level(src)?;
    let n_max = *src.require(&cfg.n_max, "n_max")?;
    src.check_positive(n_max, "n_max")?;
    let trials = overrides.trials.or(cfg.trials).unwrap_or(1000);
    if trials == 0 {
        bail!(src.key_error("trials", "trials must be at least 1"));
    }
    let target = cfg.convergence_target.unwrap_or(0.95);
    if !(0.0..=1.0).contains(&target) {
        bail!(src.key_error("convergence_target", "convergence_target must lie in [0,1]"));
    }
    let worlds = worlds(src, &space)?;
    let accept = accept_target(src)?;
    let mut answers = None;
    let verifier = match cfg.experiment {
        Experiment::Verify if cfg.hypothesis.as_deref() == Some("dyadic-union") => dyadic_union(&space, &alpha)?,
        Experiment::Verify => verifier_for_open(&hypothesis(src, &space)?, &alpha)
            .map_err(|e| src.key_error("hypothesis", e.to_string()))?,
        Experiment::Limit => limiting_verifier(&hypothesis(src, &space)?, &alpha)
            .map_err(|e| src.key_error("hypothesis", e.to_string()))?,
        Experiment::Solve => {
            let q = partition(src, &space)?;
            let v = solver(&q, &alpha, Arc::new(CantorPairing))?;
            answers = Some(q);
            v
        }
        _ => unreachable!("trial experiments only"),
    };
    let verifier = Arc::new(verifier);
    for spec in &cfg.claims {
        match claim(spec) {
            None => bail!(src.key_error("claims", format!("{spec:?} does not apply to {:?}", cfg.experiment))),
            Some((_, Some(i))) if i == 0 || i > worlds.len() => {
                bail!(src.key_error("claims", format!("world index {i} is out of range 1..={}", worlds.len())))
            }
            _ => {}
        }
    }
    let mut runs = Vec::with_capacity(worlds.len());
    for (wi, w) in worlds.into_iter().enumerate() {
        // a solver is scored on the answer that is true in the world
        let accept = match (accept, &answers) {
            (Some(a), _) => a,
            (None, Some(q)) => {
                q.answer_of(&w, n_max)?.map_or(AcceptTarget::Any, |i| AcceptTarget::Payload(Payload::Answer(i)))
            }
            (None, None) => AcceptTarget::Any,
        };
        let mut plan = TrialPlan::new(verifier.clone(), w, n_max, trials, seed).accepting(accept);
        plan.convergence_target = target;
        let report = run_trials(&plan)?;
        let claims: Vec<Claim> = cfg
            .claims
            .iter()
            .filter_map(claim)
            .filter(|(_, world)| world.is_none_or(|i| i == wi + 1))
            .map(|(c, _)| c)
            .collect();
        let outcomes = certify(&report, &claims)?;
        runs.push(TrialRun { world: plan.world.to_string(), report, claims: outcomes });
    }
    Ok(Results::Trials { runs })
}

fn prop_method(src: &Source) -> Result<PropMethod> {
    let cfg = &src.config;
    let method = cfg.method.as_deref().unwrap_or(if cfg.partition.is_some() { "solve" } else { "limit" });
    let bad = |key: &str, e: anyhow::Error| src.key_error(key, e.to_string());
    Ok(match method {
        "verify" => {
            let name = src.require(&cfg.hypothesis, "hypothesis")?;
            let o = match name.as_str() {
                "some-zero" => OpenSet::SomeSymbol(0),
                "some-one" => OpenSet::SomeSymbol(1),
                "everything" => OpenSet::Everything,
                "nothing" => OpenSet::Nothing,
                other => bail!(src.key_error("hypothesis", format!("unknown open set `{other}`"))),
            };
            open_verifier(o)
        }
        "limit" => {
            let name = src.require(&cfg.hypothesis, "hypothesis")?;
            limiting_verifier_prop(examples::presentation(name).map_err(|e| bad("hypothesis", e))?)
        }
        "solve" => {
            let name = src.require(&cfg.partition, "partition")?;
            solver_prop(examples::prop_partition(name).map_err(|e| bad("partition", e))?)
        }
        other => bail!(src.key_error("method", format!("unknown method `{other}` (verify, limit, solve)"))),
    })
}

fn prop(src: &Source) -> Result<Results> {
    let cfg = &src.config;
    let method = prop_method(src)?;
    let stages = cfg.stages.unwrap_or(20);
    src.check_positive(stages, "stages")?;
    if cfg.worlds.is_empty() {
        bail!(src.key_error("worlds", "at least one world is required"));
    }
    let mut runs = Vec::new();
    for (wi, spec) in cfg.worlds.iter().enumerate() {
        let WorldSpec::Sequence { bits } = spec else {
            bail!(src.key_error("worlds", "prop worlds must have kind = \"sequence\""));
        };
        let w = SequenceWorld::parse(bits).map_err(|e| src.key_error("worlds", e.to_string()))?;
        let out = simulate_inquiry(&w, &method, stages)?;
        let path = w.initial_segment(stages);
        let stages_out: Vec<PropStage> = out
            .iter()
            .enumerate()
            .map(|(n, c)| PropStage {
                stage: n,
                prefix: path[..n].iter().map(|b| char::from(b'0' + b)).collect(),
                conclusion: method.describe(*c),
            })
            .collect();
        let from_stage = stages - (stages / 4).max(1) + 1;
        let mut claims = Vec::new();
        for spec in &cfg.claims {
            match spec {
                ClaimSpec::Stabilizes { to, world } => {
                    if world.is_some_and(|i| i != wi + 1) {
                        continue;
                    }
                    let passed = stages_out[from_stage..].iter().all(|s| &s.conclusion == to);
                    claims.push(StabilityOutcome { to: to.clone(), from_stage, passed });
                }
                other => bail!(src.key_error("claims", format!("{other:?} does not apply to prop"))),
            }
        }
        runs.push(PropRun { world: w.to_string(), method: method.name().to_string(), stages: stages_out, claims });
    }
    Ok(Results::Prop { runs })
}

fn weak(src: &Source) -> Result<Results> {
    let cfg = &src.config;
    let space = space(src)?;
    let seq = worlds(src, &space)?;
    let limit = world(src, &space, src.require(&cfg.limit, "limit")?, "limit")?.remove(0);
    let tol = *src.require(&cfg.tol, "tol")?;
    if !(tol > 0.0 && tol.is_finite()) {
        bail!(src.key_error("tol", "tol must be positive"));
    }
    let events = match &cfg.events {
        None => Event::all_events(&space).map_err(|e| src.key_error("events", e.to_string()))?,
        Some(list) => list
            .iter()
            .map(|e| Event::parse(&space, e).map_err(|err| src.key_error("events", err.to_string())))
            .collect::<Result<_>>()?,
    };
    let report =
        weak_convergence_check(&seq, &limit, &events, tol).map_err(|e| src.key_error("events", e.to_string()))?;
    let mut claimed = false;
    for spec in &cfg.claims {
        match spec {
            ClaimSpec::Converges {} => claimed = true,
            other => bail!(src.key_error("claims", format!("{other:?} does not apply to weak-convergence"))),
        }
    }
    Ok(Results::WeakConvergence { report, claimed })
}

/// Membership of a world in a parsed hypothesis; used by tests.
pub fn membership(h: &Hypothesis, w: &World, depth: usize) -> Result<Membership> {
    Ok(contains(h, w, depth)?)
}
