use std::collections::BTreeSet;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use num_rational::BigRational;
use ordlab::convexity::{
    archimedean_at_scale, convex_at_scale, coset_chain_check, maximal_convex_subgroup_zn, ConvexityVerdict,
    SubgroupOracle,
};
use ordlab::dynamics::{
    conradian_at_scale, non_recurrence_certificate, poincare_an_verification, poincare_return_times,
    recurrent_at_scale, CertificateSearch, FiniteDynamicalSystem, RecurrenceParams, ReturnTime, ScaleReport,
    ScaleVerdict,
};
use ordlab::group::Letter;
use ordlab::indicability::{abelianization, z_quotient_witness, Presentation};
use ordlab::order::OrderDescriptor;
use ordlab::space::{
    basic_open_nonempty_at_radius, enumerate_cones, refute_left_orderability, verify_certificate, Refutation,
    SearchOptions, SearchVerdict, OVER_APPROXIMATION_NOTE,
};
use ordlab::{Group, GroupElement, OrderOracle, OrderedChain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ConfigError, TaskConfig, TaskKind};
use crate::demo::{demo_counterexample, DemoParams};
use crate::report::{Report, Tool};
use crate::{RunOptions, Status, DEFAULT_SEED};

/// Failing instances listed in a report; counts are always complete.
const MAX_LISTED: usize = 100;

pub(crate) fn run(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<Report> {
    let seed = opts.seed.or(c.seed).unwrap_or(DEFAULT_SEED);
    let (status, verdict, result, notes) = match c.task {
        TaskKind::EnumerateOrders => enumerate(c, opts)?,
        TaskKind::OpenSet => open_set(c, opts)?,
        TaskKind::RefuteLo => refute(c, opts)?,
        TaskKind::CheckConradian => conradian(c, opts)?,
        TaskKind::CheckRecurrent => recurrent(c, opts)?,
        TaskKind::Convexity => convexity(c, opts)?,
        TaskKind::Poincare => poincare(c, seed)?,
        TaskKind::Counterexample => {
            let mut p = DemoParams::default();
            if let Some(n) = c.n {
                p.recurrence_n = n;
            }
            if let Some(m) = c.min_witnesses {
                p.min_witnesses = m;
            }
            if let Some(w) = &c.t_word {
                p.t_word = w.clone();
            }
            if let Some(b) = c.bound {
                p.bound = b;
            }
            if let Some(r) = c.r {
                p.sample_radius = r;
            }
            let demo = demo_counterexample(&p, opts)?;
            let status = if demo.all_passed { Status::Refuted } else { Status::Inconclusive };
            let verdict = if demo.all_passed { "certified_non_recurrent" } else { "incomplete" };
            (status, verdict.to_string(), serde_json::to_value(&demo)?, demo.narrative.clone())
        }
        TaskKind::Indicable => indicable(c)?,
    };
    let ball_cap = match &c.group {
        Some(spec) => opts.group(spec)?.ball_cap(),
        None => opts.ball_cap.unwrap_or(ordlab::group::DEFAULT_BALL_CAP),
    };
    Ok(Report {
        tool: Tool::current(),
        task: c.clone(),
        seed,
        strong_propagation: opts.strong_propagation,
        ball_cap,
        verdict,
        exit_code: status.code(),
        result,
        notes,
    })
}

type TaskOutput = (Status, String, Value, Vec<String>);

fn group(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<Group> {
    let spec = c.group.as_ref().ok_or_else(|| missing("group"))?;
    Ok(opts.group(spec)?)
}

fn missing(field: &str) -> anyhow::Error {
    ConfigError {
        path: field.into(),
        message: "required for this task".into(),
    }
    .into()
}

fn element(g: &Group, w: &[Letter]) -> anyhow::Result<GroupElement> {
    Ok(g.evaluate_word(w)?)
}

fn order(c: &TaskConfig, g: &Group) -> anyhow::Result<OrderOracle> {
    let d = c.order.as_ref().ok_or_else(|| missing("order"))?;
    Ok(OrderOracle::from_descriptor(g, d)?)
}

fn search_options(c: &TaskConfig, opts: &RunOptions) -> SearchOptions {
    let mut s = SearchOptions {
        strong: opts.strong_propagation,
        workers: opts.workers.max(1),
        ..SearchOptions::default()
    };
    if let Some(m) = c.max_nodes {
        s.max_nodes = m;
    }
    s
}

/// Ball of the given radius followed by the extra elements, without repeats.
fn sample(g: &Group, r: usize, extra: &[Vec<Letter>]) -> anyhow::Result<Vec<GroupElement>> {
    let mut out = g.ball(r)?.elements().to_vec();
    for w in extra {
        let x = element(g, w)?;
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn strings(xs: &[GroupElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn enumerate(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let r = c.r.ok_or_else(|| missing("r"))?;
    let e = enumerate_cones(&g, r, c.limit.unwrap_or(10_000), &search_options(c, opts))?;
    let ball = g.ball(r)?;
    let result = json!({
        "radius": r,
        "ball": strings(ball.elements()),
        "count": e.cones.len(),
        "complete": e.complete,
        "nodes": e.nodes,
        "cones": e.cones.iter().map(|k| k.signature()).collect::<Vec<_>>(),
    });
    let (status, verdict) = if e.complete {
        (Status::Holds, "complete")
    } else {
        (Status::Inconclusive, "incomplete")
    };
    Ok((status, verdict.into(), result, vec![OVER_APPROXIMATION_NOTE.into()]))
}

fn open_set(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let r = c.r.ok_or_else(|| missing("r"))?;
    let words = c.chain.as_ref().ok_or_else(|| missing("chain"))?;
    let elems = words.iter().map(|w| element(&g, w)).collect::<anyhow::Result<Vec<_>>>()?;
    let chain = OrderedChain::new(elems)?;
    let res = basic_open_nonempty_at_radius(&g, r, &chain, &search_options(c, opts))?;
    let mut result = json!({
        "radius": res.radius,
        "chain": strings(chain.elements()),
        "nodes": res.nodes,
        "witness": res.witness.as_ref().map(|w| w.signature()),
        "certificate": res.certificate,
    });
    if let Some(cert) = &res.certificate {
        verify_certificate(&g, cert).map_err(|e| anyhow!(ordlab::Error::OracleDefect(e)))?;
        result["certificate_verified"] = json!(true);
    }
    if c.order.is_some() {
        let o = order(c, &g)?;
        result["order_in_open_set"] = json!(o.in_basic_open(&chain)?);
    }
    let (status, verdict) = match res.verdict {
        SearchVerdict::ConsistentAtRadius => (Status::Holds, "consistent_at_radius"),
        SearchVerdict::EmptyAtRadius => (Status::Refuted, "empty_at_radius"),
        SearchVerdict::Inconclusive => (Status::Inconclusive, "inconclusive"),
    };
    Ok((status, verdict.into(), result, vec![OVER_APPROXIMATION_NOTE.into()]))
}

fn refute(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let r_max = c.r_max.ok_or_else(|| missing("r_max"))?;
    Ok(match refute_left_orderability(&g, r_max, &search_options(c, opts))? {
        Refutation::Refuted(cert) => {
            verify_certificate(&g, &cert).map_err(|e| anyhow!(ordlab::Error::OracleDefect(e)))?;
            let result = json!({
                "radius": cert.radius,
                "certificate_size": cert.size(),
                "certificate_verified": true,
                "certificate": cert,
            });
            (Status::Refuted, "not_left_orderable".into(), result, vec![])
        }
        Refutation::Inconclusive { radius, witness, budget_hit } => {
            let result = json!({
                "radius": radius,
                "witness": witness.map(|w| w.signature()),
                "budget_hit": budget_hit,
            });
            (Status::Inconclusive, "inconclusive".into(), result, vec![OVER_APPROXIMATION_NOTE.into()])
        }
    })
}

const CONVEXITY_NOTE: &str = "convexity and power bounds are checked on the sampled elements and the cyclic subgroups they generate, not on all subgroups";

pub(crate) fn scale_summary(rep: &ScaleReport) -> Value {
    json!({
        "verdict": rep.verdict,
        "tested": rep.tested,
        "failing": rep.failing,
        "truncated": rep.truncated,
        "failures": rep.failures().take(MAX_LISTED).collect::<Vec<_>>(),
        "certificate": rep.certificate,
    })
}

fn scale_status(v: ScaleVerdict) -> (Status, String) {
    match v {
        ScaleVerdict::HoldsAtScale => (Status::Holds, "holds_at_scale".into()),
        ScaleVerdict::FailsAtScale => (Status::Inconclusive, "fails_at_scale".into()),
        ScaleVerdict::CertifiedFailure => (Status::Refuted, "certified_failure".into()),
    }
}

fn conradian(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let o = order(c, &g)?;
    let elems = sample(&g, c.r.unwrap_or(2), &c.extra_elements)?;
    let rep = conradian_at_scale(&o, &elems, c.n.unwrap_or(10))?;
    let (status, verdict) = scale_status(rep.verdict);
    Ok((status, verdict, scale_summary(&rep), vec![rep.note.clone()]))
}

fn recurrent(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let o = order(c, &g)?;
    let mut elems = sample(&g, c.r.unwrap_or(1), &c.extra_elements)?;
    let mut cert = None;
    let mut search = Value::Null;
    if let Some(t) = &c.t_word {
        match non_recurrence_certificate(&o, t, c.bound.unwrap_or(5))? {
            CertificateSearch::Found(found) => {
                for x in [&found.gamma, &found.chain[1]] {
                    for y in [x.clone(), g.inv(x)] {
                        if !elems.contains(&y) {
                            elems.push(y);
                        }
                    }
                }
                cert = Some(*found);
            }
            other => search = serde_json::to_value(other)?,
        }
    }
    let defaults = RecurrenceParams::default();
    let params = RecurrenceParams {
        n_max: c.n.unwrap_or(defaults.n_max),
        max_chain_len: c.max_chain_len.unwrap_or(defaults.max_chain_len),
        min_witnesses: c.min_witnesses.unwrap_or(defaults.min_witnesses),
        max_instances: c.max_instances.unwrap_or(defaults.max_instances),
    };
    let mut rep = recurrent_at_scale(&o, &elems, &params)?;
    if let Some(cert) = cert {
        if rep.verdict == ScaleVerdict::FailsAtScale {
            rep = rep.certify(cert)?;
        }
    }
    let (status, verdict) = scale_status(rep.verdict);
    let mut result = scale_summary(&rep);
    result["certificate_search"] = search;
    result["sample_size"] = json!(elems.len());
    Ok((status, verdict, result, vec![rep.note.clone()]))
}

fn convexity(c: &TaskConfig, opts: &RunOptions) -> anyhow::Result<TaskOutput> {
    let g = group(c, opts)?;
    let o = order(c, &g)?;
    let (sub, maximal) = match &c.subgroup {
        Some(spec) => (SubgroupOracle::new(&g, spec.clone())?, false),
        None => {
            let d: OrderDescriptor = c.order.clone().ok_or_else(|| missing("order"))?;
            (maximal_convex_subgroup_zn(&g, &d)?, true)
        }
    };
    let elems = sample(&g, c.r.unwrap_or(3), &c.extra_elements)?;
    let rep = convex_at_scale(&o, &sub, &elems)?;
    let mut result = json!({
        "subgroup": sub.spec(),
        "maximal_convex": maximal,
        "convexity": rep,
    });
    if matches!(rep.verdict, ConvexityVerdict::ConvexAtScale) {
        result["cosets"] = serde_json::to_value(coset_chain_check(&o, &sub, &elems)?)?;
    }
    if let Some(n) = c.n {
        result["archimedean"] = scale_summary(&archimedean_at_scale(&o, &elems, n)?);
    }
    Ok(match rep.verdict {
        ConvexityVerdict::ConvexAtScale => (Status::Holds, "convex_at_scale".into(), result, vec![CONVEXITY_NOTE.into()]),
        ConvexityVerdict::Violation { .. } => (Status::Refuted, "not_convex".into(), result, vec![CONVEXITY_NOTE.into()]),
    })
}

fn parse_weight(s: &str) -> anyhow::Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| {
        ConfigError {
            path: "system.weights".into(),
            message: format!("{s:?} is not a fraction"),
        }
        .into()
    })
}

fn random_system(rng: &mut ChaCha8Rng, max_points: usize) -> anyhow::Result<(FiniteDynamicalSystem, BTreeSet<usize>)> {
    use rand::seq::SliceRandom;
    let n = rng.gen_range(1..=max_points);
    let cyclic = rng.gen_range(1..=n);
    let mut perm: Vec<usize> = (0..cyclic).collect();
    perm.shuffle(rng);
    let mut raw = vec![0u64; n];
    let mut seen = vec![false; cyclic];
    for start in 0..cyclic {
        if seen[start] {
            continue;
        }
        let w = if start == 0 { rng.gen_range(1..10) } else { rng.gen_range(0..10) };
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            raw[x] = w;
            x = perm[x];
        }
    }
    let mut map = perm;
    for x in cyclic..n {
        map.push(rng.gen_range(0..x));
    }
    let total: u64 = raw.iter().sum();
    let weights = raw.iter().map(|&w| BigRational::new(w.into(), total.into())).collect();
    let forced = rng.gen_range(0..n);
    let a: BTreeSet<usize> = (0..n).filter(|&x| x == forced || rng.gen_bool(0.3)).collect();
    Ok((FiniteDynamicalSystem::new(map, weights)?, a))
}

fn poincare(c: &TaskConfig, seed: u64) -> anyhow::Result<TaskOutput> {
    let mut systems = Vec::new();
    if let Some(s) = &c.system {
        let weights = s.weights.iter().map(|w| parse_weight(w)).collect::<anyhow::Result<Vec<_>>>()?;
        let sys = match &s.labels {
            Some(l) => FiniteDynamicalSystem::with_labels(l.clone(), s.map.clone(), weights)?,
            None => FiniteDynamicalSystem::new(s.map.clone(), weights)?,
        };
        let a: BTreeSet<usize> = c.return_set.clone().ok_or_else(|| missing("return_set"))?.into_iter().collect();
        systems.push((sys, a));
    }
    if let Some(rs) = c.random_systems {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..rs.count {
            systems.push(random_system(&mut rng, rs.max_points)?);
        }
    }
    let mut rows = Vec::new();
    let mut all_return = true;
    for (sys, a) in &systems {
        let times = poincare_return_times(sys, a)?;
        let positive_return = times
            .iter()
            .all(|(x, t)| num_traits::Zero::is_zero(sys.weight(*x)) || matches!(t, ReturnTime::Returns(_)));
        all_return &= positive_return;
        let ns: Vec<usize> = match c.n {
            Some(n) => vec![n as usize],
            None => (1..=sys.len()).collect(),
        };
        let mut an = Vec::new();
        for n in ns {
            let rep = poincare_an_verification(sys, a, n).context("A_n verification")?;
            an.push(json!({
                "n": n,
                "exceptions": rep.exceptions,
                "exception_measure": rep.exception_measure.to_string(),
                "overlap": rep.overlap,
            }));
        }
        rows.push(json!({
            "points": sys.len(),
            "bijective": sys.is_bijective(),
            "return_set": a,
            "return_times": times,
            "positive_weight_points_return": positive_return,
            "a_n": if c.random_systems.is_some() { json!(an.len()) } else { json!(an) },
        }));
    }
    let result = json!({ "systems": rows });
    Ok(if all_return {
        (Status::Holds, "recurrence_verified".into(), result, vec![])
    } else {
        (Status::Internal, "recurrence_violated".into(), result, vec![])
    })
}

fn indicable(c: &TaskConfig) -> anyhow::Result<TaskOutput> {
    let ps: Vec<&Presentation> = c.presentation.iter().chain(&c.presentations).collect();
    let mut rows = Vec::new();
    let mut all = true;
    for p in ps {
        let s = abelianization(p);
        let witness = z_quotient_witness(p);
        all &= witness.is_some();
        rows.push(json!({
            "generators": p.generators(),
            "relators": p.relators(),
            "invariants": s.invariants.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "free_rank": s.free_rank,
            "torsion": s.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "has_infinite_cyclic_quotient": witness.is_some(),
            "witness": witness.map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "snf": { "u": s.u, "v": s.v, "diagonal": s.diagonal },
        }));
    }
    let result = json!({ "presentations": rows });
    Ok(if all {
        (Status::Holds, "infinite_cyclic_quotient".into(), result, vec![])
    } else {
        (Status::Refuted, "finite_abelianization".into(), result, vec![])
    })
}
