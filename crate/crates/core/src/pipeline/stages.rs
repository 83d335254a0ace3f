use rand::seq::index::sample;
use serde_json::json;

use super::{build_ladder, log2_log2, PipelineConfig, PipelineError, PipelineTrace};
use crate::almostreg::almost_bireg_to_almost_reg;
use crate::cleanup::codegree_clean;
use crate::dyadic::{pow2_floor_usize, Dyadic};
use crate::graph::{
    bipartite_half, prune_min_degree, trim_b_to_degree, BipartiteGraph, Graph, Side,
};
use crate::oracle::{
    check_witness, find_kkk, AlmostRegularCertificate, BiregularCertificate, SearchResult,
};
use crate::regularize::{
    audit_iteration, check_with_codegree, iterate_regularize, IterationMode, RegularizationParams,
};
use crate::rng::{derive_seed, stream_rng};

pub type AlmostRegularResult = Result<(Graph, AlmostRegularCertificate), PipelineError>;

fn status<T, E>(r: &Result<T, E>) -> &'static str {
    if r.is_ok() {
        "ok"
    } else {
        "violated"
    }
}

/// Final audit shared by every producer of an almost-regular subgraph.
fn verify_output(
    stage: &str,
    host: &Graph,
    out: &Graph,
    cert: &AlmostRegularCertificate,
) -> Result<(), PipelineError> {
    if !out.is_subgraph_of(host) || !cert.check(out) {
        return Err(PipelineError::failed(
            stage,
            "output does not verify against its certificate",
        ));
    }
    Ok(())
}

/// Iterated regularization followed by the almost-biregular thinning, for
/// inputs whose A-codegrees are at most `2^(2rs-(2r-1)t-r)`.
///
/// Strict configs reject inputs that miss the hypotheses; scaled configs
/// log the miss and continue with the single-round checks only.
pub fn small_codeg_to_almostreg(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> AlmostRegularResult {
    const STAGE: &str = "small_codeg_to_almostreg";
    let cap_exp = p.iterated_codegree_exp() - p.r as i64;
    let check = check_with_codegree(g, p, cap_exp);
    // a B-vertex of degree >= 2 gives codegree >= 1, so the cap forces
    // 2rs - (2r-1)t >= r
    let shared = g.side_b().iter().any(|&v| g.degree(v) >= 2);
    let implied = p.iterated_codegree_exp() >= p.r as i64;
    if check.is_ok() && shared {
        assert!(implied, "codegree cap admitted a pair with 2rs-(2r-1)t < r");
    }
    trace.push(
        &format!("{STAGE}.hypotheses"),
        status(&check),
        json!({
            "r": p.r, "s": p.s, "t": p.t,
            "codegree_cap_exp": cap_exp,
            "iterated_exp_at_least_r": implied,
            "detail": check.as_ref().err().map(|e| e.to_string()),
        }),
    );
    if let Err(e) = check {
        if cfg.strict() {
            return Err(PipelineError::from_regularize(STAGE, e));
        }
        trace.warn(format!("{STAGE}: continuing past violated hypothesis: {e}"));
    }

    let mode = if cfg.strict() {
        IterationMode::Strict {
            r_floor: cfg.r_floor,
        }
    } else {
        IterationMode::Relaxed
    };
    let iterated = iterate_regularize(g, p, derive_seed(seed, 1), cfg.max_trials, mode);
    let o = match iterated {
        Ok(o) => o,
        Err(e) => {
            trace.push(
                "iterate_regularize",
                "failed",
                json!({ "detail": e.to_string() }),
            );
            return Err(PipelineError::from_regularize("iterate_regularize", e));
        }
    };
    audit_iteration(g, p, &o, cfg.strict())
        .map_err(|e| PipelineError::failed("iterate_regularize", e))?;
    trace.push("iterate_regularize", "ok", &o);

    let star = &o.subgraph;
    let l = (p.r as f64).powi(5);
    let cert = BiregularCertificate::measure(star, l, p.r);
    let cert_ok = cert.check(star);
    trace.push(
        "bireg_certificate",
        if cert_ok { "ok" } else { "failed" },
        json!({ "L": l, "d": p.r, "edges": cert.edges, "A": cert.a.len(), "B": cert.b.len() }),
    );
    if !cert_ok {
        return Err(PipelineError::failed(
            "bireg_certificate",
            format!("G* is not ({l}, {})-almost-biregular", p.r),
        ));
    }
    let (out, out_cert, report) =
        almost_bireg_to_almost_reg(star, &cert, derive_seed(seed, 2), cfg.thinning_trials)
            .map_err(PipelineError::from_almostreg)?;
    verify_output(STAGE, g.graph(), &out, &out_cert)?;
    let target = p.r as f64 / (80.0 * (p.r as f64).log2());
    trace.push(
        "almost_bireg_to_almost_reg",
        "ok",
        json!({
            "report": report,
            "certificate": out_cert,
            "target_avg_degree": target,
            "meets_target": out_cert.avg_degree >= target,
        }),
    );
    Ok((out, out_cert))
}

/// Codegree cleaning, side-B filtering and trimming to `⌈r/(2k+2)⌉`, then
/// [`small_codeg_to_almostreg`]. A `K_{k,k}` found on the way is returned
/// as [`PipelineError::KkkFound`].
#[allow(clippy::too_many_arguments)]
pub fn kkkfree_to_almostreg(
    g: &BipartiteGraph,
    k: usize,
    r: usize,
    s: u32,
    t: u32,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> AlmostRegularResult {
    const STAGE: &str = "kkkfree_to_almostreg";
    let a = g.side_a();
    let c = cfg.constant("kkk_edges");
    let (kk, rr) = (k as u128 + 1, r as u128);
    let mut problems = Vec::new();
    if k == 0 || r == 0 || a.is_empty() {
        problems.push("k, r and |A| must be positive".to_string());
    }
    if s >= t {
        problems.push(format!("s = {s} >= t = {t}"));
    }
    if 6 * rr * (s as u128) < (t as u128) * (6 * rr - 1) {
        problems.push(format!("s = {s} < t(1 - 1/(6r)) for t = {t}, r = {r}"));
    }
    if let Some(v) = g.side_b().into_iter().find(|&v| g.degree(v) != r) {
        problems.push(format!("B-vertex {v} has degree {} != r", g.degree(v)));
    }
    if let Some(&u) = a
        .iter()
        .find(|&&u| Dyadic::int(g.degree(u) as u128) > Dyadic::pow2(t as i64))
    {
        problems.push(format!("A-vertex {u} has degree {} > 2^{t}", g.degree(u)));
    }
    let need = c * (kk * kk) as f64 * (s as f64).exp2() * a.len() as f64;
    if (g.edge_count() as f64) < need {
        problems.push(format!("e = {} < {need:.1}", g.edge_count()));
    }
    trace.push(
        &format!("{STAGE}.hypotheses"),
        if problems.is_empty() {
            "ok"
        } else {
            "violated"
        },
        json!({ "k": k, "r": r, "s": s, "t": t, "edge_multiplier": c, "problems": problems }),
    );
    if !problems.is_empty() {
        return Err(PipelineError::violated(STAGE, problems.join("; ")));
    }

    let search = find_kkk(g.graph(), k, &cfg.budget);
    trace.push(
        "find_kkk",
        search.label(),
        json!({ "k": k, "stats": search.stats() }),
    );
    match search {
        SearchResult::Found { witness, .. } => {
            assert!(check_witness(g.graph(), &witness));
            return Err(PipelineError::KkkFound(witness));
        }
        SearchResult::BudgetExceeded { .. } => {
            trace.warn(format!(
                "K_{{{k},{k}}}-freeness not confirmed within budget"
            ));
        }
        SearchResult::NotFound { .. } => {}
    }

    let m = pow2_floor_usize(t as i64);
    let (cleaned, report) = codegree_clean(g, k, m).map_err(PipelineError::from_cleanup)?;
    trace.push(
        "codegree_clean",
        if report.retention_ok { "ok" } else { "failed" },
        &report,
    );
    if !report.retention_ok {
        return Err(PipelineError::failed(
            "codegree_clean",
            format!(
                "kept {} of {} edges",
                report.output_edges, report.input_edges
            ),
        ));
    }

    let div = 2 * k + 2;
    let r2 = r.div_ceil(div);
    let n = g.graph().vertex_count();
    let mut keep = vec![false; n];
    for &u in &a {
        keep[u] = true;
    }
    let mut b_tilde = 0;
    for v in cleaned.side_b() {
        if div * cleaned.degree(v) >= r {
            keep[v] = true;
            b_tilde += 1;
        }
    }
    let filtered = cleaned.restrict(&keep);
    let trimmed = trim_b_to_degree(&filtered, r2, derive_seed(seed, 3))
        .map_err(|e| PipelineError::from_graph("trim_b", e))?;
    let accounting_ok = 4 * (k + 1) * (k + 1) * trimmed.edge_count() >= g.edge_count();
    trace.push(
        "filter_and_trim",
        "ok",
        json!({
            "r_prime": r2,
            "b_tilde": b_tilde,
            "edges_in": g.edge_count(),
            "edges_cleaned": cleaned.edge_count(),
            "edges_out": trimmed.edge_count(),
            "edge_accounting_ok": accounting_ok,
        }),
    );
    let p = RegularizationParams { r: r2, s, t };
    let (out, cert) = small_codeg_to_almostreg(&trimmed, &p, cfg, derive_seed(seed, 4), trace)?;
    verify_output(STAGE, g.graph(), &out, &cert)?;
    Ok((out, cert))
}

/// 64-almost-regular subgraph of `g` via bipartization, pruning, the
/// degree ladder and its case split.
pub fn general_main(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
) -> (AlmostRegularResult, PipelineTrace) {
    let mut trace = PipelineTrace::new("general_main", seed, Some(cfg));
    let res = general_main_traced(g, cfg, seed, &mut trace, false);
    match &res {
        Ok(_) => trace.outcome = "ok".into(),
        Err(e) => trace.fail(e),
    }
    (res, trace)
}

pub(crate) fn general_main_traced(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
    kkk_checked: bool,
) -> AlmostRegularResult {
    const STAGE: &str = "general_main";
    cfg.validate()?;
    let (k, r) = (cfg.k, cfg.r);
    let delta = g.max_degree();
    if delta < 4 {
        return Err(PipelineError::DegenerateDelta(delta));
    }
    if cfg.strict() && r < cfg.r_floor {
        return Err(PipelineError::violated(
            STAGE,
            format!("r = {r} < r_floor = {}", cfg.r_floor),
        ));
    }
    let lambda = log2_log2(delta as f64);
    let r2l = (r * r) as f64 * lambda;
    let avg = g.average_degree();
    let need = cfg.constant("main_avg") * r2l;
    trace.push(
        &format!("{STAGE}.hypotheses"),
        if avg >= need { "ok" } else { "violated" },
        json!({ "n": g.vertex_count(), "edges": g.edge_count(), "delta": delta, "avg_degree": avg, "required": need }),
    );
    if avg < need {
        return Err(PipelineError::violated(
            STAGE,
            format!("average degree {avg:.3} < {need:.3}"),
        ));
    }
    if !kkk_checked {
        let search = find_kkk(g, k, &cfg.budget);
        trace.push(
            "find_kkk",
            search.label(),
            json!({ "k": k, "stats": search.stats() }),
        );
        if let SearchResult::Found { witness, .. } = search {
            return Err(PipelineError::KkkFound(witness));
        }
    }

    let half = bipartite_half(g, derive_seed(seed, 10))
        .map_err(|e| PipelineError::from_graph("bipartite_half", e))?;
    let threshold = (half.graph().average_degree() / 2.0).ceil() as usize;
    let pruned = prune_min_degree(half.graph(), threshold);
    let mut core = half
        .with_graph(pruned)
        .map_err(|e| PipelineError::from_graph("prune", e))?
        .without_isolated();
    let b_target = (cfg.constant("b_degree") * r2l).ceil() as usize;
    let min_deg = core.graph().degree_stats().min_degree;
    trace.push(
        "bipartite_prune",
        "ok",
        json!({
            "bipartite_edges": half.edge_count(),
            "prune_threshold": threshold,
            "core_edges": core.edge_count(),
            "core_min_degree": min_deg,
            "b_target": b_target,
        }),
    );
    if core.edge_count() == 0 || min_deg < b_target.max(1) {
        return Err(PipelineError::violated(
            "bipartite_prune",
            format!("core minimum degree {min_deg} below {b_target}"),
        ));
    }
    if core.part_size(Side::A) > core.part_size(Side::B) {
        core = core.swapped();
    }
    let h = trim_b_to_degree(&core, b_target, derive_seed(seed, 11))
        .map_err(|e| PipelineError::from_graph("trim_b", e))?;

    let plan = build_ladder(g, r)?;
    let classes = plan.classes(&h);
    let n = g.vertex_count();
    let mut level = vec![usize::MAX; n];
    for (i, cls) in classes.iter().enumerate() {
        cls.iter().for_each(|&u| level[u] = i);
    }
    let b = h.side_b();
    let mut per_level = vec![vec![0usize; plan.ell + 1]; n];
    for &v in &b {
        for &u in h.neighbors(v) {
            per_level[v][level[u]] += 1;
        }
    }
    let low: Vec<_> = b
        .iter()
        .copied()
        .filter(|&v| 2 * per_level[v][0] >= b_target)
        .collect();
    let level_counts: Vec<usize> = (1..=plan.ell)
        .map(|i| b.iter().filter(|&&v| per_level[v][i] >= r).count())
        .collect();
    let case1 = 2 * low.len() >= b.len();
    let best = level_counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| 2 * plan.ell * c >= b.len())
        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
        .map(|(i, &c)| (i + 1, c));
    trace.push(
        "ladder",
        "ok",
        json!({
            "plan": plan,
            "class_sizes": classes.iter().map(Vec::len).collect::<Vec<_>>(),
            "case1_count": low.len(),
            "level_counts": level_counts,
            "b_size": b.len(),
            "case1_holds": case1,
            "case2_level": best.map(|x| x.0),
        }),
    );

    let out = if case1 {
        case_one(&h, &classes[0], &low, &plan, cfg, seed, trace)?
    } else if let Some((i, _)) = best {
        case_two(&h, &classes[i], i, &plan, cfg, seed, trace)?
    } else {
        return Err(PipelineError::failed("case_split", "neither case holds"));
    };
    verify_output(STAGE, g, &out.0, &out.1)?;
    let target = r as f64 / (160.0 * (k + 1) as f64 * (r as f64).log2());
    trace.push(
        "result",
        "ok",
        json!({
            "certificate": out.1,
            "target_avg_degree": target,
            "meets_target": out.1.avg_degree >= target,
        }),
    );
    Ok(out)
}

fn case_one(
    h: &BipartiteGraph,
    a0: &[usize],
    b_prime: &[usize],
    plan: &super::LadderPlan,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> AlmostRegularResult {
    const STAGE: &str = "case1";
    let r2l = (cfg.r * cfg.r) as f64 * plan.loglog;
    let d1 = (cfg.constant("case1_degree") * r2l).ceil() as usize;
    let n = h.graph().vertex_count();
    let size = a0.len() / 3;
    if size == 0 || d1 == 0 {
        return Err(PipelineError::violated(
            STAGE,
            format!("|A_0|/3 = {size}, d = {d1}"),
        ));
    }
    let case_seed = derive_seed(seed, 12);
    let mut chosen = None;
    for trial in 0..cfg.max_trials {
        let mut rng = stream_rng(case_seed, trial as u64);
        let mut in_sub = vec![false; n];
        sample(&mut rng, a0.len(), size)
            .into_iter()
            .for_each(|i| in_sub[a0[i]] = true);
        let b2: Vec<usize> = b_prime
            .iter()
            .copied()
            .filter(|&v| h.neighbors(v).iter().filter(|&&u| in_sub[u]).count() >= d1)
            .collect();
        if 3 * b2.len() >= 2 * b_prime.len() {
            chosen = Some((trial, in_sub, b2));
            break;
        }
    }
    let Some((trial, mut keep, b2)) = chosen else {
        trace.push(STAGE, "failed", json!({ "trials": cfg.max_trials }));
        return Err(PipelineError::failed(
            STAGE,
            format!("no good A_0 subset in {} trials", cfg.max_trials),
        ));
    };
    // |A_0'| <= |A|/3 <= |B|/3 <= 2|B'|/3 <= |B''|
    assert!(size <= b2.len(), "case 1 size chain broken");
    b2.iter().for_each(|&v| keep[v] = true);
    let sub = h.restrict(&keep);
    let h1 = trim_b_to_degree(&sub, d1, derive_seed(seed, 13))
        .map_err(|e| PipelineError::from_graph("trim_b", e))?;
    let l = plan.t0.exp2();
    let cert = BiregularCertificate::measure(&h1, l, d1);
    let ok = cert.check(&h1);
    trace.push(
        STAGE,
        if ok { "ok" } else { "failed" },
        json!({ "trial": trial, "a0_prime": size, "b_prime": b_prime.len(), "b_double_prime": b2.len(), "d": d1, "L": l }),
    );
    if !ok {
        return Err(PipelineError::failed(STAGE, "H' is not almost-biregular"));
    }
    let (out, out_cert, report) =
        almost_bireg_to_almost_reg(&h1, &cert, derive_seed(seed, 14), cfg.thinning_trials)
            .map_err(PipelineError::from_almostreg)?;
    trace.push(
        "almost_bireg_to_almost_reg",
        "ok",
        json!({ "report": report, "certificate": out_cert }),
    );
    Ok((out, out_cert))
}

fn case_two(
    h: &BipartiteGraph,
    ai: &[usize],
    i: usize,
    plan: &super::LadderPlan,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> AlmostRegularResult {
    const STAGE: &str = "case2";
    let r = cfg.r;
    let n = h.graph().vertex_count();
    let mut in_ai = vec![false; n];
    ai.iter().for_each(|&u| in_ai[u] = true);
    let mut keep = in_ai.clone();
    let mut b_count = 0;
    for v in h.side_b() {
        if h.neighbors(v).iter().filter(|&&u| in_ai[u]).count() >= r {
            keep[v] = true;
            b_count += 1;
        }
    }
    let sub = h.restrict(&keep);
    let h2 = trim_b_to_degree(&sub, r, derive_seed(seed, 15))
        .map_err(|e| PipelineError::from_graph("trim_b", e))?;
    let t = plan.levels[i].ceil() as u32;
    // ⌈t (1 - 1/(6r))⌉ = t - ⌊t/(6r)⌋
    let s = t - t / (6 * r as u32);
    trace.push(
        STAGE,
        "ok",
        json!({ "level": i, "a_size": ai.len(), "b_size": b_count, "edges": h2.edge_count(), "s": s, "t": t }),
    );
    kkkfree_to_almostreg(&h2, cfg.k, r, s, t, cfg, derive_seed(seed, 16), trace)
}
