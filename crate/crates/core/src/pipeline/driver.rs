use serde::{Deserialize, Serialize};
use serde_json::json;

use super::stages::{general_main_traced, AlmostRegularResult};
use super::{log2_log2, PipelineConfig, PipelineError, PipelineTrace};
use crate::graph::{Graph, SubgraphWitness, Vertex};
use crate::oracle::{
    check_witness, find_k_regular_exact, find_kkk, AlmostRegularCertificate, SearchResult,
};
use crate::rng::derive_seed;

/// A cycle as a 2-regular witness, or `None` for forests. The first edge
/// closing a cycle in edge order fixes the answer.
pub fn find_cycle(g: &Graph) -> Option<SubgraphWitness> {
    let n = g.vertex_count();
    let mut parent: Vec<Vertex> = (0..n).collect();
    fn root(p: &mut [Vertex], mut x: Vertex) -> Vertex {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut forest: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            forest[u].push(v);
            forest[v].push(u);
            continue;
        }
        // tree path from u to v plus the closing edge
        let mut prev = vec![usize::MAX; n];
        prev[u] = u;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &forest[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut edges = vec![(u, v)];
        let mut x = v;
        while x != u {
            edges.push((prev[x], x));
            x = prev[x];
        }
        return Some(SubgraphWitness::from_edges(edges, Some(2)));
    }
    None
}

fn verified(
    g: &Graph,
    k: usize,
    w: SubgraphWitness,
    stage: &str,
) -> Result<SubgraphWitness, PipelineError> {
    if w.claimed_k == Some(k) && check_witness(g, &w) {
        Ok(w)
    } else {
        Err(PipelineError::failed(stage, "witness failed verification"))
    }
}

/// A verified k-regular subgraph of `g`.
///
/// `k = 1, 2` use an edge and a cycle. Larger `k` try, in order, a
/// `K_{k,k}`, the almost-regular pipeline followed by an exact search on its
/// output, and an exact search on `g`. `Absent` is returned only when an
/// exact search completed without a witness.
pub fn find_k_regular(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
) -> (Result<SubgraphWitness, PipelineError>, PipelineTrace) {
    let mut trace = PipelineTrace::new("find_k_regular", seed, Some(cfg));
    let res = find_k_regular_traced(g, cfg, seed, &mut trace);
    match &res {
        Ok(w) => {
            trace.push(
                "witness",
                "ok",
                json!({ "vertices": w.vertices.len(), "edges": w.edges.len() }),
            );
            trace.outcome = "ok".into();
        }
        Err(e) => trace.fail(e),
    }
    (res, trace)
}

fn find_k_regular_traced(
    g: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut PipelineTrace,
) -> Result<SubgraphWitness, PipelineError> {
    cfg.validate()?;
    let k = cfg.k;
    match k {
        1 => {
            let e = g.edges().next();
            trace.push(
                "edge_shortcut",
                if e.is_some() { "found" } else { "not_found" },
                json!({}),
            );
            return match e {
                Some(e) => verified(
                    g,
                    1,
                    SubgraphWitness::from_edges(vec![e], Some(1)),
                    "edge_shortcut",
                ),
                None => Err(PipelineError::Absent { k }),
            };
        }
        2 => {
            let c = find_cycle(g);
            trace.push(
                "cycle_shortcut",
                if c.is_some() { "found" } else { "not_found" },
                json!({}),
            );
            return match c {
                Some(w) => verified(g, 2, w, "cycle_shortcut"),
                None => Err(PipelineError::Absent { k }),
            };
        }
        _ => {}
    }

    let search = find_kkk(g, k, &cfg.budget);
    trace.push(
        "kkk_shortcut",
        search.label(),
        json!({ "stats": search.stats() }),
    );
    if let Some(w) = search.into_witness() {
        return verified(g, k, w, "kkk_shortcut");
    }

    let mut sub = PipelineTrace::new("general_main", seed, Some(cfg));
    let main = general_main_traced(g, cfg, derive_seed(seed, 1), &mut sub, true);
    trace.warnings.append(&mut sub.warnings);
    trace.push(
        "general_main",
        match &main {
            Ok(_) => "ok",
            Err(e) => e.label(),
        },
        json!({
            "stages": sub.stages,
            "error": main.as_ref().err().map(|e| e.to_string()),
        }),
    );
    match main {
        Ok((h, _)) => {
            let inner = find_k_regular_exact(&h, k, &cfg.budget);
            trace.push(
                "extract",
                inner.label(),
                json!({ "stats": inner.stats(), "edges": h.edge_count() }),
            );
            if let Some(w) = inner.into_witness() {
                return verified(g, k, w, "extract");
            }
        }
        Err(PipelineError::KkkFound(w)) => return verified(g, k, w, "general_main"),
        Err(_) => {}
    }

    let fallback = find_k_regular_exact(g, k, &cfg.budget);
    trace.push(
        "exact_fallback",
        fallback.label(),
        json!({ "stats": fallback.stats() }),
    );
    match fallback {
        SearchResult::Found { witness, .. } => verified(g, k, witness, "exact_fallback"),
        SearchResult::NotFound { .. } => Err(PipelineError::Absent { k }),
        SearchResult::BudgetExceeded { .. } => Err(PipelineError::failed(
            "exact_fallback",
            "search budget exceeded",
        )),
    }
}

/// `sqrt(log2 n) / (10 sqrt(log2 log2 n))`.
pub fn sparse_r(n: usize) -> f64 {
    let n = n as f64;
    n.log2().sqrt() / (10.0 * log2_log2(n).sqrt())
}

/// `sqrt(d / (80 log2 log2 n))`.
pub fn budget_r(d: f64, n: usize) -> f64 {
    (d / (80.0 * log2_log2(n as f64))).sqrt()
}

/// Preset parameters with the target and achieved average degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetReport {
    pub preset: String,
    pub n: usize,
    pub edges: usize,
    pub k: usize,
    pub r_formula: f64,
    pub r_used: usize,
    pub clamped: bool,
    /// `r / (160 (k+1) log2 r)` at `r_used`.
    pub target_avg_degree: f64,
    pub achieved_avg_degree: Option<f64>,
    pub meets_target: Option<bool>,
}

#[allow(clippy::too_many_arguments)]
fn run_preset(
    name: &str,
    g: &Graph,
    k: usize,
    r_formula: f64,
    hypothesis: Result<(), String>,
    seed: u64,
    base: &PipelineConfig,
) -> (AlmostRegularResult, PresetReport, PipelineTrace) {
    let mut trace = PipelineTrace::new(name, seed, Some(base));
    let r_used = (r_formula.ceil().max(0.0) as usize).max(base.r_floor);
    let clamped = r_formula < base.r_floor as f64;
    if clamped {
        trace.warn(format!(
            "r = {r_formula:.4} clamped to r_floor = {}",
            base.r_floor
        ));
    }
    let mut report = PresetReport {
        preset: name.into(),
        n: g.vertex_count(),
        edges: g.edge_count(),
        k,
        r_formula,
        r_used,
        clamped,
        target_avg_degree: r_used as f64 / (160.0 * (k + 1) as f64 * (r_used as f64).log2()),
        achieved_avg_degree: None,
        meets_target: None,
    };
    let res = (|| {
        trace.push(
            &format!("{name}.hypotheses"),
            if hypothesis.is_ok() { "ok" } else { "violated" },
            json!({ "detail": hypothesis.as_ref().err() }),
        );
        if let Err(msg) = hypothesis {
            if base.strict() {
                return Err(PipelineError::violated(name, msg));
            }
            trace.warn(format!(
                "{name}: continuing past violated hypothesis: {msg}"
            ));
        }
        let search = find_kkk(g, k, &base.budget);
        trace.push(
            "find_kkk",
            search.label(),
            json!({ "k": k, "stats": search.stats() }),
        );
        if let Some(w) = search.into_witness() {
            let h = Graph::from_edges(g.vertex_count(), w.edges.iter().copied())
                .map_err(|e| PipelineError::from_graph("find_kkk", e))?;
            let cert = AlmostRegularCertificate::measure(&h, crate::almostreg::ALMOST_REGULAR_K);
            return Ok((h, cert));
        }
        let cfg = PipelineConfig {
            k,
            r: r_used,
            ..base.clone()
        };
        general_main_traced(g, &cfg, derive_seed(seed, 1), &mut trace, true)
    })();
    if let Ok((_, cert)) = &res {
        report.achieved_avg_degree = Some(cert.avg_degree);
        report.meets_target = Some(cert.avg_degree >= report.target_avg_degree);
    }
    trace.push("preset", "ok", &report);
    match &res {
        Ok(_) => trace.outcome = "ok".into(),
        Err(e) => trace.fail(e),
    }
    (res, report, trace)
}

/// Sparse preset: `r = sqrt(log2 n)/(10 sqrt(log2 log2 n))`, `k = m0`;
/// expects at least `n log2 n` edges.
pub fn sparse_preset(
    g: &Graph,
    m0: usize,
    seed: u64,
    base: &PipelineConfig,
) -> (AlmostRegularResult, PresetReport, PipelineTrace) {
    let n = g.vertex_count();
    let hyp = if n < 16 {
        Err(format!("n = {n} < 16"))
    } else if (g.edge_count() as f64) < n as f64 * (n as f64).log2() {
        Err(format!("e = {} < n log2 n", g.edge_count()))
    } else {
        Ok(())
    };
    let r = if n >= 16 { sparse_r(n) } else { 0.0 };
    run_preset("sparse_preset", g, m0.max(1), r, hyp, seed, base)
}

/// Degree preset: `r = sqrt(d/(80 log2 log2 n))` with `d` the average
/// degree; `k = t` when given, else the config's `k`. Expects
/// `d >= 2 log2 log2 n`.
pub fn budget_preset(
    g: &Graph,
    t: Option<usize>,
    seed: u64,
    base: &PipelineConfig,
) -> (AlmostRegularResult, PresetReport, PipelineTrace) {
    let n = g.vertex_count();
    let d = g.average_degree();
    let hyp = if n < 16 {
        Err(format!("n = {n} < 16"))
    } else if d < 2.0 * log2_log2(n as f64) {
        Err(format!("average degree {d:.3} < 2 log2 log2 n"))
    } else {
        Ok(())
    };
    let r = if n >= 16 { budget_r(d, n) } else { 0.0 };
    run_preset(
        "budget_preset",
        g,
        t.unwrap_or(base.k).max(1),
        r,
        hyp,
        seed,
        base,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_gnp;

    #[test]
    fn preset_formulas() {
        assert!((sparse_r(1 << 16) - 0.2).abs() < 1e-12);
        assert!((budget_r(80.0 * 16.0 * 4.0, 1 << 16) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_preset_clamps() {
        let g = gen_gnp(64, 0.3, 2);
        let (_, rep, trace) = sparse_preset(&g, 3, 0, &PipelineConfig::scaled(3, 2));
        assert!(rep.clamped);
        assert_eq!(rep.r_used, 2);
        assert!(trace.warnings.iter().any(|w| w.contains("clamped")));
        assert!(trace.stage("preset").is_some());
    }

    #[test]
    fn small_k_shortcuts() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (res, _) = find_k_regular(&path, &PipelineConfig::new(2, 2), 0);
        assert_eq!(res.unwrap_err(), PipelineError::Absent { k: 2 });
        let (res, _) = find_k_regular(&path, &PipelineConfig::new(1, 2), 0);
        assert!(check_witness(&path, &res.unwrap()));
        for seed in 0..20 {
            let g = gen_gnp(30, 0.1, seed);
            let (res, _) = find_k_regular(&g, &PipelineConfig::new(2, 2), seed);
            // e >= n forces a cycle
            match res {
                Ok(w) => assert!(check_witness(&g, &w) && w.claimed_k == Some(2)),
                Err(e) => assert!(g.edge_count() < g.vertex_count(), "{e}"),
            }
        }
    }

    #[test]
    fn k33_is_found() {
        let mut edges: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        edges.extend([(6, 7), (7, 8)]);
        let g = Graph::from_edges(9, edges).unwrap();
        let (res, trace) = find_k_regular(&g, &PipelineConfig::new(3, 3), 0);
        let w = res.unwrap();
        assert_eq!(w.edges.len(), 9);
        assert_eq!(trace.stages[0].stage, "kkk_shortcut");
    }

    #[test]
    fn petersen_via_fallback() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        let (res, trace) = find_k_regular(&g, &PipelineConfig::new(3, 2), 0);
        assert!(check_witness(&g, &res.unwrap()));
        assert_eq!(trace.outcome, "ok");
    }
}
