//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! mandatory criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use regulus::almostreg::nearly_reg_subgraph;
use regulus::cleanup::{codegree_bound, codegree_clean};
use regulus::generators::{
    gen_almost_biregular, gen_c4free_bipartite, gen_c4free_random, gen_gnp, gen_layered,
    gen_regularization_corpus, random_edge_subgraph, LayeredParams,
};
use regulus::graph::{BipartiteGraph, Graph, Side};
use regulus::oracle::{
    check_certificate, find_k_regular_exact, has_k_factor, Certificate, OracleBudget, SearchResult,
};
use regulus::pipeline::{find_k_regular, PipelineConfig};
use regulus::regularize::{
    audit_iteration, audit_outcome, check_hypotheses, degree_classes, iterate_regularize,
    pigeonhole_beta, random_regularize, IterationMode, RegularizationParams,
};
use regulus::rng::derive_seed;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------------------
// Brute-force references, independent of the library's search code.

/// Whether some nonempty edge subset has every touched vertex at degree
/// `k` (`spanning`: every vertex of the graph touched).
fn brute_regular_edge_subset(g: &Graph, k: usize, spanning: bool) -> bool {
    fn go(
        edges: &[(usize, usize)],
        i: usize,
        deg: &mut [usize],
        used: usize,
        k: usize,
        spanning: bool,
    ) -> bool {
        if i == edges.len() {
            return if spanning {
                deg.iter().all(|&d| d == k)
            } else {
                used > 0 && deg.iter().all(|&d| d == 0 || d == k)
            };
        }
        let (u, v) = edges[i];
        if deg[u] < k && deg[v] < k {
            deg[u] += 1;
            deg[v] += 1;
            let hit = go(edges, i + 1, deg, used + 1, k, spanning);
            deg[u] -= 1;
            deg[v] -= 1;
            if hit {
                return true;
            }
        }
        go(edges, i + 1, deg, used, k, spanning)
    }
    let edges: Vec<_> = g.edges().collect();
    let mut deg = vec![0; g.vertex_count()];
    go(&edges, 0, &mut deg, 0, k, spanning)
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn max_codegree_brute(g: &BipartiteGraph) -> usize {
    let a = g.side_a();
    let mut best = 0;
    for (i, &u) in a.iter().enumerate() {
        for &w in &a[i + 1..] {
            let c = g
                .neighbors(u)
                .iter()
                .filter(|x| g.neighbors(w).contains(x))
                .count();
            best = best.max(c);
        }
    }
    best
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let budget = OracleBudget {
        max_subsets: u64::MAX,
        time_limit_ms: 120_000,
    };
    let mut mismatches = 0;
    let mut found = 0;
    for i in 0..200u64 {
        let seed = derive_seed(0xC1, i);
        let n = 4 + (i % 6) as usize;
        let p = 0.25 + 0.5 * ((i / 6) % 5) as f64 / 4.0;
        let g = gen_gnp(n, p, seed);
        for k in [2, 3] {
            let fast = match find_k_regular_exact(&g, k, &budget) {
                SearchResult::Found { witness, .. } => {
                    let ok = check_certificate(&g, &Certificate::Witness(witness));
                    if !ok {
                        mismatches += 1;
                    }
                    true
                }
                SearchResult::NotFound { .. } => false,
                SearchResult::BudgetExceeded { .. } => {
                    mismatches += 1;
                    continue;
                }
            };
            found += fast as usize;
            if fast != brute_regular_edge_subset(&g, k, false) {
                mismatches += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        mismatches == 0 && secs < 120.0,
        format!(
            "400 (graph, k) pairs, {found} with a witness, {mismatches} mismatches, {secs:.2}s"
        ),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    let mut check = |g: &Graph| {
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        for k in [1, 2] {
            checked += 1;
            if has_k_factor(g, &all, k) != brute_regular_edge_subset(g, k, true) {
                mismatches += 1;
            }
        }
    };
    // every labelled graph on up to 6 vertices
    for n in 1..=6usize {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            check(&graph_from_mask(n, mask));
        }
    }
    // seeded sample on 7 vertices
    for i in 0..2000u64 {
        let mask = derive_seed(0xC2, i) & ((1 << 21) - 1);
        check(&graph_from_mask(7, mask));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        mismatches == 0,
        format!("{checked} (graph, k) checks: all labelled graphs on <= 6 vertices plus 2000 on 7, {mismatches} mismatches, {secs:.2}s"),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut instances: Vec<BipartiteGraph> = Vec::new();
    let planes = [2usize, 3, 4, 5, 7, 8, 9, 11, 13, 16];
    for (i, &q) in planes.iter().enumerate() {
        let full = gen_c4free_bipartite(q).unwrap();
        instances.push(full.clone());
        for j in 0..4u64 {
            let p = 0.5 + 0.1 * j as f64;
            instances.push(random_edge_subgraph(
                &full,
                p,
                derive_seed(0xC3, (i as u64) << 8 | j),
            ));
        }
    }
    let mut i = 0u64;
    while instances.len() < 100 {
        let a = 20 + (i % 5) as usize * 10;
        instances.push(gen_c4free_random(a, 2 * a, 3 * a, derive_seed(0xC3F, i)));
        i += 1;
    }
    let mut failures = Vec::new();
    for (idx, g) in instances.iter().enumerate() {
        if max_codegree_brute(g) > 1 {
            failures.push(format!("#{idx} input has a 4-cycle"));
            continue;
        }
        let m = g
            .side_a()
            .iter()
            .map(|&u| g.degree(u))
            .max()
            .unwrap_or(0)
            .max(1);
        let (out, _) = match codegree_clean(g, 2, m) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("#{idx}: {e}"));
                continue;
            }
        };
        let cod = max_codegree_brute(&out) as f64;
        let (e, e2) = (g.edge_count(), out.edge_count());
        if cod > codegree_bound(2, m) || cod > 2.0 * (m as f64).sqrt() || 3 * e2 < e {
            failures.push(format!("#{idx}: codegree {cod}, edges {e} -> {e2}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failures.is_empty() && secs < 10.0,
        format!(
            "{} instances, {} failures {:?}, {secs:.2}s",
            instances.len(),
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut generated = 0;
    let mut i = 0u64;
    while generated < 100 && i < 1000 {
        let seed = derive_seed(0xC4, i);
        i += 1;
        let l = [1.0, 2.0, 4.0, 8.0][(i % 4) as usize];
        let d = 1 + (i / 4 % 8) as usize;
        let size_a = 8 + (i % 7) as usize * 4;
        let size_b = size_a * (1 + (i % 3) as usize);
        let Ok((g, cert)) = gen_almost_biregular(l, d, size_a, size_b, seed) else {
            continue;
        };
        generated += 1;
        let t = Instant::now();
        let res = nearly_reg_subgraph(&g, &cert, derive_seed(seed, 1), 200);
        slowest = slowest.max(t.elapsed());
        match res {
            Ok((h, stats)) => {
                let a = g.part_size(Side::A);
                let e = h.edge_count();
                let cap = 4.0 * cert.l * d as f64;
                let avg_ok = 4 * e >= (a + stats.b_prime) * d && e == stats.x - stats.y;
                let max_ok = h.max_degree() as f64 <= cap;
                let sub_ok = h.edges().all(|(u, v)| g.graph().has_edge(u, v));
                if !(avg_ok && max_ok && sub_ok && stats.resamples <= 200) {
                    failures.push(format!(
                        "instance {i}: avg {avg_ok} max {max_ok} sub {sub_ok}"
                    ));
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    verdict(
        generated == 100 && failures.is_empty() && slowest < Duration::from_secs(1),
        format!(
            "{generated} instances (L <= 8, d <= 8), {} failures {:?}, slowest {:.3}s",
            failures.len(),
            failures.first(),
            slowest.as_secs_f64()
        ),
    )
}

/// `(r, s, t, |A|)` settings that the corpus generator can realise.
const LEMMA_SETTINGS: [(usize, u32, u32, usize); 8] = [
    (2, 2, 3, 8),
    (2, 2, 3, 16),
    (2, 3, 4, 16),
    (2, 3, 4, 32),
    (3, 3, 4, 16),
    (3, 3, 4, 32),
    (2, 2, 4, 32),
    (2, 4, 5, 32),
];

fn lemma_corpus(count: usize, tag: u64, slack: u32) -> Vec<(BipartiteGraph, RegularizationParams)> {
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < count && i < 20 * count as u64 {
        let (r, s, t, a) = LEMMA_SETTINGS[(i % LEMMA_SETTINGS.len() as u64) as usize];
        let seed = derive_seed(tag, i);
        i += 1;
        if let Ok(g) = gen_regularization_corpus(r, s, t, a, seed, slack) {
            let p = RegularizationParams { r, s, t };
            if check_hypotheses(&g, &p).is_ok() {
                out.push((g, p));
            }
        }
    }
    out
}

fn criterion_5() -> Verdict {
    let corpus = lemma_corpus(500, 0xC5, 1);
    let mut failures = Vec::new();
    for (idx, (g, p)) in corpus.iter().enumerate() {
        let part = match degree_classes(g, p) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("#{idx}: {e}"));
                continue;
            }
        };
        // every A-vertex in exactly one class, with the right dyadic range
        let a = g.side_a();
        let listed: usize = part.classes.values().map(Vec::len).sum();
        let ranges_ok = part.classes.iter().all(|(&i, vs)| {
            vs.iter().all(|&u| {
                let d = g.degree(u) as u64;
                let upper = d <= 1u64 << i;
                let lower = if i == p.s + 1 {
                    true
                } else {
                    d > 1u64 << (i - 1)
                };
                part.alpha.get(&u) == Some(&i) && upper && lower && (p.s + 1..=p.t).contains(&i)
            })
        });
        let mut seen = std::collections::HashSet::new();
        let disjoint = part.classes.values().flatten().all(|u| seen.insert(*u));
        if listed != a.len() || !ranges_ok || !disjoint {
            failures.push(format!("#{idx}: partition incorrect"));
            continue;
        }
        let sel = match pigeonhole_beta(g, p, &part) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("#{idx}: {e}"));
                continue;
            }
        };
        let b = g.part_size(Side::B);
        let width = (p.t - p.s) as usize;
        let attains = sel.b_tilde.iter().all(|&v| {
            g.neighbors(v)
                .iter()
                .map(|u| part.alpha[u] as u64)
                .sum::<u64>()
                == sel.gamma
        });
        if sel.b_tilde.len() * width * p.r < b || !attains {
            failures.push(format!(
                "#{idx}: |B~| = {} for |B| = {b}",
                sel.b_tilde.len()
            ));
        }
    }
    verdict(
        corpus.len() == 500 && failures.is_empty(),
        format!(
            "{} instances, {} failures {:?}",
            corpus.len(),
            failures.len(),
            failures.first()
        ),
    )
}

fn criterion_6() -> Verdict {
    let corpus = lemma_corpus(100, 0xC6, 1);
    let mut accepted = 0;
    let mut audit_failures = Vec::new();
    for (idx, (g, p)) in corpus.iter().enumerate() {
        if let Ok(out) = random_regularize(g, p, derive_seed(0xC6A, idx as u64), 500) {
            accepted += 1;
            if let Err(e) = audit_outcome(g, p, &out) {
                audit_failures.push(format!("#{idx}: {e}"));
            }
        }
    }
    let rate = accepted as f64 / corpus.len().max(1) as f64;
    verdict(
        corpus.len() == 100 && rate >= 0.9 && audit_failures.is_empty(),
        format!(
            "{accepted}/{} accepted within 500 trials ({:.0}%), {} invariant failures {:?}",
            corpus.len(),
            100.0 * rate,
            audit_failures.len(),
            audit_failures.first()
        ),
    )
}

fn criterion_7() -> Verdict {
    let mut corpus = lemma_corpus(60, 0xC7, 1);
    // wider windows: an iteration round has to run before termination
    let mut i = 0u64;
    let mut wide = 0;
    while wide < 10 && i < 40 {
        let (r, s, t, a) = [(2usize, 6u32, 12u32, 160usize), (2, 7, 13, 160)][(i % 2) as usize];
        i += 1;
        if let Ok(g) = gen_regularization_corpus(r, s, t, a, derive_seed(0xC7B, i), 1) {
            let p = RegularizationParams { r, s, t };
            if check_hypotheses(&g, &p).is_ok() {
                corpus.push((g, p));
                wide += 1;
            }
        }
    }
    let (mut ok, mut with_rounds, mut violations, mut errors) = (0, 0, Vec::new(), Vec::new());
    for (idx, (g, p)) in corpus.iter().enumerate() {
        let out = match iterate_regularize(
            g,
            p,
            derive_seed(0xC7C, idx as u64),
            500,
            IterationMode::Relaxed,
        ) {
            Ok(out) => out,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        ok += 1;
        with_rounds += !out.rounds.is_empty() as usize;
        let decreasing = out.widths.windows(2).all(|w| w[1] < w[0]);
        let narrow = (out.t_star - out.s_star) as f64 <= 5.0 * (p.r as f64).log2();
        let last_matches = out.widths.last() == Some(&(out.t_star - out.s_star));
        if !(decreasing && narrow && last_matches) || audit_iteration(g, p, &out, false).is_err() {
            violations.push(format!("#{idx}: widths {:?}", out.widths));
        }
    }
    verdict(
        violations.is_empty() && ok > 0,
        format!(
            "{ok}/{} runs succeeded ({with_rounds} needed at least one round, {wide} wide-window inputs), {} monotonicity violations {:?}; first error {:?}",
            corpus.len(),
            violations.len(),
            violations.first(),
            errors.first()
        ),
    )
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let n = 1 << 16;
    let g = gen_layered(LayeredParams::new(n, 8)).unwrap();
    let b = g.side_b();
    let a = g.part_size(Side::A);
    let big_ok = g.edge_count() == 2 * n
        && b.len() == n
        && b.iter().all(|&v| g.degree(v) == 2)
        && a == n / 4 + n / 16;
    let mut small_ok = true;
    for n in [16usize, 32, 64, 128, 256] {
        let h = gen_layered(LayeredParams::new(n, 8)).unwrap();
        let res = find_k_regular_exact(h.graph(), 3, &OracleBudget::default());
        small_ok &= matches!(res, SearchResult::NotFound { .. });
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        big_ok && small_ok && secs < 5.0,
        format!(
            "n = 2^16: {} edges, |A| = {a}; single-level n <= 256 free of 3-regular subgraphs: {small_ok}; {secs:.2}s",
            g.edge_count()
        ),
    )
}

fn criterion_9() -> Verdict {
    let (n, avg) = (500usize, 40.0);
    let mut hits = 0;
    let mut invalid = 0;
    let mut slowest = Duration::ZERO;
    let mut routes = std::collections::BTreeMap::new();
    for i in 0..20u64 {
        let g = gen_gnp(n, avg / (n - 1) as f64, derive_seed(0xC9, i));
        let mut cfg = PipelineConfig::scaled(3, 3);
        cfg.budget.time_limit_ms = 60_000;
        let t = Instant::now();
        let (res, trace) = find_k_regular(&g, &cfg, i);
        let took = t.elapsed();
        slowest = slowest.max(took);
        if let Ok(w) = res {
            if check_certificate(&g, &Certificate::Witness(w)) && took < Duration::from_secs(60) {
                hits += 1;
            } else {
                invalid += 1;
            }
            let route = trace
                .stages
                .iter()
                .rev()
                .find(|s| s.stage != "witness" && (s.status == "found" || s.status == "ok"))
                .map(|s| s.stage.clone())
                .unwrap_or_default();
            *routes.entry(route).or_insert(0) += 1;
        }
    }
    verdict(
        hits >= 18 && invalid == 0,
        format!(
            "{hits}/20 verified witnesses, {invalid} invalid, routes {routes:?}, slowest {:.2}s",
            slowest.as_secs_f64()
        ),
    )
}

fn run_cli(args: &[&str], out: &Path) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_regulus"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("REGULUS_SEED")
        .output()
        .ok()?
        .status
        .code()
}

fn criterion_10() -> Verdict {
    let tmp = tempfile::TempDir::new().unwrap();
    let root = tmp.path();
    let setup: [(&str, &[&str]); 3] = [
        (
            "gnp",
            &[
                "generate", "gnp", "--n", "120", "--avg", "30", "--seed", "3",
            ],
        ),
        ("plane", &["generate", "c4free", "--q", "5"]),
        (
            "bireg",
            &[
                "generate",
                "biregular",
                "--l",
                "16",
                "--d",
                "64",
                "--size-a",
                "80",
                "--size-b",
                "160",
                "--seed",
                "5",
            ],
        ),
    ];
    for (name, args) in setup {
        if run_cli(args, &root.join(name)) != Some(0) {
            return verdict(false, format!("setup {name} failed"));
        }
    }
    let l41 = root.join("l41");
    if run_cli(
        &[
            "generate",
            "regularization-corpus",
            "--r",
            "2",
            "--s",
            "2",
            "--t",
            "3",
            "--size-a",
            "40",
            "--seed",
            "4",
        ],
        &l41,
    ) != Some(0)
    {
        return verdict(false, "setup regularization-corpus failed");
    }
    let f = |d: &str, file: &str| root.join(d).join(file).to_string_lossy().into_owned();
    let (g, plane_g, plane_s) = (
        f("gnp", "graph.el"),
        f("plane", "graph.el"),
        f("plane", "sides.json"),
    );
    let (l_g, l_s, b_g, b_s) = (
        f("l41", "graph.el"),
        f("l41", "sides.json"),
        f("bireg", "graph.el"),
        f("bireg", "sides.json"),
    );
    let witness = f("w", "witness.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["generate", "layered", "--n", "4096", "--seed", "9"],
        vec!["generate", "gnp", "--n", "50", "--p", "0.2", "--seed", "9"],
        vec![
            "generate",
            "regularization-corpus",
            "--r",
            "2",
            "--s",
            "3",
            "--t",
            "4",
            "--size-a",
            "16",
            "--seed",
            "9",
        ],
        vec![
            "generate",
            "biregular",
            "--l",
            "4",
            "--d",
            "3",
            "--size-a",
            "10",
            "--size-b",
            "20",
            "--seed",
            "9",
        ],
        vec![
            "clean-codegrees",
            "--input",
            &plane_g,
            "--sides",
            &plane_s,
            "--k",
            "2",
        ],
        vec![
            "regularize",
            "--input",
            &l_g,
            "--sides",
            &l_s,
            "--r",
            "2",
            "--s",
            "2",
            "--t",
            "3",
            "--seed",
            "2",
        ],
        vec![
            "almost-regular",
            "--input",
            &b_g,
            "--sides",
            &b_s,
            "--l",
            "16",
            "--seed",
            "1",
        ],
        vec![
            "almost-regular",
            "--input",
            &g,
            "--scaled",
            "--r",
            "2",
            "--seed",
            "1",
        ],
        vec![
            "almost-regular",
            "--input",
            &g,
            "--preset",
            "budget",
            "--scaled",
            "--seed",
            "1",
        ],
        vec![
            "find-regular",
            "--input",
            &g,
            "--k",
            "3",
            "--scaled",
            "--seed",
            "1",
        ],
        vec!["oracle", "--input", &g, "--k", "3", "--mode", "regular"],
        vec!["oracle", "--input", &g, "--k", "2", "--mode", "factor"],
        vec![
            "bench", "--n", "60,80", "--avg", "20", "--seeds", "2", "--jobs", "2", "--k", "3",
        ],
    ];
    let mut compared = 0;
    let mut diffs = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let (a, b) = (root.join(format!("r{i}a")), root.join(format!("r{i}b")));
        let (ca, cb) = (run_cli(args, &a), run_cli(args, &b));
        if ca != cb || ca.is_none() {
            diffs.push(format!("{}: exit {ca:?} vs {cb:?}", args[0]));
            continue;
        }
        let Ok(entries) = std::fs::read_dir(&a) else {
            diffs.push(format!("{}: no output", args[0]));
            continue;
        };
        let mut names: Vec<_> = entries
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.retain(|n| n != "summary.csv" && n != "manifest.json");
        if !names.iter().any(|n| n == "trace.json") {
            diffs.push(format!("{}: no trace", args[0]));
        }
        for n in names {
            compared += 1;
            if std::fs::read(a.join(&n)).ok() != std::fs::read(b.join(&n)).ok() {
                diffs.push(format!("{} {n}", args[0]));
            }
        }
    }
    // verify has no artifacts: compare its stdout and exit code
    let _ = run_cli(
        &["find-regular", "--input", &g, "--k", "3"],
        &root.join("w"),
    );
    let verify = || {
        Command::new(env!("CARGO_BIN_EXE_regulus"))
            .args(["verify", "--input", &g, "--witness", &witness])
            .output()
            .map(|o| (o.status.code(), o.stdout))
            .ok()
    };
    if verify() != verify() {
        diffs.push("verify".into());
    }
    verdict(
        diffs.is_empty(),
        format!(
            "{} runs, {compared} artifacts byte-identical, differences {diffs:?}",
            runs.len() + 1
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "oracle cross-validation", criterion_1),
        (2, "k-factor gadget", criterion_2),
        (3, "codegree cleaning contract", criterion_3),
        (4, "almost-biregular thinning contract", criterion_4),
        (5, "degree classes and pigeonhole", criterion_5),
        (6, "randomized regularization contract", criterion_6),
        (7, "iteration monotonicity", criterion_7),
        (8, "layered lower-bound generator", criterion_8),
        (9, "end-to-end driver", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status} {name}: {} [{:.2}s]",
            v.detail,
            t.elapsed().as_secs_f64()
        );
        if !v.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
