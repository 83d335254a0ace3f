use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use regulus::almostreg::almost_bireg_to_almost_reg;
use regulus::cleanup::codegree_clean;
use regulus::generators::{
    gen_almost_biregular, gen_c4free_bipartite, gen_c4free_random, gen_gnp, gen_layered,
    gen_regularization_corpus, LayeredParams,
};
use regulus::graph::io::{load_sides, read_edge_list, write_edge_list};
use regulus::graph::{BipartiteGraph, Graph, Side, SubgraphWitness};
use regulus::oracle::{
    check_certificate, check_witness, find_k_regular_exact, find_kkk, k_factor,
    BiregularCertificate, Certificate, OracleBudget,
};
use regulus::pipeline::{
    budget_preset, find_k_regular, general_main, sparse_preset, PipelineConfig, PipelineError,
    PipelineTrace,
};
use regulus::regularize::{
    iterate_regularize, random_regularize, IterationMode, RegularizationParams,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{build_config, ConfigFile};
use crate::output::{OutputDir, Summary};
use crate::{Cli, Command, GenKind, OracleMode, Preset};

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    args: Vec<String>,
    seed: u64,
    config: Option<&'a PipelineConfig>,
    outputs: &'a [String],
}

struct Run {
    name: &'static str,
    seed: u64,
    out: OutputDir,
    start: Instant,
}

impl Run {
    fn finish(
        mut self,
        mut summary: Summary,
        trace: &PipelineTrace,
        cfg: Option<&PipelineConfig>,
        code: i32,
    ) -> Result<i32> {
        summary.exit_code = code;
        summary.outcome = trace.outcome.clone();
        summary.elapsed_ms = self.start.elapsed().as_millis();
        self.out.write("trace.json", &trace.to_json())?;
        self.out.write_csv("summary.csv", &[summary])?;
        let mut outputs = self.out.written.clone();
        outputs.push("manifest.json".into());
        let manifest = Manifest {
            subcommand: self.name,
            args: std::env::args().skip(1).collect(),
            seed: self.seed,
            config: cfg,
            outputs: &outputs,
        };
        self.out.write_json("manifest.json", &manifest)?;
        Ok(code)
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_edge_list(std::io::BufReader::new(f))
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_bipartite(input: &Path, sides: &Path) -> Result<BipartiteGraph> {
    let g = load_graph(input)?;
    let text =
        std::fs::read_to_string(sides).with_context(|| format!("reading {}", sides.display()))?;
    let s = load_sides(&text).with_context(|| format!("parsing {}", sides.display()))?;
    BipartiteGraph::new(g, &s).context("graph does not fit the given sides")
}

fn write_bipartite(out: &mut OutputDir, graph_name: &str, g: &BipartiteGraph) -> Result<()> {
    out.write(graph_name, &write_edge_list(g.graph()))?;
    out.write_json("sides.json", &g.sides())
}

pub fn run(cli: &Cli) -> Result<i32> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    let name = match &cli.command {
        Command::Generate { .. } => "generate",
        Command::CleanCodegrees { .. } => "clean-codegrees",
        Command::Regularize { .. } => "regularize",
        Command::AlmostRegular { .. } => "almost-regular",
        Command::FindRegular { .. } => "find-regular",
        Command::Oracle { .. } => "oracle",
        Command::Verify { .. } => "verify",
        Command::Bench { .. } => "bench",
    };
    if let Command::Verify {
        input,
        witness,
        certificate,
    } = &cli.command
    {
        return verify(input, witness.as_deref(), certificate.as_deref());
    }
    let out = OutputDir::new(&cli.out_dir, cli.force)?;
    out.reserve(&["trace.json", "summary.csv", "manifest.json"])?;
    let run = Run {
        name,
        seed,
        out,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Generate { kind } => generate(run, kind),
        Command::CleanCodegrees { input, sides, k, m } => clean(run, input, sides, *k, *m),
        Command::Regularize {
            input,
            sides,
            r,
            s,
            t,
            single,
            strict,
            r_floor,
            max_trials,
        } => {
            let p = RegularizationParams {
                r: *r,
                s: *s,
                t: *t,
            };
            let mode = if *strict {
                IterationMode::Strict { r_floor: *r_floor }
            } else {
                IterationMode::Relaxed
            };
            regularize(run, input, sides, p, *single, mode, *max_trials)
        }
        Command::AlmostRegular {
            input,
            sides,
            l,
            preset,
            m0,
            t,
            pipeline,
        } => {
            let cfg = build_config(&file, pipeline, 3)?;
            almost_regular(run, input, sides.as_deref(), *l, *preset, *m0, *t, &cfg)
        }
        Command::FindRegular { input, pipeline } => {
            let cfg = build_config(&file, pipeline, 3)?;
            find_regular(run, input, &cfg)
        }
        Command::Oracle {
            input,
            k,
            mode,
            max_subsets,
            time_limit_ms,
        } => {
            let mut budget = OracleBudget::default();
            if let Some(v) = max_subsets.or(file.max_subsets) {
                budget.max_subsets = v;
            }
            if let Some(v) = time_limit_ms.or(file.time_limit_ms) {
                budget.time_limit_ms = v;
            }
            oracle(run, input, *k, *mode, &budget)
        }
        Command::Bench {
            n,
            avg,
            seeds,
            jobs,
            pipeline,
        } => {
            let cfg = build_config(&file, pipeline, 3)?;
            bench(run, n, *avg, *seeds, *jobs, &cfg)
        }
        Command::Verify { .. } => unreachable!(),
    }
}

fn generate(mut run: Run, kind: &GenKind) -> Result<i32> {
    let seed = run.seed;
    let mut trace = PipelineTrace::new("generate", seed, None);
    let (g, bip, params) = match kind {
        GenKind::Layered { n } => {
            let bg = gen_layered(LayeredParams::new(*n, seed))?;
            let p = LayeredParams::new(*n, seed);
            (
                bg.graph().clone(),
                Some(bg),
                json!({ "generator": "layered", "n": n, "levels": p.j_range() }),
            )
        }
        GenKind::RegularizationCorpus {
            r,
            s,
            t,
            size_a,
            slack,
        } => {
            let bg = gen_regularization_corpus(*r, *s, *t, *size_a, seed, *slack)?;
            let params = json!({ "generator": "regularization-corpus", "r": r, "s": s, "t": t, "size_a": size_a, "slack": slack });
            (bg.graph().clone(), Some(bg), params)
        }
        GenKind::C4free {
            q,
            size_a,
            size_b,
            edges,
        } => match (q, size_a, size_b, edges) {
            (Some(q), None, None, None) => {
                let bg = gen_c4free_bipartite(*q)?;
                (
                    bg.graph().clone(),
                    Some(bg),
                    json!({ "generator": "c4free_plane", "q": q }),
                )
            }
            (None, Some(a), Some(b), Some(e)) => {
                let bg = gen_c4free_random(*a, *b, *e, seed);
                let params = json!({ "generator": "c4free_random", "size_a": a, "size_b": b, "target_edges": e });
                (bg.graph().clone(), Some(bg), params)
            }
            _ => bail!("c4free needs either --q or all of --size-a, --size-b, --edges"),
        },
        GenKind::Gnp { n, p, avg } => {
            let prob = match (p, avg) {
                (Some(p), _) => *p,
                (None, Some(d)) => d / (*n as f64 - 1.0).max(1.0),
                (None, None) => unreachable!("clap requires one of --p, --avg"),
            };
            (
                gen_gnp(*n, prob, seed),
                None,
                json!({ "generator": "gnp", "n": n, "p": prob }),
            )
        }
        GenKind::Biregular {
            l,
            d,
            size_a,
            size_b,
        } => {
            let (bg, cert) = gen_almost_biregular(*l, *d, *size_a, *size_b, seed)?;
            run.out.reserve(&["certificate.json"])?;
            run.out
                .write_json("certificate.json", &Certificate::Biregular(cert))?;
            let params = json!({ "generator": "biregular", "L": l, "d": d, "size_a": size_a, "size_b": size_b });
            (bg.graph().clone(), Some(bg), params)
        }
    };
    run.out.reserve(&["graph.el", "sides.json"])?;
    match &bip {
        Some(bg) => write_bipartite(&mut run.out, "graph.el", bg)?,
        None => run.out.write("graph.el", &write_edge_list(&g))?,
    }
    let stats = g.degree_stats();
    trace.push(
        "generate",
        "ok",
        json!({
            "params": params,
            "n": g.vertex_count(),
            "edges": g.edge_count(),
            "max_degree": stats.max_degree,
            "min_degree": stats.min_degree,
            "side_sizes": bip.as_ref().map(|b| [b.part_size(Side::A), b.part_size(Side::B)]),
        }),
    );
    trace.outcome = "ok".into();
    let summary = Summary::new(run.name, &g, None, seed);
    run.finish(summary, &trace, None, 0)
}

fn clean(mut run: Run, input: &Path, sides: &Path, k: usize, m: Option<usize>) -> Result<i32> {
    let bg = load_bipartite(input, sides)?;
    let mut trace = PipelineTrace::new("clean_codegrees", run.seed, None);
    let m = m.unwrap_or_else(|| {
        bg.side_a()
            .iter()
            .map(|&u| bg.degree(u))
            .max()
            .unwrap_or(0)
            .max(1)
    });
    let summary = Summary::new(run.name, bg.graph(), Some(k), run.seed);
    let code = match codegree_clean(&bg, k, m) {
        Ok((out, report)) => {
            run.out.reserve(&["subgraph.el", "sides.json"])?;
            write_bipartite(&mut run.out, "subgraph.el", &out)?;
            trace.push(
                "codegree_clean",
                if report.retention_ok {
                    "ok"
                } else {
                    "retention_failed"
                },
                json!({ "m": m, "report": report }),
            );
            trace.outcome = "ok".into();
            0
        }
        Err(e) => {
            trace.push(
                "codegree_clean",
                "violated",
                json!({ "m": m, "message": e.to_string() }),
            );
            trace.outcome = "hypothesis_violated".into();
            3
        }
    };
    run.finish(summary, &trace, None, code)
}

fn regularize(
    mut run: Run,
    input: &Path,
    sides: &Path,
    p: RegularizationParams,
    single: bool,
    mode: IterationMode,
    max_trials: u32,
) -> Result<i32> {
    use regulus::regularize::RegularizeError as E;
    let bg = load_bipartite(input, sides)?;
    let mut trace = PipelineTrace::new("regularize", run.seed, None);
    trace.push(
        "params",
        "ok",
        json!({ "params": p, "single": single, "mode": mode, "max_trials": max_trials }),
    );
    let summary = Summary::new(run.name, bg.graph(), None, run.seed);
    let result = if single {
        random_regularize(&bg, &p, run.seed, max_trials).map(|o| {
            trace.push("random_regularize", "ok", &o);
            o.subgraph
        })
    } else {
        iterate_regularize(&bg, &p, run.seed, max_trials, mode).map(|o| {
            trace.push("iterate_regularize", "ok", &o);
            o.subgraph
        })
    };
    let code = match result {
        Ok(sub) => {
            run.out.reserve(&["subgraph.el", "sides.json"])?;
            write_bipartite(&mut run.out, "subgraph.el", &sub)?;
            trace.outcome = "ok".into();
            0
        }
        Err(e) => {
            let (label, code) = match &e {
                E::HypothesisViolated { .. }
                | E::DegreeCapViolated { .. }
                | E::NotRRegular { .. } => ("hypothesis_violated", 3),
                E::TrialsExhausted { .. } | E::NoProgress { .. } => ("failed", 2),
            };
            let data = match &e {
                E::TrialsExhausted {
                    trial_stats,
                    rounds,
                    ..
                } => {
                    json!({ "message": e.to_string(), "trial_stats": trial_stats, "rounds": rounds })
                }
                E::NoProgress { rounds, .. } => {
                    json!({ "message": e.to_string(), "rounds": rounds })
                }
                _ => json!({ "message": e.to_string() }),
            };
            trace.push("error", label, data);
            trace.outcome = label.into();
            code
        }
    };
    run.finish(summary, &trace, None, code)
}

#[allow(clippy::too_many_arguments)]
fn almost_regular(
    mut run: Run,
    input: &Path,
    sides: Option<&Path>,
    l: Option<f64>,
    preset: Option<Preset>,
    m0: usize,
    t: Option<usize>,
    cfg: &PipelineConfig,
) -> Result<i32> {
    let seed = run.seed;
    let (result, trace, host) = if let Some(sides) = sides {
        let bg = load_bipartite(input, sides)?;
        let Some(l) = l else {
            bail!("--sides requires --l")
        };
        let delta = bg.side_b().first().map(|&v| bg.degree(v)).unwrap_or(0);
        let mut trace = PipelineTrace::new("almost_bireg_to_almost_reg", seed, Some(cfg));
        let cert = BiregularCertificate::measure(&bg, l, delta);
        let res = almost_bireg_to_almost_reg(&bg, &cert, seed, cfg.thinning_trials)
            .map(|(g, c, report)| {
                trace.push("almost_bireg_to_almost_reg", "ok", &report);
                (g, c)
            })
            .map_err(|e| match e {
                regulus::almostreg::AlmostRegError::PreconditionViolated { stage, detail } => {
                    PipelineError::HypothesisViolated { stage, detail }
                }
                other => PipelineError::Failed {
                    stage: "almost_bireg_to_almost_reg".into(),
                    detail: other.to_string(),
                },
            });
        match &res {
            Ok(_) => trace.outcome = "ok".into(),
            Err(e) => {
                trace.push("error", e.label(), json!({ "message": e.to_string() }));
                trace.outcome = e.label().into();
            }
        }
        (res, trace, bg.into_graph())
    } else {
        let g = load_graph(input)?;
        let (res, trace) = match preset {
            Some(Preset::Sparse) => {
                let (res, _, trace) = sparse_preset(&g, m0, seed, cfg);
                (res, trace)
            }
            Some(Preset::Budget) => {
                let (res, _, trace) = budget_preset(&g, t, seed, cfg);
                (res, trace)
            }
            None => general_main(&g, cfg, seed),
        };
        (res, trace, g)
    };
    let summary = Summary::new(run.name, &host, Some(cfg.k), seed);
    let code = match &result {
        Ok((sub, cert)) => {
            run.out.reserve(&["subgraph.el", "certificate.json"])?;
            run.out.write("subgraph.el", &write_edge_list(sub))?;
            run.out.write_json(
                "certificate.json",
                &Certificate::AlmostRegular(cert.clone()),
            )?;
            0
        }
        Err(e) => e.exit_code(),
    };
    run.finish(summary, &trace, Some(cfg), code)
}

fn find_regular(mut run: Run, input: &Path, cfg: &PipelineConfig) -> Result<i32> {
    let g = load_graph(input)?;
    let (res, trace) = find_k_regular(&g, cfg, run.seed);
    let summary = Summary::new(run.name, &g, Some(cfg.k), run.seed);
    let code = match &res {
        Ok(w) => {
            run.out.reserve(&["witness.json"])?;
            run.out.write_json("witness.json", w)?;
            0
        }
        Err(e) => e.exit_code(),
    };
    run.finish(summary, &trace, Some(cfg), code)
}

fn oracle(
    mut run: Run,
    input: &Path,
    k: usize,
    mode: OracleMode,
    budget: &OracleBudget,
) -> Result<i32> {
    if k == 0 {
        bail!("--k must be positive");
    }
    let g = load_graph(input)?;
    let mut trace = PipelineTrace::new("oracle", run.seed, None);
    let witness = match mode {
        OracleMode::Regular | OracleMode::Kkk => {
            let res = match mode {
                OracleMode::Regular => find_k_regular_exact(&g, k, budget),
                _ => find_kkk(&g, k, budget),
            };
            trace.push(
                match mode {
                    OracleMode::Regular => "find_k_regular_exact",
                    _ => "find_kkk",
                },
                res.label(),
                json!({ "k": k, "budget": budget, "stats": res.stats() }),
            );
            trace.outcome = res.label().into();
            res.into_witness()
        }
        OracleMode::Factor => {
            let all: Vec<usize> = (0..g.vertex_count()).collect();
            let mask = vec![true; g.vertex_count()];
            let f = if all.is_empty() {
                None
            } else {
                k_factor(&g, &mask, k)
            };
            trace.push(
                "k_factor",
                if f.is_some() { "found" } else { "not_found" },
                json!({ "k": k }),
            );
            trace.outcome = if f.is_some() { "found" } else { "not_found" }.into();
            f.map(|edges| SubgraphWitness::from_edges(edges, Some(k)))
        }
    };
    let summary = Summary::new(run.name, &g, Some(k), run.seed);
    let code = match witness {
        Some(w) => {
            assert!(check_witness(&g, &w));
            run.out.reserve(&["witness.json"])?;
            run.out.write_json("witness.json", &w)?;
            0
        }
        None => 2,
    };
    run.finish(summary, &trace, None, code)
}

fn verify(input: &Path, witness: Option<&Path>, certificate: Option<&Path>) -> Result<i32> {
    let g = load_graph(input)?;
    let (kind, ok) = match (witness, certificate) {
        (Some(p), _) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let w: SubgraphWitness =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            ("witness", check_witness(&g, &w))
        }
        (None, Some(p)) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let c: Certificate =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            ("certificate", check_certificate(&g, &c))
        }
        (None, None) => bail!("pass --witness or --certificate"),
    };
    println!("{}", json!({ "kind": kind, "valid": ok }));
    Ok(if ok { 0 } else { 2 })
}

#[derive(Debug, Clone, Serialize)]
struct BenchRow {
    n: usize,
    seed: u64,
    edges: usize,
    max_degree: usize,
    outcome: String,
    witness_vertices: Option<usize>,
    last_stage: String,
    elapsed_ms: u128,
}

fn bench(
    mut run: Run,
    ns: &[usize],
    avg: f64,
    seeds: u64,
    jobs: usize,
    cfg: &PipelineConfig,
) -> Result<i32> {
    let tasks: Vec<(usize, u64)> = ns
        .iter()
        .flat_map(|&n| (0..seeds).map(move |s| (n, s)))
        .collect();
    let rows: Vec<Mutex<Option<BenchRow>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let base_seed = run.seed;
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, s)) = tasks.get(i) else { break };
                let seed = regulus::rng::derive_seed(base_seed, s);
                let g = gen_gnp(n, avg / (n as f64 - 1.0).max(1.0), seed);
                let start = Instant::now();
                let (res, trace) = find_k_regular(&g, cfg, seed);
                let row = BenchRow {
                    n,
                    seed,
                    edges: g.edge_count(),
                    max_degree: g.max_degree(),
                    outcome: trace.outcome.clone(),
                    witness_vertices: res.as_ref().ok().map(|w| w.vertices.len()),
                    last_stage: trace
                        .stages
                        .last()
                        .map(|s| s.stage.clone())
                        .unwrap_or_default(),
                    elapsed_ms: start.elapsed().as_millis(),
                };
                *rows[i].lock().unwrap() = Some(row);
            });
        }
    });
    let rows: Vec<BenchRow> = rows
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every task ran"))
        .collect();
    run.out.reserve(&["bench.csv"])?;
    run.out.write_csv("bench.csv", &rows)?;
    let found = rows.iter().filter(|r| r.witness_vertices.is_some()).count();
    let mut trace = PipelineTrace::new("bench", run.seed, Some(cfg));
    let outcomes: Vec<_> = rows
        .iter()
        .map(|r| json!({ "n": r.n, "seed": r.seed, "outcome": r.outcome }))
        .collect();
    trace.push(
        "bench",
        "ok",
        json!({ "runs": rows.len(), "found": found, "avg": avg, "results": outcomes }),
    );
    trace.outcome = "ok".into();
    let empty = Graph::empty(0);
    let summary = Summary::new(run.name, &empty, Some(cfg.k), run.seed);
    run.finish(summary, &trace, Some(cfg), 0)
}
