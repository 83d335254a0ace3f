//! Randomized regularization of a bipartite graph whose B-side is
//! `r`-regular: dyadic degree classes on A, a pigeonhole over the class sums
//! seen from B, one randomized sparsification round, and its iteration until
//! the degree window `t - s` is at most `5 log2 r`.
//!
//! Powers of two are carried as exponents; every threshold and acceptance
//! test goes through [`Dyadic`] comparisons.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{ceil_log2, ceil_log2_ratio, cmp_log2, floor_log2_ratio, Dyadic};
use crate::graph::{BipartiteGraph, Side, Vertex};
use crate::rng::{derive_seed, stream_rng};

pub const DEFAULT_MAX_TRIALS: u32 = 500;

/// The `(r, s, t)` triple: B-degree `r`, edge density `2^s`, A-degree cap `2^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularizationParams {
    pub r: usize,
    pub s: u32,
    pub t: u32,
}

impl RegularizationParams {
    pub fn width(&self) -> u32 {
        self.t - self.s
    }

    /// `rs - (r-1)t`: exponent of the single-round codegree cap.
    pub fn round_codegree_exp(&self) -> i64 {
        let (r, s, t) = (self.r as i64, self.s as i64, self.t as i64);
        r * s - (r - 1) * t
    }

    /// `2rs - (2r-1)t`: exponent of the iterated codegree cap.
    pub fn iterated_codegree_exp(&self) -> i64 {
        let (r, s, t) = (self.r as i64, self.s as i64, self.t as i64);
        2 * r * s - (2 * r - 1) * t
    }

    /// Whether `t - s <= 5 log2 r`, i.e. `2^(t-s) <= r^5`.
    pub fn window_is_narrow(&self) -> bool {
        let r5 = match (self.r as u128).checked_pow(5) {
            Some(x) => x,
            None => return true,
        };
        Dyadic::pow2(self.width() as i64) <= Dyadic::int(r5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Params,
    BDegree,
    ADegree,
    Codegree,
    EdgeCount,
    RFloor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStat {
    pub x: u64,
    pub y: u64,
    pub a_prime: usize,
    pub b_prime: usize,
    pub accepted: bool,
}

/// One completed round of the iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub s: u32,
    pub t: u32,
    pub gamma: u64,
    pub trials: u32,
    pub a_size: usize,
    pub b_size: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RegularizeError {
    #[error("hypothesis violated ({clause:?}): {detail}")]
    HypothesisViolated { clause: Clause, detail: String },
    #[error("vertex {vertex} has degree {degree} > 2^{cap_exp}")]
    DegreeCapViolated {
        vertex: Vertex,
        degree: usize,
        cap_exp: u32,
    },
    #[error("side-B vertex {vertex} has degree {degree}, expected {r}")]
    NotRRegular {
        vertex: Vertex,
        degree: usize,
        r: usize,
    },
    #[error("no accepting sample in {trials} trials")]
    TrialsExhausted {
        trials: u32,
        trial_stats: Vec<TrialStat>,
        rounds: Vec<RoundRecord>,
    },
    #[error("round {round}: window t-s went from {before} to {after}")]
    NoProgress {
        round: usize,
        before: i64,
        after: i64,
        rounds: Vec<RoundRecord>,
    },
}

fn violated(clause: Clause, detail: impl Into<String>) -> RegularizeError {
    RegularizeError::HypothesisViolated {
        clause,
        detail: detail.into(),
    }
}

/// Checks the single-round hypotheses: B-degrees `r`, A-degrees `<= 2^t`,
/// codegrees on A `<= 2^(rs-(r-1)t)`, and `e >= 2^s |A|`.
pub fn check_hypotheses(
    g: &BipartiteGraph,
    p: &RegularizationParams,
) -> Result<(), RegularizeError> {
    check_with_codegree(g, p, p.round_codegree_exp())
}

/// As [`check_hypotheses`] with the stricter cap `2^(2rs-(2r-1)t)` required
/// by the iteration.
pub fn check_iterated_hypotheses(
    g: &BipartiteGraph,
    p: &RegularizationParams,
) -> Result<(), RegularizeError> {
    check_with_codegree(g, p, p.iterated_codegree_exp())
}

pub(crate) fn check_with_codegree(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    codegree_exp: i64,
) -> Result<(), RegularizeError> {
    if p.r == 0 || p.s == 0 || p.s >= p.t {
        return Err(violated(
            Clause::Params,
            format!("need r, s >= 1 and s < t (r={}, s={}, t={})", p.r, p.s, p.t),
        ));
    }
    let a = g.side_a();
    if a.is_empty() {
        return Err(violated(Clause::Params, "side A is empty"));
    }
    for v in g.side_b() {
        if g.degree(v) != p.r {
            return Err(violated(
                Clause::BDegree,
                format!("vertex {v} has degree {} != r = {}", g.degree(v), p.r),
            ));
        }
    }
    for &u in &a {
        if Dyadic::int(g.degree(u) as u128) > Dyadic::pow2(p.t as i64) {
            return Err(violated(
                Clause::ADegree,
                format!("vertex {u} has degree {} > 2^{}", g.degree(u), p.t),
            ));
        }
    }
    if Dyadic::int(g.edge_count() as u128) < Dyadic::new(a.len() as u128, p.s as i64) {
        return Err(violated(
            Clause::EdgeCount,
            format!("e = {} < 2^{} * {}", g.edge_count(), p.s, a.len()),
        ));
    }
    let codeg = g.max_codegree(Side::A);
    if Dyadic::int(codeg as u128) > Dyadic::pow2(codegree_exp) {
        return Err(violated(
            Clause::Codegree,
            format!("max codegree {codeg} > 2^{codegree_exp}"),
        ));
    }
    Ok(())
}

/// Dyadic classes of side A: `α(u) = s+1` if `d(u) <= 2^(s+1)`, else the
/// unique `i` with `2^(i-1) < d(u) <= 2^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeClassPartition {
    pub classes: BTreeMap<u32, Vec<Vertex>>,
    pub alpha: BTreeMap<Vertex, u32>,
}

impl DegreeClassPartition {
    pub fn class_sizes(&self) -> BTreeMap<u32, usize> {
        self.classes.iter().map(|(&i, v)| (i, v.len())).collect()
    }
}

pub fn degree_classes(
    g: &BipartiteGraph,
    p: &RegularizationParams,
) -> Result<DegreeClassPartition, RegularizeError> {
    let mut classes: BTreeMap<u32, Vec<Vertex>> =
        (p.s + 1..=p.t).map(|i| (i, Vec::new())).collect();
    let mut alpha = BTreeMap::new();
    for u in g.side_a() {
        let d = g.degree(u);
        let c = ceil_log2(d as u128);
        if c > p.t as i64 {
            return Err(RegularizeError::DegreeCapViolated {
                vertex: u,
                degree: d,
                cap_exp: p.t,
            });
        }
        let i = (c as u32).max(p.s + 1);
        classes.entry(i).or_default().push(u);
        alpha.insert(u, i);
    }
    Ok(DegreeClassPartition { classes, alpha })
}

/// `β(v)` for every B-vertex, the most frequent value `γ` (smallest on
/// ties) and the B-vertices attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PigeonholeSelection {
    pub gamma: u64,
    pub b_tilde: Vec<Vertex>,
    pub beta: BTreeMap<Vertex, u64>,
}

impl PigeonholeSelection {
    pub fn histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for &b in self.beta.values() {
            *h.entry(b).or_insert(0) += 1;
        }
        h
    }
}

pub fn pigeonhole_beta(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    part: &DegreeClassPartition,
) -> Result<PigeonholeSelection, RegularizeError> {
    let mut beta = BTreeMap::new();
    for v in g.side_b() {
        if g.degree(v) != p.r {
            return Err(RegularizeError::NotRRegular {
                vertex: v,
                degree: g.degree(v),
                r: p.r,
            });
        }
        let b: u64 = g.neighbors(v).iter().map(|u| part.alpha[u] as u64).sum();
        beta.insert(v, b);
    }
    let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
    for &b in beta.values() {
        *hist.entry(b).or_insert(0) += 1;
    }
    let best = hist.values().copied().max().unwrap_or(0);
    let gamma = hist
        .iter()
        .find(|&(_, &c)| c == best)
        .map(|(&b, _)| b)
        .unwrap_or((p.s as u64 + 1) * p.r as u64);
    let b_tilde = beta
        .iter()
        .filter(|&(_, &b)| b == gamma)
        .map(|(&v, _)| v)
        .collect();
    Ok(PigeonholeSelection {
        gamma,
        b_tilde,
        beta,
    })
}

/// Keeps with probability exactly `2^-bits`: `bits` fair coin flips, all zero.
/// Always consumes `ceil(bits/64)` words so the stream position does not
/// depend on the outcome.
pub fn dyadic_keep<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> bool {
    let mut keep = true;
    let mut left = bits;
    while left > 0 {
        let take = left.min(64);
        let word: u64 = rng.gen();
        let mask = if take == 64 {
            u64::MAX
        } else {
            (1u64 << take) - 1
        };
        if word & mask != 0 {
            keep = false;
        }
        left -= take;
    }
    keep
}

/// Exact acceptance test `X - rY > |A'| 2^g / (10 (t-s) r)`.
pub fn round_accepts(x: u64, y: u64, a_prime: usize, r: usize, width: u32, g: i64) -> bool {
    let surplus = x as i128 - r as i128 * y as i128;
    if surplus <= 0 {
        return false;
    }
    let lhs = Dyadic::int(surplus as u128).scale(10 * width as u128 * r as u128);
    match lhs {
        Some(lhs) => lhs > Dyadic::new(a_prime as u128, g),
        None => true,
    }
}

/// Log-space form of [`round_accepts`]; agrees with it away from exact ties.
pub fn round_accepts_log(x: u64, y: u64, a_prime: usize, r: usize, width: u32, g: i64) -> bool {
    let surplus = x as f64 - r as f64 * y as f64;
    if surplus <= 0.0 {
        return false;
    }
    if a_prime == 0 {
        return true;
    }
    let lhs = surplus.log2() + (10.0 * width as f64 * r as f64).log2();
    let rhs = (a_prime as f64).log2() + g as f64;
    lhs > rhs
}

/// Result of one accepted round: `G' = G[A'' ∪ B'']` with `N(v) ⊆ A''` for
/// every `v ∈ B''`.
#[derive(Debug, Clone, Serialize)]
pub struct RegularizationOutcome {
    pub a2: Vec<Vertex>,
    pub b2: Vec<Vertex>,
    pub edges: usize,
    pub d_prime: f64,
    pub gamma_used: u64,
    pub trials: u32,
    pub trial_stats: Vec<TrialStat>,
    #[serde(skip)]
    pub subgraph: BipartiteGraph,
}

impl RegularizationOutcome {
    /// `d' = e(G') / |A''|` as an exact pair.
    pub fn d_prime_ratio(&self) -> (u128, u128) {
        (self.edges as u128, self.a2.len() as u128)
    }
}

/// Recomputes every outcome invariant from `g` and the returned vertex
/// sets: closure, B-degrees, the density floor
/// `d' >= 2^(rs-(r-1)t) / (10 (t-s) r)` and the degree cap
/// `d_{G'}(u) <= 40 (t-s) r^2 d'`.
pub fn audit_outcome(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    o: &RegularizationOutcome,
) -> Result<(), String> {
    let n = g.graph().vertex_count();
    let mut in_a2 = vec![false; n];
    let mut keep = vec![false; n];
    if o.a2.is_empty() {
        return Err("A'' is empty".into());
    }
    for &u in &o.a2 {
        if g.side(u) != Some(Side::A) {
            return Err(format!("{u} is not on side A"));
        }
        in_a2[u] = true;
        keep[u] = true;
    }
    for &v in &o.b2 {
        if g.side(v) != Some(Side::B) {
            return Err(format!("{v} is not on side B"));
        }
        if g.degree(v) != p.r {
            return Err(format!("B-vertex {v} has degree {}", g.degree(v)));
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| !in_a2[u]) {
            return Err(format!("neighbour {u} of {v} lies outside A''"));
        }
        keep[v] = true;
    }
    let sub = g.restrict(&keep);
    let e = sub.edge_count();
    if e != o.edges {
        return Err(format!("edge count {e} != claimed {}", o.edges));
    }
    let w = p.width() as u128;
    let r = p.r as u128;
    // e / |A''| >= 2^c / (10 w r)
    if Dyadic::int(e as u128 * 10 * w * r) < Dyadic::new(o.a2.len() as u128, p.round_codegree_exp())
    {
        return Err(format!("d' = {e}/{} below the density floor", o.a2.len()));
    }
    for &u in &o.a2 {
        if sub.degree(u) as u128 * o.a2.len() as u128 > 40 * w * r * r * e as u128 {
            return Err(format!(
                "A''-vertex {u} has degree {} above 40(t-s)r^2 d'",
                sub.degree(u)
            ));
        }
    }
    Ok(())
}

/// One randomized regularization round. Trials draw from independent
/// streams of `seed`; the lowest accepting trial index wins.
pub fn random_regularize(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    seed: u64,
    max_trials: u32,
) -> Result<RegularizationOutcome, RegularizeError> {
    check_hypotheses(g, p)?;
    let part = degree_classes(g, p)?;
    let sel = pigeonhole_beta(g, p, &part)?;
    let n = g.graph().vertex_count();
    let a_side = g.side_a();
    let r = p.r;
    let gexp = sel.gamma as i64 - (r as i64 - 1) * p.t as i64;
    let cap = Dyadic::new(4 * r as u128, gexp);
    let mut stats = Vec::new();

    for trial in 0..max_trials {
        let mut rng = stream_rng(seed, trial as u64);
        let mut in_a1 = vec![false; n];
        let mut a1_count = 0;
        for &u in &a_side {
            if dyadic_keep(&mut rng, p.t - part.alpha[&u]) {
                in_a1[u] = true;
                a1_count += 1;
            }
        }
        let b1: Vec<Vertex> = sel
            .b_tilde
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().all(|&u| in_a1[u]))
            .collect();
        let mut cnt = vec![0u64; n];
        for &v in &b1 {
            for &u in g.neighbors(v) {
                cnt[u] += 1;
            }
        }
        let x = (r * b1.len()) as u64;
        let y: u64 = a_side
            .iter()
            .filter(|&&u| in_a1[u] && Dyadic::int(cnt[u] as u128) >= cap)
            .map(|&u| cnt[u])
            .sum();
        let accepted = round_accepts(x, y, a1_count, r, p.width(), gexp);
        stats.push(TrialStat {
            x,
            y,
            a_prime: a1_count,
            b_prime: b1.len(),
            accepted,
        });
        if !accepted {
            continue;
        }
        let mut keep = vec![false; n];
        let a2: Vec<Vertex> = a_side
            .iter()
            .copied()
            .filter(|&u| in_a1[u] && Dyadic::int(cnt[u] as u128) <= cap)
            .collect();
        a2.iter().for_each(|&u| keep[u] = true);
        let b2: Vec<Vertex> = b1
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().all(|&u| keep[u]))
            .collect();
        b2.iter().for_each(|&v| keep[v] = true);
        let subgraph = g.restrict(&keep);
        let edges = subgraph.edge_count();
        assert!(
            edges as i128 >= x as i128 - r as i128 * y as i128,
            "deletion accounting e(G') >= X - rY failed"
        );
        let outcome = RegularizationOutcome {
            d_prime: edges as f64 / a2.len() as f64,
            a2,
            b2,
            edges,
            gamma_used: sel.gamma,
            trials: trial + 1,
            trial_stats: stats,
            subgraph,
        };
        debug_assert_eq!(audit_outcome(g, p, &outcome), Ok(()));
        return Ok(outcome);
    }
    Err(RegularizeError::TrialsExhausted {
        trials: max_trials,
        trial_stats: stats,
        rounds: Vec::new(),
    })
}

/// Which hypotheses [`iterate_regularize`] enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationMode {
    /// Iterated codegree cap each round and `r >= r_floor`.
    Strict { r_floor: usize },
    /// Only the single-round hypotheses, checked inside every round.
    Relaxed,
}

/// Final state of the iteration: `G* = G[A* ∪ B*]` with `d* >= 2^{s*}`,
/// A-degrees `<= 2^{t*}` and `t* - s* <= 5 log2 r`.
#[derive(Debug, Clone, Serialize)]
pub struct IterationOutcome {
    pub s_star: u32,
    pub t_star: u32,
    pub a_star: Vec<Vertex>,
    pub b_star: Vec<Vertex>,
    pub edges: usize,
    pub d_star: f64,
    /// `t - s` before each round and at the end.
    pub widths: Vec<u32>,
    pub rounds: Vec<RoundRecord>,
    #[serde(skip)]
    pub subgraph: BipartiteGraph,
}

/// Rechecks an iteration outcome against the original input.
pub fn audit_iteration(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    o: &IterationOutcome,
    strict: bool,
) -> Result<(), String> {
    let star = RegularizationParams {
        r: p.r,
        s: o.s_star,
        t: o.t_star,
    };
    if o.s_star >= o.t_star || !star.window_is_narrow() {
        return Err(format!(
            "final window ({}, {}) is not narrow",
            o.s_star, o.t_star
        ));
    }
    if o.widths.windows(2).any(|w| w[1] >= w[0]) {
        return Err(format!("widths not strictly decreasing: {:?}", o.widths));
    }
    if strict && (o.s_star as i64) < p.iterated_codegree_exp() {
        return Err("s* below 2rs - (2r-1)t".into());
    }
    let n = g.graph().vertex_count();
    let mut keep = vec![false; n];
    let mut in_a = vec![false; n];
    for &u in &o.a_star {
        keep[u] = true;
        in_a[u] = true;
    }
    for &v in &o.b_star {
        if g.neighbors(v).iter().any(|&u| !in_a[u]) {
            return Err(format!("B*-vertex {v} has a neighbour outside A*"));
        }
        keep[v] = true;
    }
    let sub = g.restrict(&keep);
    if sub.edge_count() != o.edges || o.a_star.is_empty() {
        return Err("edge count mismatch".into());
    }
    if Dyadic::int(sub.edge_count() as u128) < Dyadic::new(o.a_star.len() as u128, o.s_star as i64)
    {
        return Err("d* < 2^s*".into());
    }
    if o.a_star
        .iter()
        .any(|&u| Dyadic::int(sub.degree(u) as u128) > Dyadic::pow2(o.t_star as i64))
    {
        return Err("A*-degree above 2^t*".into());
    }
    Ok(())
}

/// Repeats [`random_regularize`] until `t - s <= 5 log2 r`, resetting
/// `s' = ⌊log2 d'⌋` and `t' = ⌈log2(40 (t-s) r^2 d')⌉` after each round.
/// A round that fails to shrink `t - s` is reported as `NoProgress`.
pub fn iterate_regularize(
    g: &BipartiteGraph,
    p: &RegularizationParams,
    seed: u64,
    max_trials: u32,
    mode: IterationMode,
) -> Result<IterationOutcome, RegularizeError> {
    let mut cur = g.clone();
    let mut params = *p;
    let mut rounds = Vec::new();
    let mut widths = Vec::new();
    loop {
        match mode {
            IterationMode::Strict { r_floor } => {
                if params.r < r_floor {
                    return Err(violated(
                        Clause::RFloor,
                        format!("r = {} below r_floor = {r_floor}", params.r),
                    ));
                }
                check_iterated_hypotheses(&cur, &params)?;
            }
            IterationMode::Relaxed => check_hypotheses(&cur, &params)?,
        }
        widths.push(params.width());
        if params.window_is_narrow() {
            let edges = cur.edge_count();
            let a_star = cur.side_a();
            return Ok(IterationOutcome {
                s_star: params.s,
                t_star: params.t,
                d_star: edges as f64 / a_star.len() as f64,
                b_star: cur.side_b(),
                a_star,
                edges,
                widths,
                rounds,
                subgraph: cur,
            });
        }
        let round_seed = derive_seed(seed, rounds.len() as u64);
        let out = match random_regularize(&cur, &params, round_seed, max_trials) {
            Ok(o) => o,
            Err(RegularizeError::TrialsExhausted {
                trials,
                trial_stats,
                ..
            }) => {
                return Err(RegularizeError::TrialsExhausted {
                    trials,
                    trial_stats,
                    rounds,
                })
            }
            Err(e) => return Err(e),
        };
        rounds.push(RoundRecord {
            s: params.s,
            t: params.t,
            gamma: out.gamma_used,
            trials: out.trials,
            a_size: out.a2.len(),
            b_size: out.b2.len(),
            edges: out.edges,
        });
        let (num, den) = out.d_prime_ratio();
        let w = params.width() as u128;
        let r = params.r as u128;
        let s_new = floor_log2_ratio(num, den);
        let t_new = ceil_log2_ratio(40 * w * r * r * num, den);
        let before = params.width() as i64;
        if s_new < 1 || t_new - s_new >= before {
            return Err(RegularizeError::NoProgress {
                round: rounds.len(),
                before,
                after: t_new - s_new,
                rounds,
            });
        }
        params = RegularizationParams {
            r: params.r,
            s: s_new as u32,
            t: t_new as u32,
        };
        cur = out.subgraph;
    }
}

/// Cross-check helper: sign agreement of exact and log-space comparisons
/// of `a · 2^x` against `b · 2^y`.
pub fn exact_and_log_agree(a: u128, x: i64, b: u128, y: i64) -> bool {
    let exact = Dyadic::new(a, x).cmp(&Dyadic::new(b, y));
    let lg = cmp_log2(Dyadic::new(a, x), Dyadic::new(b, y));
    lg == std::cmp::Ordering::Equal || lg == exact
}
