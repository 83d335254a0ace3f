use serde::{Deserialize, Serialize};

use super::{log2_log2, PipelineError};
use crate::graph::{BipartiteGraph, Graph, Vertex};

/// Degree levels `t_i = t0 / (1 - 1/(10r))^i`, `i = 0..=ell`, with
/// `t0 = r log2 r sqrt(log2 log2 Δ)` and `ell` the first index reaching
/// `log2 Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPlan {
    pub delta: usize,
    pub r: usize,
    pub loglog: f64,
    pub t0: f64,
    pub ell: usize,
    pub levels: Vec<f64>,
}

pub fn build_ladder(g: &Graph, r: usize) -> Result<LadderPlan, PipelineError> {
    build_ladder_for_delta(g.max_degree(), r)
}

pub fn build_ladder_for_delta(delta: usize, r: usize) -> Result<LadderPlan, PipelineError> {
    if delta < 4 {
        return Err(PipelineError::DegenerateDelta(delta));
    }
    if r < 2 {
        // log2 r = 0 makes every level zero
        return Err(PipelineError::violated(
            "build_ladder",
            format!("r = {r} < 2"),
        ));
    }
    let loglog = log2_log2(delta as f64);
    let t0 = r as f64 * (r as f64).log2() * loglog.sqrt();
    let shrink = 1.0 - 1.0 / (10.0 * r as f64);
    let top = (delta as f64).log2();
    let mut levels = vec![t0];
    while *levels.last().unwrap() < top {
        let i = levels.len() as i32;
        levels.push(t0 / shrink.powi(i));
    }
    Ok(LadderPlan {
        delta,
        r,
        loglog,
        t0,
        ell: levels.len() - 1,
        levels,
    })
}

impl LadderPlan {
    /// Index of the level holding a degree: 0 for `d <= 2^{t0}`, otherwise
    /// the `i` with `2^{t_{i-1}} < d <= 2^{t_i}`; `None` above `2^{t_ell}`.
    pub fn level_of(&self, degree: usize) -> Option<usize> {
        self.levels.iter().position(|&t| degree as f64 <= t.exp2())
    }

    /// `ell <= 10 r log2 log2 Δ`.
    pub fn length_bound_holds(&self) -> bool {
        self.ell as f64 <= 10.0 * self.r as f64 * self.loglog
    }

    /// The level sets `A_0..A_ell` of side A, by degree in `h`.
    pub fn classes(&self, h: &BipartiteGraph) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.ell + 1];
        for u in h.side_a() {
            let i = self
                .level_of(h.degree(u))
                .expect("degrees never exceed the ladder top");
            out[i].push(u);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let p = build_ladder_for_delta(1 << 16, 2).unwrap();
        assert!((p.t0 - 4.0).abs() < 1e-12);
        assert_eq!(p.ell, 28);
        // independent iteration of the recurrence t <- t · 20/19
        let mut t = 4.0f64;
        let mut steps = 0;
        while t < 16.0 {
            t *= 20.0 / 19.0;
            steps += 1;
        }
        assert_eq!(steps, 28);
        assert!(p.length_bound_holds());
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            build_ladder_for_delta(3, 4),
            Err(PipelineError::DegenerateDelta(3))
        );
        assert!(matches!(
            build_ladder_for_delta(100, 1),
            Err(PipelineError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn levels_partition_degrees() {
        let p = build_ladder_for_delta(1000, 3).unwrap();
        for d in 0..=1000 {
            let i = p.level_of(d).unwrap();
            assert!(d as f64 <= p.levels[i].exp2());
            if i > 0 {
                assert!(d as f64 > p.levels[i - 1].exp2());
            }
        }
    }

    proptest! {
        #[test]
        fn ladder_invariants(delta in 16usize..1_000_000, r in 2usize..12) {
            let p = build_ladder_for_delta(delta, r).unwrap();
            prop_assert!(p.levels[p.ell] >= (delta as f64).log2());
            prop_assert!(p.ell == 0 || p.levels[p.ell - 1] < (delta as f64).log2());
            prop_assert!(p.length_bound_holds());
            prop_assert!(p.levels.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
