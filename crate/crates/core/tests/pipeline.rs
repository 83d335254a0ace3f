use std::collections::BTreeMap;

use regulus::generators::{gen_almost_biregular, gen_gnp};
use regulus::oracle::check_witness;
use regulus::pipeline::{find_k_regular, general_main, PipelineConfig};

fn case_one_config() -> PipelineConfig {
    let mut cfg = PipelineConfig::new(6, 3);
    cfg.scale_overrides = BTreeMap::from([
        ("main_avg".to_string(), 1.6),
        ("b_degree".to_string(), 0.8),
        ("case1_degree".to_string(), 0.08),
    ]);
    cfg.budget.max_subsets = 20_000;
    cfg
}

#[test]
fn low_level_case_runs_end_to_end() {
    for seed in 0..3 {
        let (bg, _) = gen_almost_biregular(4.0, 40, 400, 400, seed).unwrap();
        let g = bg.into_graph();
        let (res, trace) = general_main(&g, &case_one_config(), seed);
        let (out, cert) = res.unwrap();
        assert!(cert.check(&out));
        assert!(out.is_subgraph_of(&g));
        assert!(cert.max_degree <= 64 * cert.min_degree);
        let case1 = &trace.stage("case1").unwrap().data;
        // |A_0'| <= |B''|
        assert!(case1["a0_prime"].as_u64().unwrap() <= case1["b_double_prime"].as_u64().unwrap());
        let ladder = &trace.stage("ladder").unwrap().data;
        assert!(ladder["case1_holds"].as_bool().unwrap());
    }
}

#[test]
fn traces_replay_bit_for_bit() {
    let (bg, _) = gen_almost_biregular(4.0, 40, 400, 400, 5).unwrap();
    let g = bg.into_graph();
    let (a, ta) = general_main(&g, &case_one_config(), 11);
    let (b, tb) = general_main(&g, &case_one_config(), 11);
    assert_eq!(ta.to_json(), tb.to_json());
    assert_eq!(a.map(|x| x.0), b.map(|x| x.0));
}

#[test]
fn dense_random_graphs_give_verified_witnesses() {
    for seed in 0..3 {
        let g = gen_gnp(200, 0.2, seed);
        let (res, trace) = find_k_regular(&g, &PipelineConfig::scaled(3, 3), seed);
        let w = res.unwrap();
        assert!(check_witness(&g, &w));
        assert_eq!(w.claimed_k, Some(3));
        assert_eq!(trace.outcome, "ok");
    }
}
