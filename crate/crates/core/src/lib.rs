//! Extraction of k-regular and almost-regular subgraphs from sparse graphs,
//! with exact desk-scale oracles that re-verify every stage.

pub mod almostreg;
pub mod cleanup;
pub mod dyadic;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod regularize;
pub mod rng;
