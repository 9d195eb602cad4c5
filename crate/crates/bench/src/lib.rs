//! Instance builders shared by the benchmarks.

use num_bigint::BigUint;
use reconfig_core::exactcover::{color_hypergraph, reduce_tokens_to_exactcover, ExactCoverInstance};
use reconfig_core::graph::SimpleGraph;
use reconfig_core::hypercube::{reduce_manyway_to_hypercube, HypercubeReduction};
use reconfig_core::ncl::{is_legal_orientation, ConstraintGraph, Orientation};
use reconfig_core::subsetsum::{Selection, SubsetSumInstance};
use reconfig_core::tokens::{Placement, TokenInstance};

/// Every legal orientation of `g`, by brute force over edge heads.
pub fn legal_orientations(g: &ConstraintGraph) -> Vec<Orientation> {
    let m = g.edges().len();
    (0..1u64 << m)
        .filter_map(|mask| {
            let heads = g.edges().iter().enumerate().map(|(i, e)| if mask >> i & 1 == 1 { e.v } else { e.u }).collect();
            let o = Orientation::new(g, heads).ok()?;
            is_legal_orientation(g, &o).ok()?.then_some(o)
        })
        .collect()
}

/// One token on `graph`, moving from vertex 0 to vertex `goal`.
pub fn one_token(graph: SimpleGraph, goal: usize) -> TokenInstance {
    TokenInstance::new(graph, vec!["t".into()], Placement(vec![0]), Placement(vec![goal])).expect("single token")
}

pub fn cubic_exact_cover(graph: SimpleGraph, goal: usize) -> ExactCoverInstance {
    reduce_tokens_to_exactcover(&one_token(graph, goal)).expect("cubic graph").instance
}

pub fn cubic_hypercube(graph: SimpleGraph, goal: usize) -> HypercubeReduction {
    let ec = cubic_exact_cover(graph, goal);
    reduce_manyway_to_hypercube(&ec, &color_hypergraph(&ec)).expect("valid coloring")
}

/// Values `1..=n` with the selection `{0, n-1}` as both endpoints.
pub fn subset_sum_ladder(n: usize) -> SubsetSumInstance {
    let values: Vec<BigUint> = (1..=n as u64).map(BigUint::from).collect();
    let sel = Selection::new(vec![0, n - 1]).expect("distinct");
    SubsetSumInstance::new(values, BigUint::from(n as u64 + 1), sel.clone(), sel).expect("feasible")
}
