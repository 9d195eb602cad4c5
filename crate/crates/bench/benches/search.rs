use criterion::{black_box, criterion_group, criterion_main, Criterion};

use reconfig_bench::{cubic_exact_cover, cubic_hypercube, legal_orientations, subset_sum_ladder};
use reconfig_core::exactcover::{manyway_neighbors, split_merge_neighbors};
use reconfig_core::graph::SimpleGraph;
use reconfig_core::hypercube::cube_neighbors;
use reconfig_core::naesat::{gadget_audit, reduce_ncl_to_naesat, NaeFlipSpace, ReduceOptions};
use reconfig_core::ncl::samples;
use reconfig_core::statespace::{explore_component, reachable_set, SearchLimits};
use reconfig_core::subsetsum::k_move_neighbors;

fn ncl_to_nae(c: &mut Criterion) {
    let g = samples::and_triangle_or_hub();
    let legal = legal_orientations(&g);
    let (a, b) = (&legal[0], &legal[legal.len() - 1]);
    c.bench_function("compile and_triangle_or_hub", |bch| {
        bch.iter(|| reduce_ncl_to_naesat(black_box(&g), a, b, ReduceOptions::default()).unwrap())
    });
    let red = reduce_ncl_to_naesat(&g, a, b, ReduceOptions::default()).unwrap();
    let space = NaeFlipSpace::new(&red.formula);
    c.bench_function("nae component of and_triangle_or_hub", |bch| {
        bch.iter(|| explore_component(&space, black_box(&red.start), SearchLimits::default()).unwrap().len())
    });
}

fn audit(c: &mut Criterion) {
    c.bench_function("gadget audit", |bch| bch.iter(|| gadget_audit().passed()));
}

fn exact_cover(c: &mut Criterion) {
    let ec = cubic_exact_cover(SimpleGraph::prism(), 3);
    c.bench_function("split/merge neighbors, prism", |bch| {
        bch.iter(|| split_merge_neighbors(&ec, black_box(&ec.start)).unwrap().len())
    });
    c.bench_function("many-way neighbors, prism", |bch| {
        bch.iter(|| manyway_neighbors(&ec, black_box(&ec.start)).unwrap().len())
    });
}

fn hypercube(c: &mut Criterion) {
    let red = cubic_hypercube(SimpleGraph::k4(), 2);
    let p = &red.polytope;
    c.bench_function("cube neighbors, K4", |bch| bch.iter(|| cube_neighbors(p, black_box(&p.start)).unwrap().len()));
    let space = reconfig_core::hypercube::HypercubeSpace::new(p);
    c.bench_function("hypercube component, K4", |bch| {
        bch.iter(|| reachable_set(&space, black_box(&p.start), SearchLimits::default()).unwrap().len())
    });
}

fn subset_sum(c: &mut Criterion) {
    let inst = subset_sum_ladder(24);
    for k in [2, 3, 4] {
        c.bench_function(&format!("{k}-move neighbors, 24 items"), |bch| {
            bch.iter(|| k_move_neighbors(&inst, black_box(&inst.start), k).unwrap().len())
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = ncl_to_nae, audit, exact_cover, hypercube, subset_sum
}
criterion_main!(benches);
