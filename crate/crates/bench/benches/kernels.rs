use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use grt_bench::{hex_network, hex_network_depth2, pentagon, perfect, probes, type1};
use grt_core::catalog::{combined_pentagon_perfect, LegUnitaries};
use grt_core::constraints::{check_hypergraph_constrained, faithful_hypergraph, ConstraintHypergraph};
use grt_core::holography::{network_correlator, node_matrix, Method};
use grt_core::solver::{solve_hexagonal, SolveOptions};
use grt_core::{entropy_profile, reduce, Bipartition};

fn tensor_kernels(c: &mut Criterion) {
    let t = type1();
    let mut g = c.benchmark_group("tensor");
    for kept in [vec![0], vec![0, 1], vec![0, 1, 2]] {
        let b = Bipartition::new(7, &kept).unwrap();
        g.bench_with_input(BenchmarkId::new("reduce", kept.len()), &b, |bench, b| {
            bench.iter(|| reduce(black_box(&t), b).unwrap())
        });
    }
    g.bench_function("entropy_profile", |b| b.iter(|| entropy_profile(black_box(&t)).unwrap()));
    g.finish();
}

fn constraint_kernels(c: &mut Criterion) {
    let t = type1();
    let tri: Vec<Vec<usize>> = (1..=6).map(|i| vec![0, i, i % 6 + 1]).collect();
    let h = ConstraintHypergraph::new(7, &tri).unwrap();
    c.bench_function("check_hex_triangles", |b| {
        b.iter(|| check_hypergraph_constrained(black_box(&t), &h, 1e-10).unwrap())
    });
    c.bench_function("faithful_hypergraph_7", |b| b.iter(|| faithful_hypergraph(black_box(&t), 1e-10).unwrap()));
}

fn solver_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    for restarts in [8usize, 32] {
        let opts = SolveOptions {
            restarts,
            ..SolveOptions::default()
        };
        g.bench_with_input(BenchmarkId::new("restarts", restarts), &opts, |b, o| {
            b.iter(|| solve_hexagonal(o).unwrap())
        });
    }
    g.finish();
}

fn holography_kernels(c: &mut Criterion) {
    let t = type1();
    c.bench_function("node_matrix_hex", |b| b.iter(|| node_matrix(black_box(&t), 1, 3).unwrap()));
    let (p, q) = (pentagon(), perfect());
    c.bench_function("combined_node", |b| {
        b.iter(|| {
            let c = combined_pentagon_perfect(&p, &q, &LegUnitaries::Identity).unwrap();
            node_matrix(&c, 1, 3).unwrap()
        })
    });
    let (net, tile) = hex_network();
    let pr = probes(0, 5);
    let mut g = c.benchmark_group("correlator");
    g.bench_function("path", |b| {
        b.iter(|| network_correlator(&net, &tile, None, black_box(&pr), Method::Path).unwrap())
    });
    g.sample_size(10);
    g.bench_function("brute", |b| {
        b.iter(|| network_correlator(&net, &tile, None, black_box(&pr), Method::Brute).unwrap())
    });
    g.finish();
    let deep = hex_network_depth2();
    c.bench_function("enumerate_paths_depth2", |b| b.iter(|| black_box(&deep).enumerate_paths()));
}

criterion_group!(benches, tensor_kernels, constraint_kernels, solver_kernels, holography_kernels);
criterion_main!(benches);
