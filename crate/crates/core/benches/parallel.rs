use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use primkg::io;
use primkg::kgraph::Degree;
use primkg::primtop::PrimSpace;
use primkg::repr::Representation;
use primkg::selfsim::SelfSimilarGraph;
use primkg::tails::maximal_tails;
use primkg::Bounds;

fn corpus(name: &str) -> SelfSimilarGraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    io::parse(&std::fs::read_to_string(path).unwrap()).unwrap().build().unwrap()
}

/// A 1-graph on `n` vertices where every vertex receives at least one edge.
fn sparse_graph(n: usize, seed: u64) -> SelfSimilarGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = format!("k 1\nvertices {}\n", (0..n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" "));
    for v in 0..n {
        text += &format!("edge in{v} 1 x{v} x{}\n", rng.gen_range(0..n));
    }
    for i in 0..n / 2 {
        text += &format!("edge extra{i} 1 x{} x{}\n", rng.gen_range(0..n), rng.gen_range(0..n));
    }
    io::parse(&text).unwrap().build().unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("pool", rayon::ThreadPoolBuilder::new().build().unwrap()),
        ("single", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let tails_graph = sparse_graph(16, 7);
    let twisted = corpus("k2_twisted.kg");
    let swap = corpus("g4.kg");
    let swap_space = PrimSpace::build(&swap, &Bounds::new(1)).unwrap();
    let f = swap_space.strata()[0].per.trivial_character();

    let mut group = c.benchmark_group("parallel");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("maximal_tails", name), |b| {
            b.iter(|| pool.install(|| maximal_tails(tails_graph.graph(), 22).unwrap()))
        });
        group.bench_function(BenchmarkId::new("cycline_triples", name), |b| {
            b.iter(|| pool.install(|| twisted.cycline_triples_up_to(&Degree::uniform(2, 2))))
        });
        group.bench_function(BenchmarkId::new("relations", name), |b| {
            b.iter(|| {
                pool.install(|| Representation::for_point(&swap_space, 0, &f, 7).unwrap().check_relations())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
