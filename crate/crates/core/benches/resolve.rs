use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fanforge::resolve::resolve;
use fanforge::{fixtures, Exec, ResolveOptions};

fn sequential_vs_parallel(c: &mut Criterion) {
    let mut inputs = vec![
        ("an_cone_7".to_string(), fixtures::an_cone(7)),
        ("abramovich".to_string(), fixtures::abramovich()),
    ];
    inputs.extend(
        fixtures::random_simplicial_cones(2, 3, 5, 7)
            .into_iter()
            .enumerate()
            .map(|(i, k)| (format!("random_{i}"), k)),
    );
    let mut group = c.benchmark_group("resolve");
    group.sample_size(10);
    for (name, k) in &inputs {
        for (label, exec) in [
            ("sequential", Exec::Sequential),
            ("parallel", Exec::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, name), k, |b, k| {
                b.iter(|| resolve(k, ResolveOptions { exec, guard: None }).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sequential_vs_parallel);
criterion_main!(benches);
