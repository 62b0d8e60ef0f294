use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use curvedkin::bodies::random_body;
use curvedkin::kinematics::kinematic_lhs_with;
use curvedkin::par::Execution;
use curvedkin::{Curvature, RandomStream};

fn kinematic(c: &mut Criterion) {
    let mut group = c.benchmark_group("kinematic_lhs");
    group.sample_size(10);
    for kv in [-1.0, 0.0, 1.0] {
        let kk = Curvature::new(kv).unwrap();
        let mut rng = RandomStream::new(5);
        let a = random_body(kk, 12, &mut rng);
        let b = random_body(kk, 12, &mut rng);
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, kv), &exec, |bench, &exec| {
                bench.iter(|| kinematic_lhs_with(&a, &b, 200_000, &rng, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, kinematic);
criterion_main!(benches);
