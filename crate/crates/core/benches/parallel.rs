//! Sequential against data-parallel execution on the hot loops: strategic
//! form tabulation and constraint-matrix assembly. Without the `parallel`
//! feature both arms run sequentially.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spacetime_core::corpus;
use spacetime_core::empirical::{model_from_strategy_mix, ConstraintSystem, Semiring};
use spacetime_core::gen::random_nature_mix;
use spacetime_core::par::Exec;
use spacetime_core::strategy::{reduced_strategic_form_with, strategic_form_with};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn strategic(c: &mut Criterion) {
    let mut group = c.benchmark_group("strategic_form");
    group.sample_size(10);
    for e in [corpus::cyclic4(), corpus::gp()] {
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, e.name), &e.game, |b, g| b.iter(|| strategic_form_with(black_box(g), exec)));
        }
    }
    group.finish();

    let mut group = c.benchmark_group("reduced_form");
    group.sample_size(10);
    let gp = corpus::gp().game;
    for (label, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(label, "fig11"), &gp, |b, g| b.iter(|| reduced_strategic_form_with(black_box(g), exec)));
    }
    group.finish();
}

fn constraints(c: &mut Criterion) {
    let mut group = c.benchmark_group("constraint_system");
    group.sample_size(10);
    let ghz = corpus::ghz_or().game;
    let mix = random_nature_mix(&mut ChaCha8Rng::seed_from_u64(3), &ghz, 8);
    let m = model_from_strategy_mix(&ghz, &mix, Semiring::Probability).expect("mix model");
    for (label, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(label, "fig12"), &m, |b, m| b.iter(|| ConstraintSystem::build_with(black_box(m), exec)));
    }
    group.finish();
}

criterion_group!(benches, strategic, constraints);
criterion_main!(benches);
