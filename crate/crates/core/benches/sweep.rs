use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use swanson_ep::ep::{find_transitions_with, TransitionOptions};
use swanson_ep::model::char_coeffs_closed;
use swanson_ep::par::Execution;
use swanson_ep::sweep::{run_sweep, SweepConfig};
use swanson_ep::verify::verify_suite_with;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_sweep");
    for (name, cfg) in [
        ("fig1", SweepConfig::figure1()),
        ("fig2", SweepConfig::figure2()),
    ] {
        for (mode, exec) in MODES {
            let cfg = SweepConfig {
                exec,
                ..cfg.clone()
            };
            group.bench_with_input(BenchmarkId::new(mode, name), &cfg, |b, cfg| {
                b.iter(|| run_sweep(cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn transitions(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_transitions");
    let cfg = SweepConfig::figure2();
    let family = cfg.family().unwrap();
    for (mode, exec) in MODES {
        let opts = TransitionOptions {
            exec,
            ..TransitionOptions::default()
        };
        group.bench_function(mode, |b| {
            b.iter(|| find_transitions_with(&family, cfg.from, cfg.to, cfg.steps, &opts).unwrap())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| verify_suite_with(1000, 42, char_coeffs_closed, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps, transitions, verify);
criterion_main!(benches);
