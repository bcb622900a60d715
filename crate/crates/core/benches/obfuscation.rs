use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dprr_core::graph::generate_ba;
use dprr_core::protocol::run_protocol_exec;
use dprr_core::{Exec, Mechanism, PrivacyConfig, RngStream};

fn obfuscation(c: &mut Criterion) {
    let mut group = c.benchmark_group("obfuscate");
    group.sample_size(20);
    for n in [2_000usize, 8_000, 32_000] {
        let g = generate_ba(n, 3, RngStream::new(1, 0, 0)).unwrap();
        let cfg = PrivacyConfig::common(Mechanism::Dprr, 1.0, n);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(format!("dprr/{label}"), n), &g, |b, g| {
                b.iter(|| run_protocol_exec(g, &cfg, RngStream::new(2, 0, 0), exec).unwrap())
            });
        }
    }
    let n = 2_000;
    let g = generate_ba(n, 3, RngStream::new(1, 0, 0)).unwrap();
    let cfg = PrivacyConfig::common(Mechanism::Rr, 1.0, n);
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::new(format!("rr/{label}"), n), &g, |b, g| {
            b.iter(|| run_protocol_exec(g, &cfg, RngStream::new(2, 0, 0), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, obfuscation);
criterion_main!(benches);
