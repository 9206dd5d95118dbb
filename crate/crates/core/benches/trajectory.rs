//! Parallel vs sequential trajectory sampling.
//!
//! Every sample evaluates the closed-form propagator independently, so the
//! sweep over sample times is the data-parallel hot loop of the crate. Run
//! with `cargo bench -p symplecta-core`; build with
//! `--no-default-features` to confirm the sequential fallback compiles.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symplecta_core::dynamics::{evolve_trajectory, evolve_trajectory_serial, PhaseState};
use symplecta_core::pipeline::OscillatorNetwork;

fn star_net(n: usize) -> OscillatorNetwork {
    let freqs: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    let couplings = vec![-0.05; n - 1];
    OscillatorNetwork::new(freqs, couplings).unwrap()
}

fn bench_trajectory(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectory");
    for &(n, samples) in &[(4usize, 20_000usize), (8, 50_000)] {
        let net = star_net(n);
        let mut q = vec![0.0; n];
        q[0] = 1.0;
        let x0 = PhaseState::new(q, vec![0.0; n]).unwrap();
        let t_max = (samples - 1) as f64 * 1e-3;

        group.bench_with_input(
            BenchmarkId::new("default", format!("n{n}_s{samples}")),
            &samples,
            |b, _| b.iter(|| evolve_trajectory(&net, &x0, t_max, 1e-3).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("serial", format!("n{n}_s{samples}")),
            &samples,
            |b, _| b.iter(|| evolve_trajectory_serial(&net, &x0, t_max, 1e-3).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_trajectory);
criterion_main!(benches);
