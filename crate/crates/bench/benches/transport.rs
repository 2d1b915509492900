use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use unruh_bench::{sector, GRID};
use unruh_core::entanglement::{ppt_report, Partition};
use unruh_core::protocols::{epr_postselect, ProtocolSettings};
use unruh_core::unruh::{
    analytic_sector_state, transport_measured_sector, transport_thermal_sector, Normalization,
    TransportSettings,
};

fn sector_transport(c: &mut Criterion) {
    let settings = TransportSettings::default();
    let mut group = c.benchmark_group("sector");
    for (m, eps) in GRID {
        let s = sector(eps);
        let n = m + 30;
        let id = format!("m{m}_eps{eps}");
        group.bench_with_input(BenchmarkId::new("oracle", &id), &n, |b, &n| {
            b.iter(|| transport_measured_sector(black_box(&s), m, n, &settings).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("analytic", &id), &n, |b, &n| {
            b.iter(|| analytic_sector_state(black_box(&s), m, n, &settings).unwrap())
        });
    }
    group.finish();
}

fn round_trip(c: &mut Criterion) {
    let settings = TransportSettings {
        normalization: Normalization::Unitary,
        ..TransportSettings::default()
    };
    let s = sector(0.7);
    c.bench_function("thermal_sector_n40_eps0.7", |b| {
        b.iter(|| transport_thermal_sector(black_box(&s), 40, &settings).unwrap())
    });
}

fn diagnostics(c: &mut Criterion) {
    let settings = TransportSettings::default();
    let s = sector(0.7);
    let state = transport_measured_sector(&s, 4, 34, &settings).unwrap();
    let [a, b] = s.minkowski_modes();
    let partition = Partition::split(state.modes(), &[a], &[b]).unwrap();
    c.bench_function("ppt_report_m4_eps0.7", |bench| {
        bench.iter(|| ppt_report(black_box(&state), &partition).unwrap())
    });
    let ps = ProtocolSettings::default();
    let w1 = s.params.omega_over_a();
    c.bench_function("epr_postselect_n30", |bench| {
        bench.iter(|| epr_postselect(black_box(w1), w1 * 1.01, 1, 1, 30, &ps).unwrap())
    });
}

criterion_group!(benches, sector_transport, round_trip, diagnostics);
criterion_main!(benches);
