use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use holo_bench::{executor, Fixture, SIDES};
use holo_core::{forward_project, superpose, Hologram};

fn kernels(c: &mut Criterion) {
    let exec = executor(0);
    let mut group = c.benchmark_group("kernels");
    group.sample_size(20);
    for side in SIDES {
        let fx = Fixture::new("grid100", side);
        let m = fx.pupil.active_count();
        group.throughput(Throughput::Elements(fx.ops()));

        group.bench_with_input(BenchmarkId::new("superpose", side), &fx, |b, fx| {
            b.iter(|| superpose(&fx.pupil, &fx.spots, &fx.coeffs, 0..m, &exec).unwrap())
        });

        let phases = superpose(&fx.pupil, &fx.spots, &fx.coeffs, 0..m, &exec).unwrap();
        let holo = Hologram::from_phases(&fx.pupil, phases).unwrap();
        group.bench_with_input(BenchmarkId::new("forward_project", side), &fx, |b, fx| {
            b.iter(|| forward_project(&fx.pupil, &holo, &fx.spots, 0..m, &exec).unwrap())
        });
    }
    group.finish();
}

fn thread_scaling(c: &mut Criterion) {
    let fx = Fixture::new("grid100", 256);
    let m = fx.pupil.active_count();
    let mut group = c.benchmark_group("superpose_threads");
    group.sample_size(20);
    group.throughput(Throughput::Elements(fx.ops()));
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut counts = vec![1];
    while counts.last().unwrap() * 2 <= cores {
        counts.push(counts.last().unwrap() * 2);
    }
    for threads in counts {
        let exec = executor(threads);
        group.bench_with_input(BenchmarkId::from_parameter(threads), &fx, |b, fx| {
            b.iter(|| superpose(&fx.pupil, &fx.spots, &fx.coeffs, 0..m, &exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernels, thread_scaling);
criterion_main!(benches);
