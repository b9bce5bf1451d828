use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use obsclone::exec::Exec;
use obsclone::jointmeas::{uncertainty_product_with, ProductMode};
use obsclone::machines::machine_nc;
use obsclone::qcore::{BlochVector, DensityMatrix};
use obsclone::verify::{estimate_noises_with, nogo_search, NogoConfig, NoiseFitOptions};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn noise_fit(c: &mut Criterion) {
    let machine = machine_nc(0.6).unwrap();
    let mut group = c.benchmark_group("noise_fit");
    for (name, exec) in POLICIES {
        for n in [64, 1024] {
            let opts = NoiseFitOptions { n_states: n, seed: 0, tol: 1e-9, exec };
            group.bench_with_input(BenchmarkId::new(name, n), &opts, |b, opts| {
                b.iter(|| estimate_noises_with(black_box(&machine), opts).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
    let steps = 99;
    let mut group = c.benchmark_group("sweep");
    for (name, exec) in POLICIES {
        // Rows in parallel, each fit sequential: the split the CLI uses.
        let fit = NoiseFitOptions { exec: Exec::Sequential, ..Default::default() };
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map_indexed(steps, |k| {
                    let theta = (k + 1) as f64 * FRAC_PI_2 / (steps + 1) as f64;
                    uncertainty_product_with(&machine_nc(theta).unwrap(), &rho, ProductMode::Strict, &fit)
                        .unwrap()
                        .product
                })
            })
        });
    }
    group.finish();
}

fn nogo(c: &mut Criterion) {
    let mut group = c.benchmark_group("nogo");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        let config = NogoConfig { exec, ..Default::default() };
        group.bench_function(BenchmarkId::new(name, 16), |b| {
            b.iter(|| nogo_search(16, black_box(42), &config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, noise_fit, sweep, nogo);
criterion_main!(benches);
