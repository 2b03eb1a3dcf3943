use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rdress::catalog::{kink_m, u1};
use rdress::equations::{residual_grid, GridOptions};
use rdress::fdsolver::{evolve, Boundary};
use rdress::{Equation, Exec, GridSpec, PdeCoefficients};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn residual_sweep(c: &mut Criterion) {
    let grid = GridSpec::new(-10.0, 10.0, 201, 0.0, 2.0, 101).unwrap();
    let u = u1(1.0, 1.0, 0.4, -0.3);
    let eq = Equation::Fhns { a: 1.0, phi3: 1.0 };
    let mut g = c.benchmark_group("residual_grid");
    for (name, exec) in STRATEGIES {
        let opts = GridOptions { exec, ..GridOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| residual_grid::<f64>(&eq, &u, "u1", &grid, *opts).unwrap())
        });
    }
    g.finish();
}

fn fd_evolution(c: &mut Criterion) {
    let exact = kink_m(1.0, -1.5, 0.0);
    let coefs = PdeCoefficients::fhns(1.0, 1.0);
    let bc = Boundary::Dirichlet(exact.clone());
    let mut g = c.benchmark_group("fd_evolve");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| {
            b.iter(|| evolve(&coefs, &exact, (-20.0, 20.0), 0.02, (0.0, 0.05), 1, &bc, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, residual_sweep, fd_evolution);
criterion_main!(benches);
