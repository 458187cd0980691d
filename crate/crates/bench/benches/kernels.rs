use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use twophase_core::benchmark::{Benchmark, BenchmarkConfig};
use twophase_core::lifting::assemble_lifting_matrices;
use twophase_core::linsolve::{gmres, GmresOptions, Ilu0, SparseMatrix};
use twophase_core::mesh::{classify_boundary, FaceKind, SideKinds};
use twophase_core::vof::{circle_fraction, reconstruct_plic};
use twophase_core::{CartesianMesh, DgSpace};

fn laplacian(n: usize) -> SparseMatrix {
    let id = |i: usize, j: usize| j * n + i;
    let mut t = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let r = id(i, j);
            t.push((r, r, 4.0));
            if i > 0 {
                t.push((r, id(i - 1, j), -1.0));
            }
            if i + 1 < n {
                t.push((r, id(i + 1, j), -1.0));
            }
            if j > 0 {
                t.push((r, id(i, j - 1), -1.0));
            }
            if j + 1 < n {
                t.push((r, id(i, j + 1), -1.0));
            }
        }
    }
    SparseMatrix::from_triplets(n * n, n * n, t).unwrap()
}

fn linear_solver(c: &mut Criterion) {
    let a = laplacian(64);
    let b: Vec<f64> = (0..a.nrows()).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
    c.bench_function("ilu0_factor_64x64", |bench| bench.iter(|| Ilu0::new(black_box(&a)).unwrap()));
    let ilu = Ilu0::new(&a).unwrap();
    let opts = GmresOptions { rtol: 1e-10, ..Default::default() };
    c.bench_function("gmres_ilu0_64x64", |bench| {
        bench.iter(|| {
            let mut x = vec![0.0; b.len()];
            gmres(&a, black_box(&b), &mut x, &ilu, &opts)
        })
    });
}

fn interface(c: &mut Criterion) {
    let mesh = CartesianMesh::new(80, 160, [0.0, 0.0], [1.0, 2.0]).unwrap();
    let field = circle_fraction(&mesh, [0.5, 0.5], 0.25);
    c.bench_function("plic_reconstruct_80x160", |bench| bench.iter(|| reconstruct_plic(&mesh, black_box(&field))));
}

fn liftings(c: &mut Criterion) {
    let mesh = Arc::new(CartesianMesh::new(20, 40, [0.0, 0.0], [1.0, 2.0]).unwrap());
    let scalar = DgSpace::new(mesh.clone(), 1, 1);
    let vector = DgSpace::new(mesh.clone(), 2, 2);
    let kinds = classify_boundary(&mesh, SideKinds::uniform(FaceKind::Dirichlet));
    c.bench_function("lifting_assembly_20x40_k1", |bench| {
        bench.iter(|| assemble_lifting_matrices(&scalar, &vector, black_box(&kinds)).unwrap())
    });
}

fn time_step(c: &mut Criterion) {
    let cfg = BenchmarkConfig { nx: 20, ny: 40, ..Default::default() };
    let mut bench_run = Benchmark::new(cfg).unwrap();
    // start from a moving bubble rather than the rest state
    for _ in 0..5 {
        bench_run.step().unwrap();
    }
    let state = bench_run.state.clone();
    let mut group = c.benchmark_group("time_step");
    group.sample_size(10);
    group.bench_function("case1_20x40", |bench| {
        bench.iter_batched(
            || state.clone(),
            |mut s| {
                let dt = bench_run.solver.stable_dt(&s);
                bench_run.solver.step(&mut s, dt).unwrap()
            },
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, linear_solver, interface, liftings, time_step);
criterion_main!(benches);
