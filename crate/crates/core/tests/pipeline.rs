use twophase_core::benchmark::{run, BenchmarkConfig, Case, RunStatus};
use twophase_core::linsolve::{gmres, CoarseCorrection, CoarseVector, GmresOptions, Ilu0, SparseMatrix};

#[test]
fn short_case2_run_writes_outputs_and_keeps_mass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BenchmarkConfig { case: Case::Two, nx: 10, ny: 20, tend: 0.1, outdir: dir.path().into(), ..Default::default() };
    let out = run(&cfg);
    assert_eq!(out.status, RunStatus::Success, "{:?}", out.error);
    let last = out.rows.last().unwrap();
    assert!((last.t - 0.1).abs() < 1e-12);
    assert!(out.rows.iter().all(|r| r.mass_drift.abs() < 1e-10));
    assert!(dir.path().join("diagnostics.csv").exists());
    let snapshots = std::fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("fields_")).count();
    assert_eq!(snapshots, 2);
}

#[test]
fn coarse_correction_solves_a_jumping_coefficient_problem() {
    // 2D five-point Laplacian, coefficient 1 inside a square island and 1e-3 outside
    let n = 24;
    let k = |i: usize, j: usize| -> f64 { if (8..16).contains(&i) && (8..16).contains(&j) { 1.0 } else { 1e-3 } };
    let id = |i: usize, j: usize| j * n + i;
    let mut t = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let mut diag = 0.0;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                    diag += k(i, j);
                    continue;
                }
                let c = k(i, j).min(k(a as usize, b as usize));
                diag += c;
                t.push((id(i, j), id(a as usize, b as usize), -c));
            }
            t.push((id(i, j), id(i, j), diag));
        }
    }
    let a = SparseMatrix::from_triplets(n * n, n * n, t).unwrap();
    let b: Vec<f64> = (0..n * n).map(|i| ((i * 31) % 11) as f64 - 5.0).collect();
    let ilu = Ilu0::new(&a).unwrap();
    let island: CoarseVector = (8..16).flat_map(|j| (8..16).map(move |i| (id(i, j), 1.0))).collect();
    let two = CoarseCorrection::new(&a, &ilu, vec![island]).unwrap();
    let opts = GmresOptions { rtol: 1e-12, restart: 30, max_iter: 1000 };
    let mut x = vec![0.0; n * n];
    let rep = gmres(&a, &b, &mut x, &two, &opts);
    assert!(rep.converged, "{rep:?}");
    let r: f64 = a.mul_vec(&x).iter().zip(&b).map(|(ax, bi)| (ax - bi).powi(2)).sum::<f64>().sqrt();
    let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(r <= 1e-12 * bn * 1.0001);
}
