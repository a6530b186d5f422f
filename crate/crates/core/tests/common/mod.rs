#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schurdirac::sample::{sample_operator, SampleShape};
use schurdirac::{BlockOperator, DenseMatrix, StateVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(rng: &mut ChaCha8Rng, n_max: usize) -> BlockOperator<f64> {
    let shape = SampleShape::random(rng, n_max);
    sample_operator(rng, &shape)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector<f64> {
    StateVector::new(random_vec(rng, n), random_vec(rng, n)).unwrap()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dense(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    (0..rows * cols).map(|k| f(k / cols, k % cols)).collect()
}

/// Gaussian elimination with partial pivoting on a row-major square matrix.
pub fn lu_solve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs()))
            .unwrap();
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            x.swap(k, piv);
        }
        let d = m[k * n + k];
        assert!(d != 0.0, "singular matrix");
        for i in k + 1..n {
            let f = m[i * n + k] / d;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k * n + j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k * n + k];
    }
    x
}

/// `A⁻¹ B` column by column.
pub fn lu_solve_columns(a: &[f64], b: &[f64], n: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * cols];
    for c in 0..cols {
        let col: Vec<f64> = (0..n).map(|i| b[i * cols + c]).collect();
        for (i, v) in lu_solve(a, &col).into_iter().enumerate() {
            out[i * cols + c] = v;
        }
    }
    out
}

/// `P - α + Tᵀ (S + α)⁻¹ T` from dense blocks and LU solves.
pub fn dense_form_matrix(op: &BlockOperator<f64>, alpha: f64) -> DenseMatrix<f64> {
    let n = op.n();
    let t = op.t().to_row_major();
    let s_alpha = dense(n, n, |i, j| op.s().get(i, j) + if i == j { alpha } else { 0.0 });
    let x = lu_solve_columns(&s_alpha, &t, n, n);
    let m = dense(n, n, |i, j| {
        let tx: f64 = (0..n).map(|k| t[k * n + i] * x[k * n + j]).sum();
        op.p().get(i, j) - if i == j { alpha } else { 0.0 } + tx
    });
    DenseMatrix::from_row_major(n, n, m)
}
