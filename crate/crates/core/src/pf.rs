//! Perron–Frobenius data of nonnegative integer matrices.

use crate::error::{GbsError, Result};

pub type Matrix = Vec<Vec<f64>>;

/// Some power up to the Wielandt bound `(n-1)^2 + 1` is strictly positive.
pub fn is_primitive(a: &[Vec<u64>]) -> bool {
    let n = a.len();
    if n == 0 {
        return false;
    }
    let b: Vec<Vec<bool>> = a.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let mut p = b.clone();
    let cap = (n - 1) * (n - 1) + 1;
    for _ in 0..cap {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        let mut q = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if p[i][k] {
                    for j in 0..n {
                        q[i][j] |= b[k][j];
                    }
                }
            }
        }
        p = q;
    }
    false
}

fn to_f64(a: &[Vec<u64>]) -> Matrix {
    a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()
}

fn transpose_apply(a: &Matrix, v: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n).map(|j| (0..n).map(|i| a[i][j] * v[i]).sum()).collect()
}

/// `‖Aᵀv − λv‖∞`.
pub fn left_residual(a: &[Vec<u64>], lambda: f64, v: &[f64]) -> f64 {
    let w = transpose_apply(&to_f64(a), v);
    w.iter().zip(v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max)
}

/// Perron–Frobenius eigenvalue and left eigenvector (`vA = λv`),
/// normalized to sum 1. Power iteration on `(A + I)ᵀ`, falling back to a
/// root of the characteristic polynomial when it stalls.
pub fn perron_frobenius(a: &[Vec<u64>], tol: f64) -> Result<(f64, Vec<f64>)> {
    if !is_primitive(a) {
        return Err(GbsError::NotPrimitive);
    }
    let n = a.len();
    let af = to_f64(a);
    // The shift by I keeps the spectrum's dominant root simple in modulus.
    let shifted: Matrix = (0..n).map(|i| (0..n).map(|j| af[i][j] + if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let w = transpose_apply(&shifted, &v);
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        let lambda = transpose_apply(&af, &w).iter().sum::<f64>();
        let res = left_residual(a, lambda, &w);
        v = w;
        if res <= tol {
            return Ok((lambda, v));
        }
    }
    let lambda = largest_real_root(&char_poly(&af));
    let v = null_vector(&af, lambda);
    Ok((lambda, v))
}

/// Coefficients `c[0..=n]` of `det(xI − A) = Σ c[k] x^{n-k}` (Faddeev–LeVerrier).
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    let mut m = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * m[l][j]).sum::<f64>();
            }
            next[i][i] += c[k - 1];
        }
        m = next;
        let am_trace: f64 = (0..n).map(|i| (0..n).map(|l| a[i][l] * m[l][i]).sum::<f64>()).sum();
        c[k] = -am_trace / k as f64;
    }
    c
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &k| acc * x + k)
}

/// Largest real root by scanning down from a Cauchy bound, then bisection.
pub fn largest_real_root(c: &[f64]) -> f64 {
    let bound = 1.0 + c[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let steps = 100_000;
    let mut hi = bound;
    let sign_hi = eval_poly(c, hi).signum();
    let mut lo = hi;
    for i in 1..=steps {
        let x = bound - bound * i as f64 / steps as f64;
        if eval_poly(c, x).signum() != sign_hi {
            lo = x;
            break;
        }
        hi = x;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval_poly(c, mid).signum() == sign_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive solution of `(Aᵀ − λI) v = 0` with `v[0]` fixed, normalized.
fn null_vector(a: &Matrix, lambda: f64) -> Vec<f64> {
    let n = a.len();
    if n == 1 {
        return vec![1.0];
    }
    // Unknowns v[1..n]; equations rows 1..n of (Aᵀ − λI)v = 0 with v[0] = 1.
    let mut m: Vec<Vec<f64>> = (1..n)
        .map(|j| {
            let mut row: Vec<f64> = (1..n).map(|i| a[i][j] - if i == j { lambda } else { 0.0 }).collect();
            row.push(-a[0][j]);
            row
        })
        .collect();
    let k = n - 1;
    for col in 0..k {
        let piv = (col..k).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        if p.abs() < 1e-300 {
            continue;
        }
        let pivot = m[col].clone();
        for (r, row) in m.iter_mut().enumerate().take(k) {
            if r != col {
                let f = row[col] / p;
                for (x, y) in row[col..=k].iter_mut().zip(&pivot[col..=k]) {
                    *x -= f * y;
                }
            }
        }
    }
    let mut v = vec![1.0];
    v.extend((0..k).map(|i| m[i][k] / m[i][i]));
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}
