//! Smith normal form over the integers with unimodular transforms, plus the
//! small amount of exact linear algebra the lattice computations need
//! (fraction-free determinants, kernel bases of integer functionals).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// U * A * V = diag(d) with U, V unimodular, d_i >= 0 and d_i | d_{i+1}.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

pub fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    assert_eq!(ca, b.len());
    let mut out = alloc::vec![alloc::vec![BigInt::zero(); cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub fn smith_normal_form(input: &[Vec<BigInt>]) -> Snf {
    let rows = input.len();
    let cols = if rows > 0 { input[0].len() } else { 0 };
    let mut a: Vec<Vec<BigInt>> = input.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let swap_rows = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        a.swap(x, y);
        u.swap(x, y);
    };
    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in v.iter_mut() {
            row.swap(x, y);
        }
    };

    let mut t = 0usize;
    while t < rows.min(cols) {
        // pivot: the nonzero entry of smallest absolute value in the
        // remaining submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    if !q.is_zero() {
                        for j in 0..cols {
                            let s = &q * &a[t][j];
                            a[i][j] -= s;
                        }
                        for j in 0..rows {
                            let s = &q * &u[t][j];
                            u[i][j] -= s;
                        }
                    }
                    if !a[i][t].is_zero() {
                        swap_rows(&mut a, &mut u, t, i);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    if !q.is_zero() {
                        for i in 0..rows {
                            let s = &q * &a[i][t];
                            a[i][j] -= s;
                        }
                        for i in 0..cols {
                            let s = &q * &v[i][t];
                            v[i][j] -= s;
                        }
                    }
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the whole remaining submatrix for the
            // divisibility chain; if not, fold the offending row in
            let mut fixed = true;
            'search: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for c in 0..cols {
                            let s = a[i][c].clone();
                            a[t][c] += s;
                        }
                        for c in 0..rows {
                            let s = u[i][c].clone();
                            u[t][c] += s;
                        }
                        fixed = false;
                        break 'search;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        t += 1;
    }

    for i in 0..rows.min(cols) {
        if a[i][i].is_negative() {
            for j in 0..cols {
                a[i][j] = -a[i][j].clone();
            }
            for j in 0..rows {
                u[i][j] = -u[i][j].clone();
            }
        }
    }
    let diag = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(input: &[Vec<BigInt>]) -> BigInt {
    let n = input.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(input.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    let mut a: Vec<Vec<BigInt>> = input.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Basis of the kernel lattice of a nonzero integer functional w on Z^n
/// (the kernel is saturated, so the lattice of integer solutions is exactly
/// the span of the returned n-1 vectors).
pub fn kernel_of_functional(w: &[i64]) -> Vec<Vec<BigInt>> {
    let n = w.len();
    let row: Vec<Vec<BigInt>> = alloc::vec![w.iter().map(|&x| BigInt::from(x)).collect()];
    let snf = smith_normal_form(&row);
    assert!(!snf.diag.is_empty() && !snf.diag[0].is_zero(), "functional must be nonzero");
    // w * V has zero entries in columns 1..n, and V is unimodular
    (1..n).map(|j| (0..n).map(|i| snf.v[i][j].clone()).collect()).collect()
}
