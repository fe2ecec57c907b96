//! Helpers shared by the integration suites: seeded random objects and the
//! independent oracles the expected values are frozen from.

#![allow(dead_code)]

use kreinlab::cmatrix::{inner, vec_norm, CMatrix};
use kreinlab::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type M64 = CMatrix<f64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, n: usize) -> M64 {
    M64::from_fn(n, n, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Random unitary by Gram-Schmidt on a random complex matrix.
pub fn rand_unitary(rng: &mut ChaCha8Rng, n: usize) -> M64 {
    loop {
        let a = rand_matrix(rng, n);
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|i| a.at(i, j)).collect())
            .collect();
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let proj = inner(&cols[k], &cols[j]).unwrap();
                for i in 0..n {
                    let v = cols[k][i] * proj;
                    cols[j][i] -= v;
                }
            }
            let nrm = vec_norm(&cols[j]);
            if nrm < 1e-6 {
                ok = false;
                break;
            }
            let inv = c(1.0 / nrm, 0.0);
            for i in 0..n {
                cols[j][i] *= inv;
            }
        }
        if ok {
            return M64::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Taylor-series oracle for exp(x), independent of the library paths.
pub fn exp_series(x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0f64;
    while term.abs() > 1e-18 {
        term *= x / k;
        sum += term;
        k += 1.0;
    }
    sum
}

/// Rank of a real matrix by Gaussian elimination with partial pivoting.
pub fn real_rank(mut m: Vec<Vec<f64>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let mut piv = row;
        for r in row..rows {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() < 1e-9 {
            continue;
        }
        m.swap(row, piv);
        let p = m[row][col];
        for r in 0..rows {
            if r != row {
                let f = m[r][col] / p;
                if f != 0.0 {
                    for cc in 0..cols {
                        m[r][cc] -= f * m[row][cc];
                    }
                }
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}
