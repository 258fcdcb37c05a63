//! Cyclic Jacobi eigensolver for symmetric matrices and the matrix → scalar
//! encodings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops,
/// relative to `max(1, ‖A‖_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// How a square matrix is reduced to one scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    /// Sum of all entries.
    MatrixSum,
    /// Absolute value of the largest-magnitude eigenvalue (symmetric input).
    EigenMax,
    /// Sum of singular values (nuclear norm).
    SvdSum,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 3] = [
        EncodingKind::MatrixSum,
        EncodingKind::EigenMax,
        EncodingKind::SvdSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::MatrixSum => "matrix-sum",
            EncodingKind::EigenMax => "eigen-max",
            EncodingKind::SvdSum => "svd-sum",
        }
    }
}

impl std::str::FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EncodingKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown encoding {s:?}")))
    }
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn is_symmetric(a: &[f64], n: usize) -> bool {
    (0..n).all(|i| (i + 1..n).all(|j| a[i * n + j] == a[j * n + i]))
}

/// Eigenvalues of a symmetric `n x n` row-major matrix, unsorted.
///
/// Twin rows are deflated exactly, then cyclic Jacobi sweeps diagonalize
/// what remains.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    if matrix.len() != n * n {
        return Err(Error::NotSquare {
            rows: n,
            cols: matrix.len().checked_div(n).unwrap_or(matrix.len()),
        });
    }
    let frob = matrix.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_TOLERANCE * frob.max(1.0);
    let (reduced, m, mut eigenvalues) = deflate_twins(matrix, n);
    eigenvalues.extend(jacobi(reduced, m, threshold)?);
    Ok(eigenvalues)
}

/// Splits off the eigenvalues carried by classes of twin rows.
///
/// Rows `i` and `j` are twins when they agree outside columns `i` and `j`
/// and have equal diagonals. A class of `k` twins with diagonal `α` and
/// mutual entry `β` has eigenvalue `α − β` with multiplicity `k − 1`; the
/// rest of the spectrum is that of the matrix with each class merged into
/// one row. Returns the merged matrix, its dimension and the split-off
/// eigenvalues.
fn deflate_twins(matrix: &[f64], n: usize) -> (Vec<f64>, usize, Vec<f64>) {
    let at = |i: usize, j: usize| matrix[i * n + j];
    let twins = |i: usize, j: usize| {
        at(i, i) == at(j, j) && (0..n).all(|x| x == i || x == j || at(i, x) == at(j, x))
    };
    let mut taken = vec![false; n];
    let mut classes: Vec<(usize, usize, f64)> = Vec::new();
    let mut split = Vec::new();
    for i in 0..n {
        if taken[i] {
            continue;
        }
        let (mut size, mut beta) = (1, None);
        for j in i + 1..n {
            if !taken[j] && beta.is_none_or(|b| b == at(i, j)) && twins(i, j) {
                taken[j] = true;
                beta = Some(at(i, j));
                size += 1;
            }
        }
        let beta = beta.unwrap_or(0.0);
        split.extend(std::iter::repeat_n(at(i, i) - beta, size - 1));
        classes.push((i, size, beta));
    }
    let m = classes.len();
    let mut reduced = vec![0.0; m * m];
    for (a, &(i, k, beta)) in classes.iter().enumerate() {
        reduced[a * m + a] = at(i, i) + (k - 1) as f64 * beta;
        for (b, &(j, l, _)) in classes.iter().enumerate().skip(a + 1) {
            let x = ((k * l) as f64).sqrt() * at(i, j);
            reduced[a * m + b] = x;
            reduced[b * m + a] = x;
        }
    }
    (reduced, m, split)
}

/// Cyclic-by-row Jacobi rotations until the off-diagonal norm drops to
/// `threshold`.
fn jacobi(mut a: Vec<f64>, n: usize, threshold: f64) -> Result<Vec<f64>> {
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    // Only the strict upper triangle of `a` is kept up to date.
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for x in &a[i * n + i + 1..(i + 1) * n] {
                s += x * x;
            }
        }
        (2.0 * s).sqrt()
    };
    let rotate = |g: &mut f64, h: &mut f64, s: f64, tau: f64| {
        let (x, y) = (*g, *h);
        *g = x - s * (y + x * tau);
        *h = y + s * (x - y * tau);
    };

    for sweep in 0..JACOBI_MAX_SWEEPS {
        let off = off_norm(&a);
        if off <= threshold {
            return Ok(d);
        }
        // early sweeps leave small entries for later
        let skip_below = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 || apq.abs() < skip_below {
                    continue;
                }
                let theta = (d[q] - d[p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                d[p] -= t * apq;
                d[q] += t * apq;
                a[p * n + q] = 0.0;
                for j in 0..p {
                    let (x, y) = (j * n + p, j * n + q);
                    let (mut g, mut h) = (a[x], a[y]);
                    rotate(&mut g, &mut h, s, tau);
                    a[x] = g;
                    a[y] = h;
                }
                for j in p + 1..q {
                    let (x, y) = (p * n + j, j * n + q);
                    let (mut g, mut h) = (a[x], a[y]);
                    rotate(&mut g, &mut h, s, tau);
                    a[x] = g;
                    a[y] = h;
                }
                for j in q + 1..n {
                    let (x, y) = (p * n + j, q * n + j);
                    let (mut g, mut h) = (a[x], a[y]);
                    rotate(&mut g, &mut h, s, tau);
                    a[x] = g;
                    a[y] = h;
                }
            }
        }
    }
    if off_norm(&a) <= threshold {
        return Ok(d);
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

pub fn singular_values(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    if matrix.len() != n * n {
        return Err(Error::NotSquare {
            rows: n,
            cols: matrix.len().checked_div(n).unwrap_or(matrix.len()),
        });
    }
    if is_symmetric(matrix, n) {
        return Ok(symmetric_eigenvalues(matrix, n)?
            .into_iter()
            .map(f64::abs)
            .collect());
    }
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = (0..n).map(|k| matrix[k * n + i] * matrix[k * n + j]).sum();
        }
    }
    Ok(symmetric_eigenvalues(&gram, n)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect())
}

/// Reduces a row-major square matrix of dimension `n` to a scalar.
pub fn encode_matrix(matrix: &[f64], n: usize, kind: EncodingKind) -> Result<f64> {
    if matrix.len() != n * n {
        return Err(Error::NotSquare {
            rows: n,
            cols: matrix.len().checked_div(n).unwrap_or(matrix.len()),
        });
    }
    if let Some(x) = matrix.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("matrix entry {x}")));
    }
    match kind {
        EncodingKind::MatrixSum => Ok(matrix.iter().sum()),
        EncodingKind::EigenMax => {
            if !is_symmetric(matrix, n) {
                return Err(Error::InvalidParameter(
                    "eigen-max needs a symmetric matrix".into(),
                ));
            }
            Ok(symmetric_eigenvalues(matrix, n)?
                .into_iter()
                .fold(0.0, |m: f64, x| m.max(x.abs())))
        }
        EncodingKind::SvdSum => Ok(singular_values(matrix, n)?.into_iter().sum()),
    }
}

/// [`encode_matrix`] over a slice of rows.
pub fn encode_rows(rows: &[Vec<f64>], kind: EncodingKind) -> Result<f64> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    encode_matrix(&flat, n, kind)
}
