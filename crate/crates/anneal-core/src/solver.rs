//! Lowest eigenpairs of `H(lambda)`.
//!
//! Three paths, all residual-checked against the same bound:
//!
//! - exact diagonal selection when the off-diagonal part vanishes (`lambda = 0`);
//! - dense eigendecomposition up to a dimension threshold (default 4096);
//! - Lanczos with full reorthogonalization otherwise, restarted with
//!   deflation so that degenerate clusters come back with an orthonormal
//!   basis (one eigenvector per restart).
//!
//! Every returned pair satisfies `||H v - E v|| <= tol * ||H||_est`, or the
//! solve fails loudly with the residual it reached.

use crate::error::{CoreError, Result};
use crate::hamiltonian::SparseHamiltonian;

/// One eigenvalue with its (unit-norm) eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigensolver knobs.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Use the dense path when the dimension is at most this (default 4096).
    pub dense_threshold: usize,
    /// Lanczos iteration cap per deflated restart.
    pub max_iterations: usize,
    /// Residual bound relative to the operator norm estimate.
    pub residual_tolerance: f64,
    /// Seed for the deterministic Lanczos starting vectors.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            dense_threshold: 4096,
            max_iterations: 320,
            residual_tolerance: 1e-8,
            seed: 0x5eed,
        }
    }
}

/// The `k` algebraically smallest eigenpairs of `H(lambda)`, ascending.
pub fn lowest_eigenpairs(
    h: &SparseHamiltonian,
    lambda: f64,
    k: usize,
    opts: &SolverOptions,
) -> Result<Vec<EigenPair>> {
    let dim = h.dimension();
    if k > dim {
        return Err(CoreError::TooManyEigenpairs { k, dimension: dim });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let coupling: f64 = h.delta().iter().sum::<f64>() * lambda.abs();
    if coupling == 0.0 {
        return Ok(diagonal_lowest(h, k));
    }
    if dim <= opts.dense_threshold && h.num_qubits() <= 14 {
        dense_lowest(h, lambda, k)
    } else {
        lanczos_lowest(h, lambda, k, opts)
    }
}

/// Exact selection when `H(lambda)` is diagonal.
fn diagonal_lowest(h: &SparseHamiltonian, k: usize) -> Vec<EigenPair> {
    let diag = h.diagonal();
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap().then(a.cmp(&b)));
    order[..k]
        .iter()
        .map(|&s| {
            let mut vector = vec![0.0; diag.len()];
            vector[s] = 1.0;
            EigenPair {
                value: diag[s],
                vector,
            }
        })
        .collect()
}

/// Dense full eigendecomposition, lowest `k` pairs. The trusted oracle path.
pub fn dense_lowest(h: &SparseHamiltonian, lambda: f64, k: usize) -> Result<Vec<EigenPair>> {
    let dim = h.dimension();
    if k > dim {
        return Err(CoreError::TooManyEigenpairs { k, dimension: dim });
    }
    let m = h.to_dense(lambda);
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| CoreError::SolverNotConverged {
            lambda,
            residual: f64::NAN,
            tolerance: f64::NAN,
            iterations: 0,
        })?;
    let s = evd.S();
    let u = evd.U();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| s[a].partial_cmp(&s[b]).unwrap());
    Ok(order[..k]
        .iter()
        .map(|&col| EigenPair {
            value: s[col],
            vector: (0..dim).map(|r| u[(r, col)]).collect(),
        })
        .collect())
}

/// Euclidean residual `||H v - value * v||`.
pub fn residual_norm(h: &SparseHamiltonian, lambda: f64, pair: &EigenPair) -> f64 {
    let hv = h.apply(lambda, &pair.vector).expect("dimension");
    hv.iter()
        .zip(&pair.vector)
        .map(|(a, v)| (a - pair.value * v) * (a - pair.value * v))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// splitmix64-based deterministic starting vector.
fn start_vector(dim: usize, seed: u64, round: usize) -> Vec<f64> {
    let mut state = seed ^ (round as u64).wrapping_mul(0x9e3779b97f4a7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    (0..dim)
        .map(|_| (next() >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect()
}

/// Smallest Ritz pair of the tridiagonal matrix defined by `alpha`, `beta`.
fn smallest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = faer::Mat::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i > 0 {
            t[(i, i - 1)] = beta[i - 1];
            t[(i - 1, i)] = beta[i - 1];
        }
    }
    let evd = t
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("tridiagonal eigendecomposition");
    let s = evd.S();
    let u = evd.U();
    let best = (0..m)
        .min_by(|&a, &b| s[a].partial_cmp(&s[b]).unwrap())
        .unwrap();
    (s[best], (0..m).map(|r| u[(r, best)]).collect())
}

/// Lanczos with full reorthogonalization, restarted with deflation: each
/// round converges the smallest eigenpair orthogonal to everything found so
/// far, so exact multiplicities are resolved one copy per round.
fn lanczos_lowest(
    h: &SparseHamiltonian,
    lambda: f64,
    k: usize,
    opts: &SolverOptions,
) -> Result<Vec<EigenPair>> {
    let scale = h.norm_estimate(lambda).max(1.0);
    let tol = opts.residual_tolerance * scale;
    let mut found: Vec<EigenPair> = Vec::with_capacity(k);
    for round in 0..k {
        let pair = lanczos_one(h, lambda, &found, opts, round, tol)?;
        found.push(pair);
    }
    found.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    Ok(found)
}

fn lanczos_one(
    h: &SparseHamiltonian,
    lambda: f64,
    deflate: &[EigenPair],
    opts: &SolverOptions,
    round: usize,
    tol: f64,
) -> Result<EigenPair> {
    let dim = h.dimension();
    let max_iter = opts.max_iterations.min(dim);
    let breakdown = 1e-13 * h.norm_estimate(lambda).max(1.0);

    let mut v0 = start_vector(dim, opts.seed, round);
    for q in deflate {
        let c = dot(&q.vector, &v0);
        axpy(-c, &q.vector, &mut v0);
    }
    let n0 = norm(&v0);
    if n0 < 1e-12 {
        return Err(CoreError::SolverNotConverged {
            lambda,
            residual: f64::NAN,
            tolerance: tol,
            iterations: 0,
        });
    }
    v0.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; dim];
    let mut last_residual = f64::INFINITY;

    for j in 0..max_iter {
        h.matvec(lambda, &basis[j], &mut w)?;
        let a = dot(&basis[j], &w);
        alpha.push(a);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        // Full reorthogonalization against the Krylov basis and the deflated
        // space; a second pass guards against cancellation.
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &w);
                axpy(-c, u, &mut w);
            }
            for q in deflate {
                let c = dot(&q.vector, &w);
                axpy(-c, &q.vector, &mut w);
            }
        }
        let b = norm(&w);
        let exhausted = b < breakdown;
        let check = exhausted || (j + 1) % 5 == 0 || j + 1 == max_iter;
        if check {
            let (theta, s) = smallest_ritz(&alpha, &beta);
            let estimate = if exhausted { 0.0 } else { b * s[j].abs() };
            if estimate <= 0.5 * tol || exhausted {
                let mut y = vec![0.0f64; dim];
                for (coeff, u) in s.iter().zip(&basis) {
                    axpy(*coeff, u, &mut y);
                }
                for q in deflate {
                    let c = dot(&q.vector, &y);
                    axpy(-c, &q.vector, &mut y);
                }
                let ny = norm(&y);
                if ny > 1e-12 {
                    y.iter_mut().for_each(|x| *x /= ny);
                    let pair = EigenPair {
                        value: theta,
                        vector: y,
                    };
                    let r = residual_norm(h, lambda, &pair);
                    last_residual = r;
                    if r <= tol {
                        return Ok(pair);
                    }
                }
                if exhausted {
                    // Krylov space exhausted without meeting the bound.
                    return Err(CoreError::SolverNotConverged {
                        lambda,
                        residual: last_residual,
                        tolerance: tol,
                        iterations: j + 1,
                    });
                }
            }
        }
        if b < breakdown {
            break;
        }
        beta.push(b);
        let mut next = std::mem::replace(&mut w, vec![0.0; dim]);
        next.iter_mut().for_each(|x| *x /= b);
        basis.push(next);
    }

    Err(CoreError::SolverNotConverged {
        lambda,
        residual: last_residual,
        tolerance: tol,
        iterations: max_iter,
    })
}
