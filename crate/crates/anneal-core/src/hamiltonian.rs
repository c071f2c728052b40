//! The interpolating operator `H(lambda) = H_P + lambda * H_B` in the
//! computational basis, as an implicit sparse symmetric real matrix.
//!
//! `H_P` is diagonal: entry `s` is the exact model energy of the basis state
//! (offset included), computed by a Gray-code walk in scaled-integer
//! arithmetic and rounded once to f64. `H_B = -sum_i delta_i sigma_x^(i)`
//! couples states differing in one bit; those entries are generated on the
//! fly and never materialized. Memory is the binding constraint: the diagonal
//! costs `8 * 2^N` bytes, which caps N around 26.

use crate::brute::ScaledModel;
use crate::error::{CoreError, Result};
use crate::exact::rat_to_f64;
use crate::model::IsingModel;
use rayon::prelude::*;

/// Default qubit cap for building the operator.
pub const DEFAULT_MATVEC_LIMIT: usize = 26;

/// `H(lambda) = H_P + lambda * H_B` with lambda supplied per product.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    num_qubits: usize,
    dimension: usize,
    diagonal: Vec<f64>,
    delta: Vec<f64>,
}

impl SparseHamiltonian {
    /// Build from a model, with the default qubit cap.
    pub fn build(model: &IsingModel) -> Result<Self> {
        Self::build_with_limit(model, DEFAULT_MATVEC_LIMIT)
    }

    pub fn build_with_limit(model: &IsingModel, limit: usize) -> Result<Self> {
        let n = model.num_qubits();
        if n > limit {
            return Err(CoreError::MatvecLimitExceeded {
                num_qubits: n,
                limit,
            });
        }
        let sm = ScaledModel::compile(model)?;
        let dimension = 1usize << n;
        let scale = sm.scale as f64;

        // Gray-code walk, one incremental term update per state. Gray codes
        // of an aligned block of positions fill a contiguous index range
        // (the high bits are constant, the low bits are a bijection), so each
        // memory chunk is produced by exactly one position block.
        let chunk_bits = n.min(14);
        let chunk_len = 1usize << chunk_bits;
        let gray = |i: u64| -> u32 { (i ^ (i >> 1)) as u32 };
        let ungray = |mut g: u64| -> u64 {
            let mut shift = 1;
            while (g >> shift) != 0 {
                g ^= g >> shift;
                shift <<= 1;
            }
            g
        };
        let mut diagonal = vec![0.0f64; dimension];
        diagonal
            .par_chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(c, slice)| {
                let base = c << chunk_bits;
                let start = ungray(c as u64) << chunk_bits;
                let mut mask = gray(start);
                let (mut contrib, mut energy) = sm.contributions(mask);
                for step in 0..slice.len() as u64 {
                    let pos = start + step;
                    if step > 0 {
                        let q = pos.trailing_zeros() as usize;
                        mask ^= 1 << q;
                        for &t in &sm.incident[q] {
                            let t = t as usize;
                            energy -= 2 * contrib[t];
                            contrib[t] = -contrib[t];
                        }
                    }
                    slice[mask as usize - base] = energy as f64 / scale;
                }
            });

        Ok(SparseHamiltonian {
            num_qubits: n,
            dimension,
            diagonal,
            delta: model.delta().iter().map(rat_to_f64).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// `y = H(lambda) x`.
    pub fn matvec(&self, lambda: f64, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dimension || y.len() != self.dimension {
            return Err(CoreError::DimensionMismatch {
                expected: self.dimension,
                got: x.len().min(y.len()),
            });
        }
        let n = self.num_qubits;
        y.par_iter_mut().enumerate().for_each(|(s, out)| {
            let mut acc = self.diagonal[s] * x[s];
            for i in 0..n {
                acc -= lambda * self.delta[i] * x[s ^ (1 << i)];
            }
            *out = acc;
        });
        Ok(())
    }

    /// Allocating convenience wrapper around [`Self::matvec`].
    pub fn apply(&self, lambda: f64, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dimension];
        self.matvec(lambda, x, &mut y)?;
        Ok(y)
    }

    /// Upper bound on the spectral norm (Gershgorin).
    pub fn norm_estimate(&self, lambda: f64) -> f64 {
        let diag_max = self
            .diagonal
            .iter()
            .fold(0.0f64, |acc, &d| acc.max(d.abs()));
        let delta_sum: f64 = self.delta.iter().sum();
        diag_max + lambda.abs() * delta_sum
    }

    /// Dense materialization for oracle comparisons at small dimension.
    pub fn to_dense(&self, lambda: f64) -> faer::Mat<f64> {
        assert!(
            self.num_qubits <= 14,
            "dense materialization limited to 14 qubits"
        );
        let mut m = faer::Mat::zeros(self.dimension, self.dimension);
        for s in 0..self.dimension {
            m[(s, s)] = self.diagonal[s];
            for i in 0..self.num_qubits {
                m[(s, s ^ (1 << i))] = -lambda * self.delta[i];
            }
        }
        m
    }
}
