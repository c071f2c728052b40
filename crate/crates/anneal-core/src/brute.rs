//! Exhaustive brute-force oracles: ground states, degeneracy, local minima.
//!
//! This is the trusted reference for every acceptance check, so it avoids the
//! structures it is meant to verify: plain enumeration of all `2^n` spin
//! configurations, with exact integer arithmetic.
//!
//! Enumeration walks the Gray-code sequence so each step flips a single spin
//! and updates the energy incrementally. Coefficients are pre-scaled by the
//! common denominator into `i128`, which keeps the walk exact and branch-free.

use crate::error::{CoreError, Result};
use crate::exact::Rat;
use crate::model::{IsingModel, SpinConfiguration};
use num_integer::Integer;
use rayon::prelude::*;
use std::collections::HashSet;

/// Limits for exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BruteForceOptions {
    /// Refuse models with more qubits than this (default 24, ~16M configs).
    pub exhaustive_limit: usize,
    /// Cap on explicitly materialized state lists; counts stay exact.
    pub max_stored_states: usize,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            exhaustive_limit: 24,
            max_stored_states: 1 << 16,
        }
    }
}

/// Result of exhaustive enumeration.
///
/// `degeneracy` and `local_minima_count` are always exact; the state lists are
/// truncated to `max_stored_states` entries (flagged by `truncated`) so that
/// massively degenerate models do not exhaust memory.
#[derive(Debug, Clone)]
pub struct BruteForceSummary {
    pub ground_energy: Rat,
    pub ground_states: Vec<SpinConfiguration>,
    pub local_minima: Vec<SpinConfiguration>,
    pub degeneracy: u64,
    pub local_minima_count: u64,
    pub truncated: bool,
}

impl BruteForceSummary {
    /// True when every ground state is also listed among the local minima.
    pub fn ground_states_are_local_minima(&self) -> bool {
        let set: HashSet<_> = self.local_minima.iter().collect();
        self.ground_states.iter().all(|g| set.contains(g))
    }
}

/// Model compiled to scaled-integer form for enumeration and diagonals.
///
/// Every coefficient is multiplied by the common denominator `scale`, so all
/// energies along the walk are exact `i128` values of `scale * E`.
pub(crate) struct ScaledModel {
    pub num_qubits: usize,
    pub scale: i128,
    pub coeffs: Vec<i128>,
    pub support_masks: Vec<u32>,
    pub incident: Vec<Vec<u32>>,
    pub offset_scaled: i128,
}

impl ScaledModel {
    pub fn compile(model: &IsingModel) -> Result<ScaledModel> {
        if model.num_qubits() > 32 {
            return Err(CoreError::ExhaustiveLimitExceeded {
                num_qubits: model.num_qubits(),
                limit: 32,
            });
        }
        let mut scale: i128 = 1;
        for t in model.terms() {
            scale = checked_lcm(scale, *t.coeff().denom())?;
        }
        scale = checked_lcm(scale, *model.offset().denom())?;

        let scaled = |r: &Rat| -> Result<i128> {
            r.numer()
                .checked_mul(scale / r.denom())
                .ok_or(CoreError::ScaleOverflow)
        };

        let mut coeffs = Vec::with_capacity(model.num_terms());
        let mut support_masks = Vec::with_capacity(model.num_terms());
        let mut incident = vec![Vec::new(); model.num_qubits()];
        for (idx, t) in model.terms().iter().enumerate() {
            coeffs.push(scaled(t.coeff())?);
            let mut mask = 0u32;
            for &q in t.support() {
                mask |= 1 << q;
                incident[q].push(idx as u32);
            }
            support_masks.push(mask);
        }
        Ok(ScaledModel {
            num_qubits: model.num_qubits(),
            scale,
            coeffs,
            support_masks,
            incident,
            offset_scaled: scaled(model.offset())?,
        })
    }

    /// Signed contributions of every term at a configuration mask
    /// (bit set = spin −1), plus the total scaled energy.
    pub fn contributions(&self, mask: u32) -> (Vec<i128>, i128) {
        let mut contrib = Vec::with_capacity(self.coeffs.len());
        let mut energy = self.offset_scaled;
        for (c, m) in self.coeffs.iter().zip(&self.support_masks) {
            let s = if (mask & m).count_ones() % 2 == 1 {
                -*c
            } else {
                *c
            };
            contrib.push(s);
            energy += s;
        }
        (contrib, energy)
    }

    /// Flip costs (scaled) of every qubit given the current contributions.
    pub fn flip_costs_into(&self, contrib: &[i128], out: &mut [i128]) {
        out.fill(0);
        for (t, &c) in contrib.iter().enumerate() {
            let mut m = self.support_masks[t];
            while m != 0 {
                let q = m.trailing_zeros() as usize;
                out[q] -= 2 * c;
                m &= m - 1;
            }
        }
    }

    pub fn to_rat(&self, scaled: i128) -> Rat {
        Rat::new(scaled, self.scale)
    }
}

fn checked_lcm(a: i128, b: i128) -> Result<i128> {
    let b = b.abs();
    let g = a.gcd(&b);
    (a / g).checked_mul(b).ok_or(CoreError::ScaleOverflow)
}

/// Per-chunk accumulator for the parallel walk.
struct ChunkResult {
    min_energy: i128,
    min_count: u64,
    min_masks: Vec<u32>,
    strict_minima: Vec<u32>,
    plateau_candidates: Vec<u32>,
}

/// Walk Gray codes over `[start, end)` positions, classifying configurations.
fn walk_chunk(sm: &ScaledModel, start: u64, end: u64, store_cap: usize) -> ChunkResult {
    let gray = |i: u64| -> u32 { (i ^ (i >> 1)) as u32 };
    let n = sm.num_qubits;
    let mut mask = gray(start);
    let (mut contrib, mut energy) = sm.contributions(mask);
    let mut flips = vec![0i128; n];

    let mut res = ChunkResult {
        min_energy: i128::MAX,
        min_count: 0,
        min_masks: Vec::new(),
        strict_minima: Vec::new(),
        plateau_candidates: Vec::new(),
    };

    let mut pos = start;
    loop {
        if energy < res.min_energy {
            res.min_energy = energy;
            res.min_count = 1;
            res.min_masks.clear();
            res.min_masks.push(mask);
        } else if energy == res.min_energy {
            res.min_count += 1;
            if res.min_masks.len() < store_cap {
                res.min_masks.push(mask);
            }
        }

        sm.flip_costs_into(&contrib, &mut flips);
        let mut downhill = false;
        let mut flat = false;
        for &f in &flips[..n] {
            if f < 0 {
                downhill = true;
                break;
            }
            if f == 0 {
                flat = true;
            }
        }
        if !downhill {
            if flat {
                res.plateau_candidates.push(mask);
            } else {
                res.strict_minima.push(mask);
            }
        }

        pos += 1;
        if pos >= end {
            break;
        }
        // Between Gray positions pos-1 and pos, bit trailing_zeros(pos) flips.
        let q = pos.trailing_zeros() as usize;
        mask ^= 1 << q;
        for &t in &sm.incident[q] {
            let t = t as usize;
            energy -= 2 * contrib[t];
            contrib[t] = -contrib[t];
        }
    }
    res
}

/// Exhaustively enumerate all configurations of a model.
///
/// A configuration is a local minimum iff no single flip strictly decreases
/// the energy *and* it is not connected through zero-cost flips to any
/// configuration with a strictly decreasing flip (flood fill over equal-energy
/// neighbors, the plateau rule).
pub fn brute_force(model: &IsingModel, opts: &BruteForceOptions) -> Result<BruteForceSummary> {
    let n = model.num_qubits();
    if n > opts.exhaustive_limit {
        return Err(CoreError::ExhaustiveLimitExceeded {
            num_qubits: n,
            limit: opts.exhaustive_limit,
        });
    }
    let sm = ScaledModel::compile(model)?;
    let total: u64 = 1u64 << n;

    let chunk_bits = n.saturating_sub(6).min(16);
    let chunk_len: u64 = total >> (n - chunk_bits.min(n)).min(63);
    let num_chunks = if chunk_len == 0 { 1 } else { total / chunk_len };
    let chunks: Vec<(u64, u64)> = (0..num_chunks)
        .map(|c| (c * chunk_len.max(1), ((c + 1) * chunk_len.max(1)).min(total)))
        .filter(|(s, e)| e > s)
        .collect();

    let results: Vec<ChunkResult> = chunks
        .par_iter()
        .map(|&(s, e)| walk_chunk(&sm, s, e, opts.max_stored_states))
        .collect();

    let min_energy = results.iter().map(|r| r.min_energy).min().unwrap();
    let mut degeneracy = 0u64;
    let mut ground_masks: Vec<u32> = Vec::new();
    let mut strict_minima: Vec<u32> = Vec::new();
    let mut plateau_candidates: Vec<u32> = Vec::new();
    let mut truncated = false;
    for r in &results {
        if r.min_energy == min_energy {
            degeneracy += r.min_count;
            for &m in &r.min_masks {
                if ground_masks.len() < opts.max_stored_states {
                    ground_masks.push(m);
                } else {
                    truncated = true;
                }
            }
            if (r.min_count as usize) > r.min_masks.len() {
                truncated = true;
            }
        }
        strict_minima.extend_from_slice(&r.strict_minima);
        plateau_candidates.extend_from_slice(&r.plateau_candidates);
    }
    ground_masks.sort_unstable();

    // Plateau resolution: flood fill each candidate's zero-cost component and
    // accept it only if no member of the component can strictly descend.
    let mut local_masks: Vec<u32> = strict_minima;
    let mut local_count = local_masks.len() as u64;
    let mut visited: HashSet<u32> = HashSet::new();
    let mut flips = vec![0i128; n];
    for &seed in &plateau_candidates {
        if visited.contains(&seed) {
            continue;
        }
        let mut component = vec![seed];
        let mut queue = vec![seed];
        visited.insert(seed);
        let mut escapes = false;
        while let Some(cur) = queue.pop() {
            let (contrib, _) = sm.contributions(cur);
            sm.flip_costs_into(&contrib, &mut flips);
            for q in 0..n {
                if flips[q] < 0 {
                    escapes = true;
                } else if flips[q] == 0 {
                    let next = cur ^ (1 << q);
                    if visited.insert(next) {
                        component.push(next);
                        queue.push(next);
                    }
                }
            }
            if escapes {
                break;
            }
        }
        if !escapes {
            local_count += component.len() as u64;
            for m in component {
                if local_masks.len() < opts.max_stored_states {
                    local_masks.push(m);
                } else {
                    truncated = true;
                }
            }
        }
    }
    local_masks.sort_unstable();

    Ok(BruteForceSummary {
        ground_energy: sm.to_rat(min_energy),
        ground_states: ground_masks
            .iter()
            .map(|&m| SpinConfiguration::from_index(m as usize, n))
            .collect(),
        local_minima: local_masks
            .iter()
            .map(|&m| SpinConfiguration::from_index(m as usize, n))
            .collect(),
        degeneracy,
        local_minima_count: local_count,
        truncated,
    })
}

/// Find a configuration with strictly positive energy and no strictly
/// improving single flip, if one exists. Exhaustive.
///
/// Used to check that gadget-only models have no positive-energy traps.
pub fn find_positive_energy_trap(
    model: &IsingModel,
    opts: &BruteForceOptions,
) -> Result<Option<SpinConfiguration>> {
    let n = model.num_qubits();
    if n > opts.exhaustive_limit {
        return Err(CoreError::ExhaustiveLimitExceeded {
            num_qubits: n,
            limit: opts.exhaustive_limit,
        });
    }
    let sm = ScaledModel::compile(model)?;
    let total: u64 = 1u64 << n;
    let gray = |i: u64| -> u32 { (i ^ (i >> 1)) as u32 };
    let mut mask = 0u32;
    let (mut contrib, mut energy) = sm.contributions(mask);
    let mut flips = vec![0i128; n];
    for pos in 0..total {
        if pos > 0 {
            let q = pos.trailing_zeros() as usize;
            mask = gray(pos);
            for &t in &sm.incident[q] {
                let t = t as usize;
                energy -= 2 * contrib[t];
                contrib[t] = -contrib[t];
            }
        }
        if energy > 0 {
            sm.flip_costs_into(&contrib, &mut flips);
            if !flips[..n].iter().any(|&f| f < 0) {
                return Ok(Some(SpinConfiguration::from_index(mask as usize, n)));
            }
        }
    }
    Ok(None)
}
