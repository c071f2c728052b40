//! Spectrum sweeps over the interpolation parameter.
//!
//! The sweep walks a decreasing lambda grid (annealing path end-first),
//! computes the k lowest eigenpairs at every point, and tracks branches by
//! eigenvector overlap between adjacent points. Degenerate clusters are
//! matched as subspaces: an eigensolver may return any orthonormal basis of a
//! degenerate eigenspace, so overlaps are accumulated per cluster rather than
//! per vector.
//!
//! The reported minimum gap excludes branches that merge into the final
//! ground-state cluster at lambda = 0 — the construction makes the final
//! ground state massively degenerate on purpose, and those branches head to
//! degeneracy rather than representing an avoided crossing.

use crate::error::{CoreError, Result};
use crate::exact::rat_to_f64;
use crate::gadget::GadgetParams;
use crate::hamiltonian::SparseHamiltonian;
use crate::model::IsingModel;
use crate::solver::{lowest_eigenpairs, EigenPair, SolverOptions};
use serde::{Deserialize, Serialize};
use std::io;

/// Absolute tolerance for grouping eigenvalues into degenerate clusters.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Grid spacing of the lambda schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    /// Geometric from lambda_max down to lambda_max * 1e-6, plus lambda = 0.
    Geometric,
    /// Evenly spaced from lambda_max down to 0 inclusive.
    Linear,
}

/// Sweep schedule: lambda range, resolution, and tracked branch count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSchedule {
    pub lambda_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub k: usize,
}

impl SweepSchedule {
    pub fn new(lambda_max: f64, points: usize, spacing: Spacing, k: usize) -> Result<Self> {
        if !(lambda_max > 0.0) {
            return Err(CoreError::InvalidParameter(
                "lambda_max must be positive".into(),
            ));
        }
        if points < 2 {
            return Err(CoreError::InvalidParameter(
                "schedule needs at least 2 points".into(),
            ));
        }
        if k < 2 {
            return Err(CoreError::InvalidParameter(
                "at least 2 branches must be tracked".into(),
            ));
        }
        Ok(SweepSchedule {
            lambda_max,
            points,
            spacing,
            k,
        })
    }

    /// Geometric schedule with the default 200-point resolution.
    pub fn geometric(lambda_max: f64, k: usize) -> Result<Self> {
        SweepSchedule::new(lambda_max, 200, Spacing::Geometric, k)
    }

    /// Default lambda range for a transformed model: `4 * a * b * m`.
    pub fn lambda_max_for(params: &GadgetParams, unit_terms: usize) -> f64 {
        4.0 * params.a as f64 * rat_to_f64(&params.b) * unit_terms.max(1) as f64
    }

    /// The lambda grid, strictly decreasing, ending at 0.
    pub fn grid(&self) -> Vec<f64> {
        let mut grid = Vec::with_capacity(self.points + 1);
        match self.spacing {
            Spacing::Geometric => {
                let ratio = 1e-6f64.powf(1.0 / (self.points - 1) as f64);
                let mut lambda = self.lambda_max;
                for _ in 0..self.points {
                    grid.push(lambda);
                    lambda *= ratio;
                }
                grid.push(0.0);
            }
            Spacing::Linear => {
                for j in 0..self.points {
                    let frac = 1.0 - j as f64 / (self.points - 1) as f64;
                    grid.push(self.lambda_max * frac);
                }
            }
        }
        grid
    }
}

/// One grid point of the sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    /// Eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// Branch label of each column; labels are stable across the sweep.
    pub branches: Vec<usize>,
    /// Minimum matched subspace overlap against the previous grid point.
    pub successive_overlap: f64,
    /// Naive gap `E_1 - E_0`.
    pub gap: f64,
    /// Gap from `E_0` to the lowest branch outside the final ground cluster.
    pub excluded_gap: Option<f64>,
}

/// A detected branch-order change or gap dip.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub lambda: f64,
    pub branches: (usize, usize),
    pub gap: f64,
    /// True when branch labels swapped order (eigenvector overlap evidence).
    pub overlap_swap: bool,
}

/// Location and size of a gap minimum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GapRecord {
    pub lambda_star: f64,
    pub g_min: f64,
}

/// Minimum-gap record of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinGap {
    /// Gap with final-degeneracy branches excluded; `None` when every tracked
    /// branch merges into the final ground cluster (increase k).
    pub excluded: Option<GapRecord>,
    /// Plain `E_1 - E_0` minimum, no exclusion.
    pub naive: GapRecord,
    /// Branch labels belonging to the final ground-state cluster.
    pub excluded_labels: Vec<usize>,
}

/// Full sweep result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSweep {
    pub rows: Vec<SweepRow>,
    pub min_gap: MinGap,
    pub crossing_events: Vec<CrossingEvent>,
    pub k: usize,
}

/// Summary for JSON output (rows go to CSV instead).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub min_gap: MinGap,
    pub crossing_events: Vec<CrossingEvent>,
    pub points: usize,
    pub k: usize,
}

impl SpectrumSweep {
    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            min_gap: self.min_gap.clone(),
            crossing_events: self.crossing_events.clone(),
            points: self.rows.len(),
            k: self.k,
        }
    }

    /// `lambda,e0,...,e{k-1},gap,excluded_gap` with full float precision.
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "lambda")?;
        for i in 0..self.k {
            write!(w, ",e{i}")?;
        }
        writeln!(w, ",gap,excluded_gap")?;
        for row in &self.rows {
            write!(w, "{}", row.lambda)?;
            for e in &row.energies {
                write!(w, ",{e}")?;
            }
            match row.excluded_gap {
                Some(g) => writeln!(w, ",{},{}", row.gap, g)?,
                None => writeln!(w, ",{},nan", row.gap)?,
            }
        }
        Ok(())
    }
}

/// Group ascending energies into degenerate clusters (index ranges).
fn clusters(energies: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=energies.len() {
        if i == energies.len() || energies[i] - energies[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

struct MatchOutcome {
    labels: Vec<usize>,
    min_overlap: f64,
    swaps: Vec<(usize, usize)>,
}

/// Match previous branches onto current eigenpairs, subspace-aware.
fn match_branches(
    prev: &[EigenPair],
    prev_labels: &[usize],
    curr: &[EigenPair],
) -> MatchOutcome {
    let k = prev.len();
    let curr_energies: Vec<f64> = curr.iter().map(|p| p.value).collect();
    let cluster_ranges = clusters(&curr_energies, CLUSTER_TOL);

    // overlap(i, c) = || P_c v_i ||, the norm of the projection of previous
    // branch i onto current cluster c.
    let mut scored: Vec<(f64, usize, usize)> = Vec::with_capacity(k * cluster_ranges.len());
    for (i, p) in prev.iter().enumerate() {
        for (c, range) in cluster_ranges.iter().enumerate() {
            let mut sq = 0.0;
            for j in range.clone() {
                let d: f64 = p
                    .vector
                    .iter()
                    .zip(&curr[j].vector)
                    .map(|(a, b)| a * b)
                    .sum();
                sq += d * d;
            }
            scored.push((sq.sqrt(), i, c));
        }
    }
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut capacity: Vec<usize> = cluster_ranges.iter().map(|r| r.len()).collect();
    let mut assigned_cluster: Vec<Option<usize>> = vec![None; k];
    let mut assigned_overlap: Vec<f64> = vec![0.0; k];
    for (score, i, c) in scored {
        if assigned_cluster[i].is_none() && capacity[c] > 0 {
            assigned_cluster[i] = Some(c);
            assigned_overlap[i] = score;
            capacity[c] -= 1;
        }
    }

    // Within a cluster the member order is meaningless (equal eigenvalues);
    // hand out columns by ascending previous label for determinism.
    let mut labels = vec![usize::MAX; k];
    for (c, range) in cluster_ranges.iter().enumerate() {
        let mut members: Vec<usize> = (0..k).filter(|&i| assigned_cluster[i] == Some(c)).collect();
        members.sort_by_key(|&i| prev_labels[i]);
        for (slot, &i) in range.clone().zip(&members) {
            labels[slot] = prev_labels[i];
        }
    }

    // Order inversions between different clusters are crossings.
    let position = |lbls: &[usize], l: usize| lbls.iter().position(|&x| x == l).unwrap();
    let mut swaps = Vec::new();
    let col_cluster = |col: usize| {
        cluster_ranges
            .iter()
            .position(|r| r.contains(&col))
            .unwrap()
    };
    for a in 0..k {
        for b in (a + 1)..k {
            let (la, lb) = (prev_labels[a], prev_labels[b]);
            let (ca, cb) = (position(&labels, la), position(&labels, lb));
            if col_cluster(ca) != col_cluster(cb) && (ca < cb) != (a < b) {
                swaps.push((la.min(lb), la.max(lb)));
            }
        }
    }

    let min_overlap = assigned_overlap
        .iter()
        .fold(f64::INFINITY, |acc, &o| acc.min(o));
    MatchOutcome {
        labels,
        min_overlap,
        swaps,
    }
}

fn solve_point(
    h: &SparseHamiltonian,
    lambda: f64,
    k: usize,
    opts: &SolverOptions,
) -> Result<Vec<EigenPair>> {
    lowest_eigenpairs(h, lambda, k, opts)
}

fn make_row(
    lambda: f64,
    pairs: &[EigenPair],
    prev: Option<(&[EigenPair], &[usize])>,
) -> (SweepRow, Vec<(usize, usize)>) {
    let energies: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let k = pairs.len();
    let (labels, overlap, swaps) = match prev {
        None => ((0..k).collect(), 1.0, Vec::new()),
        Some((prev_pairs, prev_labels)) => {
            let m = match_branches(prev_pairs, prev_labels, pairs);
            (m.labels, m.min_overlap, m.swaps)
        }
    };
    let gap = energies[1] - energies[0];
    (
        SweepRow {
            lambda,
            energies,
            branches: labels,
            successive_overlap: overlap,
            gap,
            excluded_gap: None,
        },
        swaps,
    )
}

fn excluded_gap_of(row: &SweepRow, excluded: &[usize]) -> Option<f64> {
    // Gap from the instantaneous ground state (column 0) to the lowest other
    // branch not heading into the final ground cluster. Column 0 itself never
    // counts as its own partner: before an anticrossing the instantaneous
    // ground may be the branch that ends at the local minimum.
    let e0 = row.energies[0];
    row.branches
        .iter()
        .zip(&row.energies)
        .skip(1)
        .filter(|(label, _)| !excluded.contains(label))
        .map(|(_, e)| e - e0)
        .fold(None, |acc: Option<f64>, g| {
            Some(acc.map_or(g, |a| a.min(g)))
        })
}

/// Sweep a model: build `H`, walk the schedule, track branches, find the gap.
pub fn sweep_model(
    model: &IsingModel,
    schedule: &SweepSchedule,
    opts: &SolverOptions,
) -> Result<SpectrumSweep> {
    let h = SparseHamiltonian::build(model)?;
    sweep(&h, schedule, opts)
}

/// Sweep an already-built operator.
pub fn sweep(
    h: &SparseHamiltonian,
    schedule: &SweepSchedule,
    opts: &SolverOptions,
) -> Result<SpectrumSweep> {
    let k = schedule.k;
    if k > h.dimension() {
        return Err(CoreError::TooManyEigenpairs {
            k,
            dimension: h.dimension(),
        });
    }
    let grid = schedule.grid();
    let mut rows: Vec<SweepRow> = Vec::with_capacity(grid.len());
    let mut events: Vec<CrossingEvent> = Vec::new();
    let mut prev: Option<Vec<EigenPair>> = None;

    for &lambda in &grid {
        let pairs = solve_point(h, lambda, k, opts)?;
        let prev_ref = prev
            .as_deref()
            .map(|p| (p, rows.last().unwrap().branches.as_slice()));
        let (row, swaps) = make_row(lambda, &pairs, prev_ref);
        for (a, b) in swaps {
            let col_a = row.branches.iter().position(|&l| l == a).unwrap();
            let col_b = row.branches.iter().position(|&l| l == b).unwrap();
            events.push(CrossingEvent {
                lambda,
                branches: (a, b),
                gap: (row.energies[col_a] - row.energies[col_b]).abs(),
                overlap_swap: true,
            });
        }
        rows.push(row);
        prev = Some(pairs);
    }
    drop(prev);

    // Branches whose final energies coincide with the ground energy at
    // lambda = 0 head to the intentional final degeneracy.
    let last = rows.last().unwrap();
    let e0_final = last.energies[0];
    let mut excluded_labels: Vec<usize> = last
        .branches
        .iter()
        .zip(&last.energies)
        .filter(|(_, &e)| e - e0_final <= CLUSTER_TOL)
        .map(|(&l, _)| l)
        .collect();
    excluded_labels.sort_unstable();

    for row in &mut rows {
        row.excluded_gap = excluded_gap_of(row, &excluded_labels);
    }

    // Adaptive refinement: when the reported gap dips by more than 2x between
    // adjacent points, bisect around the minimum (up to 12 extra points).
    let reported = |row: &SweepRow| row.excluded_gap.unwrap_or(row.gap);
    let mut budget = 12usize;
    while budget > 0 {
        let j = match (0..rows.len()).min_by(|&a, &b| {
            reported(&rows[a])
                .partial_cmp(&reported(&rows[b]))
                .unwrap()
        }) {
            Some(j) => j,
            None => break,
        };
        let gj = reported(&rows[j]);
        let left_drop = j > 0 && reported(&rows[j - 1]) > 2.0 * gj;
        let right_drop = j + 1 < rows.len() && reported(&rows[j + 1]) > 2.0 * gj;
        if !left_drop && !right_drop {
            break;
        }
        // Bisect the wider neighboring interval in lambda.
        let left_width = if j > 0 {
            rows[j - 1].lambda - rows[j].lambda
        } else {
            0.0
        };
        let right_width = if j + 1 < rows.len() {
            rows[j].lambda - rows[j + 1].lambda
        } else {
            0.0
        };
        let (hi_idx, lo_idx) = if left_width >= right_width {
            (j - 1, j)
        } else {
            (j, j + 1)
        };
        let (hi, lo) = (rows[hi_idx].lambda, rows[lo_idx].lambda);
        let mid = if matches!(schedule.spacing, Spacing::Geometric) && lo > 0.0 {
            (hi * lo).sqrt()
        } else {
            0.5 * (hi + lo)
        };
        if !(mid < hi && mid > lo) {
            break;
        }
        // Re-solve the anchor (deterministic) to recover its eigenvectors.
        let anchor_pairs = solve_point(h, hi, k, opts)?;
        let mid_pairs = solve_point(h, mid, k, opts)?;
        let (mut row, swaps) = make_row(
            mid,
            &mid_pairs,
            Some((&anchor_pairs, rows[hi_idx].branches.as_slice())),
        );
        for (a, b) in swaps {
            let col_a = row.branches.iter().position(|&l| l == a).unwrap();
            let col_b = row.branches.iter().position(|&l| l == b).unwrap();
            events.push(CrossingEvent {
                lambda: mid,
                branches: (a, b),
                gap: (row.energies[col_a] - row.energies[col_b]).abs(),
                overlap_swap: true,
            });
        }
        row.excluded_gap = excluded_gap_of(&row, &excluded_labels);
        rows.insert(lo_idx, row);
        budget -= 1;
    }

    // Gap-dip events (local minima falling below half their neighbors).
    for j in 1..rows.len().saturating_sub(1) {
        let g = reported(&rows[j]);
        if g < 0.5 * reported(&rows[j - 1]) && g < 0.5 * reported(&rows[j + 1]) {
            let row = &rows[j];
            let ground = row.branches[0];
            let partner = row
                .branches
                .iter()
                .skip(1)
                .find(|l| !excluded_labels.contains(l))
                .copied()
                .unwrap_or_else(|| row.branches[1]);
            events.push(CrossingEvent {
                lambda: row.lambda,
                branches: (ground.min(partner), ground.max(partner)),
                gap: g,
                overlap_swap: false,
            });
        }
    }
    events.sort_by(|a, b| b.lambda.partial_cmp(&a.lambda).unwrap());

    let naive = rows
        .iter()
        .min_by(|a, b| a.gap.partial_cmp(&b.gap).unwrap())
        .map(|r| GapRecord {
            lambda_star: r.lambda,
            g_min: r.gap,
        })
        .unwrap();
    let excluded = rows
        .iter()
        .filter_map(|r| r.excluded_gap.map(|g| (r.lambda, g)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(lambda_star, g_min)| GapRecord { lambda_star, g_min });

    let min_gap = MinGap {
        excluded,
        naive,
        excluded_labels,
    };
    Ok(SpectrumSweep {
        rows,
        min_gap,
        crossing_events: events,
        k,
    })
}

/// The minimum-gap record of a finished sweep.
pub fn min_gap(sweep: &SpectrumSweep) -> &MinGap {
    &sweep.min_gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rat;
    use crate::gadget::{apply_construction, GadgetParams, Locality};
    use crate::model::{IsingModel, Term};
    use crate::solver::dense_lowest;
    use num_traits::One;

    fn one() -> Rat {
        Rat::one()
    }

    fn single_field() -> IsingModel {
        IsingModel::new(1, vec![Term::field(0, -one())]).unwrap()
    }

    #[test]
    fn single_qubit_gap_is_analytic() {
        let schedule = SweepSchedule::new(4.0, 40, Spacing::Geometric, 2).unwrap();
        let s = sweep_model(&single_field(), &schedule, &SolverOptions::default()).unwrap();
        for row in &s.rows {
            let expect = 2.0 * (1.0 + row.lambda * row.lambda).sqrt();
            assert!(
                (row.gap - expect).abs() < 1e-10,
                "lambda={} gap={} expect={expect}",
                row.lambda,
                row.gap
            );
        }
        let mg = &s.min_gap;
        assert!((mg.naive.g_min - 2.0).abs() < 1e-10);
        assert_eq!(mg.naive.lambda_star, 0.0);
        // Nondegenerate final ground state: exclusion changes nothing.
        assert_eq!(mg.excluded_labels, vec![0]);
        let ex = mg.excluded.unwrap();
        assert!((ex.g_min - 2.0).abs() < 1e-10);
    }

    #[test]
    fn grid_is_strictly_decreasing_with_zero_endpoint() {
        for spacing in [Spacing::Geometric, Spacing::Linear] {
            let schedule = SweepSchedule::new(8.0, 25, spacing, 2).unwrap();
            let grid = schedule.grid();
            assert_eq!(*grid.last().unwrap(), 0.0);
            assert_eq!(grid[0], 8.0);
            for w in grid.windows(2) {
                assert!(w[0] > w[1]);
            }
        }
    }

    #[test]
    fn transformed_single_field_excludes_final_cluster() {
        let (t, _) = apply_construction(
            &single_field(),
            &GadgetParams::new(1, Rat::one(), Locality::ThreeLocal).unwrap(),
        )
        .unwrap();
        let schedule = SweepSchedule::new(4.0, 60, Spacing::Geometric, 3).unwrap();
        let s = sweep_model(&t, &schedule, &SolverOptions::default()).unwrap();
        // Twofold final degeneracy is excluded; the naive gap collapses to 0
        // at lambda = 0 while the reported gap stays finite.
        assert_eq!(s.min_gap.excluded_labels.len(), 2);
        assert!(s.min_gap.naive.g_min < 1e-9);
        let ex = s.min_gap.excluded.unwrap();
        assert!(ex.g_min > 0.5, "excluded gap {} too small", ex.g_min);
    }

    #[test]
    fn ground_branch_slope_matches_first_order_ladder() {
        // One original qubit plus a in {0, 1, 2} extras at b = 1: the ground
        // branch slope at lambda -> 0 is 0, -1, -2.
        for (a, expect) in [(0usize, 0.0f64), (1, -1.0), (2, -2.0)] {
            let model = single_field();
            let m = if a == 0 {
                model
            } else {
                apply_construction(
                    &model,
                    &GadgetParams::new(a, Rat::one(), Locality::ThreeLocal).unwrap(),
                )
                .unwrap()
                .0
            };
            let h = SparseHamiltonian::build(&m).unwrap();
            let hh = 1e-4;
            let e = |lambda: f64| dense_lowest(&h, lambda, 1).unwrap()[0].value;
            // Second-order one-sided difference at lambda = 0.
            let slope = (-3.0 * e(0.0) + 4.0 * e(hh) - e(2.0 * hh)) / (2.0 * hh);
            assert!(
                (slope - expect).abs() < 1e-5,
                "a={a}: slope {slope} expect {expect}"
            );
        }
    }

    #[test]
    fn branch_overlap_stays_high_on_smooth_spectra() {
        let m = IsingModel::new(
            3,
            vec![
                Term::field(0, -one()),
                Term::coupler(0, 1, -one()),
                Term::coupler(1, 2, one()),
            ],
        )
        .unwrap();
        let schedule = SweepSchedule::new(3.0, 50, Spacing::Geometric, 4).unwrap();
        let s = sweep_model(&m, &schedule, &SolverOptions::default()).unwrap();
        for row in &s.rows {
            assert!(
                row.successive_overlap >= 0.5,
                "overlap {} at lambda {}",
                row.successive_overlap,
                row.lambda
            );
        }
    }

    #[test]
    fn eigenvalues_are_ordered_and_deterministic() {
        let m = IsingModel::new(
            2,
            vec![Term::field(0, one()), Term::coupler(0, 1, -one())],
        )
        .unwrap();
        let schedule = SweepSchedule::new(2.0, 20, Spacing::Linear, 3).unwrap();
        let s1 = sweep_model(&m, &schedule, &SolverOptions::default()).unwrap();
        let s2 = sweep_model(&m, &schedule, &SolverOptions::default()).unwrap();
        for (r1, r2) in s1.rows.iter().zip(&s2.rows) {
            assert_eq!(r1.energies, r2.energies);
            assert_eq!(r1.branches, r2.branches);
            for w in r1.energies.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
        }
    }

    #[test]
    fn weyl_monotonicity_of_gadget_terms() {
        // Adding the (positive semidefinite, diagonal) gadget penalty never
        // lowers any eigenvalue at fixed lambda.
        let model = IsingModel::new(
            2,
            vec![Term::field(0, -one()), Term::coupler(0, 1, one())],
        )
        .unwrap();
        let (t, report) = apply_construction(
            &model,
            &GadgetParams::new(1, Rat::one(), Locality::ThreeLocal).unwrap(),
        )
        .unwrap();
        // Same qubits and driver, original terms only.
        let mut bare = IsingModel::new(t.num_qubits(), model.terms().to_vec()).unwrap();
        bare.set_delta(t.delta().to_vec()).unwrap();
        assert!(!report.extra_qubits.is_empty());

        let ht = SparseHamiltonian::build(&t).unwrap();
        let hb = SparseHamiltonian::build(&bare).unwrap();
        for &lambda in &[0.0, 0.5, 2.0] {
            let et = dense_lowest(&ht, lambda, ht.dimension()).unwrap();
            let eb = dense_lowest(&hb, lambda, hb.dimension()).unwrap();
            for (a, b) in et.iter().zip(&eb) {
                assert!(a.value >= b.value - 1e-9);
            }
        }
    }

    #[test]
    fn csv_has_expected_header_and_rows() {
        let schedule = SweepSchedule::new(1.0, 5, Spacing::Linear, 2).unwrap();
        let s = sweep_model(&single_field(), &schedule, &SolverOptions::default()).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "lambda,e0,e1,gap,excluded_gap");
        assert_eq!(lines.count(), s.rows.len());
    }
}
