//! Degeneracy-amplifying compiler passes.
//!
//! The pipeline turns an arbitrary Ising model into one whose ground state is
//! exponentially more degenerate than every excited state, without changing
//! any original energy:
//!
//! 1. [`unitize`] — split each coefficient `c` into `floor(|c|)` unit terms
//!    plus a fractional remainder group handled through transverse weights;
//! 2. [`ferro_pair_preprocess`] — replace every possibly flip-degenerate qubit
//!    by a strongly ferromagnetically coupled pair, so no single-flip
//!    degeneracies remain anywhere;
//! 3. [`apply_construction`] — per unit term, add `a` extra qubits whose flips
//!    are free exactly when the term is satisfied and cost `2b` otherwise.
//!    Couplers either expand through a 3-local product or, in 2-local mode,
//!    through the 4-qubit penalty functions `f_plus` / `f_minus` (one
//!    auxiliary qubit per extra).
//!
//! Every added qubit and term is traced back to its source in a
//! [`TransformReport`].

use crate::error::{CoreError, Result};
use crate::exact::{self, Rat};
use crate::model::{IsingModel, SpinConfiguration, Term};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Output locality of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locality {
    /// Couplers expand through one 3-local ZZZ term per extra qubit.
    ThreeLocal,
    /// Couplers expand through the 4-qubit 2-local penalty functions.
    TwoLocal,
}

/// Gadget strength parameters: `a` extra qubits per term, penalty `2b` for
/// breaking an unsatisfied term's degeneracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetParams {
    pub a: usize,
    #[serde(with = "exact::rat_serde")]
    pub b: Rat,
    pub locality: Locality,
}

impl GadgetParams {
    pub fn new(a: usize, b: Rat, locality: Locality) -> Result<Self> {
        if a < 1 {
            return Err(CoreError::InvalidParameter("a must be at least 1".into()));
        }
        if !b.is_positive() {
            return Err(CoreError::InvalidParameter("b must be positive".into()));
        }
        Ok(GadgetParams { a, b, locality })
    }

    /// The analysis choice `a = b = n^2` (floored at 2). Far larger than
    /// needed in practice; demos use small explicit values instead.
    pub fn paper_default(num_qubits: usize) -> Self {
        let v = (num_qubits * num_qubits).max(2);
        GadgetParams {
            a: v,
            b: Rat::from_integer(v as i128),
            locality: Locality::ThreeLocal,
        }
    }
}

/// Role of an added qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraQubitKind {
    /// Carries the degeneracy: free to flip iff the source term is satisfied.
    Degeneracy,
    /// Auxiliary qubit of the 2-local coupler gadget.
    AuxiliaryStar,
}

/// What an added qubit or gadget term was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraSource {
    /// Index of a term in the construction's input model.
    Term(usize),
    /// Index into `TransformReport::fractional_groups`.
    Fractional(usize),
}

/// One added qubit with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtraQubit {
    /// Index in the transformed model.
    pub qubit: usize,
    pub source: ExtraSource,
    /// Support of the source term (construction-input qubit indices).
    pub source_support: Vec<usize>,
    /// Sign of the source term's (unit or sign-normalized) coefficient.
    pub source_sign: i8,
    /// Replica index `k` in `1..=a`.
    pub replica: usize,
    pub kind: ExtraQubitKind,
}

/// Provenance of one output term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermProvenance {
    /// Carried over unchanged; the index refers to the construction input.
    Original { source_term: usize },
    /// Emitted by the gadget expansion of `source`, replica `replica`.
    Gadget { source: ExtraSource, replica: usize },
}

/// Where a construction-input term originated before preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitOrigin {
    /// Unit split of the user model's term with this index.
    UserTerm(usize),
    /// Ferromagnetic coupling added for `TransformReport::ferro_pairs[i]`.
    FerroPair(usize),
}

/// Fractional remainder of a non-integer coefficient.
///
/// The remainder never appears as an energy term: it enters only through the
/// transverse weights of the extra qubits attached to the sign-normalized
/// source term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalGroup {
    /// Index of the source term in the user model.
    pub source_term: usize,
    pub support: Vec<usize>,
    pub sign: i8,
    #[serde(with = "exact::rat_serde")]
    pub remainder: Rat,
}

/// A qubit duplicated by the ferro-pair pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FerroPair {
    pub original: usize,
    pub partner: usize,
    /// Number of identical `J = -1` couplers holding the pair together.
    pub strength: usize,
}

/// Full provenance of a transformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub params: GadgetParams,
    /// Qubit count of the user model, before any pass.
    pub source_qubits: usize,
    /// Qubit count of the construction input (after ferro-pair duplication).
    pub original_qubits: usize,
    pub extra_qubits: Vec<ExtraQubit>,
    /// One entry per output term, in output order.
    pub term_provenance: Vec<TermProvenance>,
    pub fractional_groups: Vec<FractionalGroup>,
    pub ferro_pairs: Vec<FerroPair>,
    /// Construction-input term index -> origin in the user model.
    pub unit_origin: Vec<UnitOrigin>,
    /// Constant energy folded out of the gadget expansions.
    #[serde(with = "exact::rat_serde")]
    pub gadget_offset: Rat,
}

impl TransformReport {
    /// Total number of added qubits.
    pub fn extra_qubit_count(&self) -> usize {
        self.extra_qubits.len()
    }

    /// Added qubits carrying degeneracy (excludes auxiliary stars).
    pub fn degeneracy_qubits(&self) -> impl Iterator<Item = &ExtraQubit> {
        self.extra_qubits
            .iter()
            .filter(|e| e.kind == ExtraQubitKind::Degeneracy)
    }

    /// Map a user-model configuration through the ferro-pair duplication:
    /// each partner copies its original's spin.
    pub fn lift(&self, config: &SpinConfiguration) -> Result<SpinConfiguration> {
        if config.len() != self.source_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.source_qubits,
                got: config.len(),
            });
        }
        let mut tail = Vec::with_capacity(self.ferro_pairs.len());
        for p in &self.ferro_pairs {
            tail.push(config.spin(p.original));
        }
        config.extended(&tail)
    }
}

/// Result of coefficient unitization.
#[derive(Debug, Clone)]
pub struct UnitizeOutcome {
    /// The unit model: every coefficient is ±1.
    pub model: IsingModel,
    /// Remainders to be handled through transverse weights.
    pub fractional_groups: Vec<FractionalGroup>,
    /// Output term index -> input term index.
    pub term_origin: Vec<usize>,
}

/// Split each coefficient `c` into `floor(|c|)` identical unit terms of
/// `sign(c)`; any remainder `r = |c| - floor(|c|) > 0` becomes a fractional
/// group carrying `(sign(c), r)` for the construction's delta-weighted extras.
pub fn unitize(model: &IsingModel) -> Result<UnitizeOutcome> {
    let mut terms = Vec::new();
    let mut term_origin = Vec::new();
    let mut fractional_groups = Vec::new();
    for (idx, t) in model.terms().iter().enumerate() {
        let magnitude = t.coeff().abs();
        let sign = if t.coeff().is_positive() { 1i8 } else { -1i8 };
        let unit = Rat::from_integer(sign as i128);
        let k = magnitude.floor().to_integer();
        for _ in 0..k {
            terms.push(Term::new(t.support().to_vec(), unit.clone())?);
            term_origin.push(idx);
        }
        let remainder = &magnitude - Rat::from_integer(k);
        if !remainder.is_zero() {
            fractional_groups.push(FractionalGroup {
                source_term: idx,
                support: t.support().to_vec(),
                sign,
                remainder,
            });
        }
    }
    let mut out = IsingModel::new(model.num_qubits(), terms)?;
    out.set_delta(model.delta().to_vec())?;
    out.set_offset(model.offset().clone());
    Ok(UnitizeOutcome {
        model: out,
        fractional_groups,
        term_origin,
    })
}

/// Result of the ferro-pair pass.
#[derive(Debug, Clone)]
pub struct FerroPairOutcome {
    pub model: IsingModel,
    pub pairs: Vec<FerroPair>,
}

/// Duplicate every possibly flip-degenerate qubit into a strongly
/// ferromagnetically coupled pair.
///
/// With unit terms, a zero flip cost at qubit `i` requires an even number of
/// incident ±1 contributions, so the (conservative, sound) criterion is:
/// flag `i` iff its incident term count is even. Each flagged qubit gets a
/// partner held by `w = incident count + 1` identical `J = -1` couplers; all
/// previously incident terms stay on the original. Afterwards every qubit has
/// odd incidence, so no configuration of the output model has any single-flip
/// degeneracy.
pub fn ferro_pair_preprocess(model: &IsingModel) -> Result<FerroPairOutcome> {
    model.require_unit()?;
    let counts = model.incidence_counts();
    let flagged: Vec<usize> = (0..model.num_qubits())
        .filter(|&q| counts[q] % 2 == 0)
        .collect();

    let mut out = model.clone();
    let mut pairs = Vec::with_capacity(flagged.len());
    for (pair_idx, &q) in flagged.iter().enumerate() {
        let partner = model.num_qubits() + pair_idx;
        out.add_qubits(1, model.delta()[q].clone());
        let strength = counts[q] + 1;
        for _ in 0..strength {
            out.push_term(Term::coupler(q, partner, -Rat::one()))?;
        }
        pairs.push(FerroPair {
            original: q,
            partner,
            strength,
        });
    }
    Ok(FerroPairOutcome { model: out, pairs })
}

/// Emit the 1- and 2-local terms (and the folded constant) of the 4-qubit
/// penalty function `f_plus` (`sign = +1`) or `f_minus` (`sign = -1`).
///
/// The function is nonnegative everywhere; it is zero for two assignments of
/// `(ij_k, ij_k_star)` (one `ij_k`-flip apart) when the source coupler is
/// satisfied, for exactly one when it is unsatisfied, and at least `2b`
/// otherwise.
pub fn two_local_gadget(
    sign: i8,
    i: usize,
    j: usize,
    ij_k: usize,
    ij_k_star: usize,
    b: &Rat,
) -> Result<(Vec<Term>, Rat)> {
    if sign != 1 && sign != -1 {
        return Err(CoreError::InvalidParameter(format!(
            "gadget sign must be +1 or -1, got {sign}"
        )));
    }
    let mut sorted = [i, j, ij_k, ij_k_star];
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CoreError::InvalidParameter(
            "two-local gadget requires four distinct qubit indices".into(),
        ));
    }
    let q = b / Rat::from_integer(2);
    let s = Rat::from_integer(sign as i128);
    let c = |f: i128| &q * Rat::from_integer(f);
    let terms = vec![
        Term::new(vec![i], c(2) * &s)?,
        Term::new(vec![j], c(2))?,
        Term::new(vec![ij_k], c(3))?,
        Term::new(vec![ij_k_star], c(-5))?,
        Term::new(vec![i, j], c(2) * &s)?,
        Term::new(vec![j, ij_k], c(1))?,
        Term::new(vec![i, ij_k], c(1) * &s)?,
        Term::new(vec![i, ij_k_star], c(-3) * &s)?,
        Term::new(vec![j, ij_k_star], c(-3))?,
        Term::new(vec![ij_k, ij_k_star], c(-3))?,
    ];
    Ok((terms, c(7)))
}

/// Apply the degeneracy construction to a unit model.
pub fn apply_construction(
    model: &IsingModel,
    params: &GadgetParams,
) -> Result<(IsingModel, TransformReport)> {
    apply_construction_with_fractional(model, &[], params)
}

/// Apply the construction, additionally attaching delta-weighted extras for
/// fractional remainder groups produced by [`unitize`].
pub fn apply_construction_with_fractional(
    model: &IsingModel,
    fractional_groups: &[FractionalGroup],
    params: &GadgetParams,
) -> Result<(IsingModel, TransformReport)> {
    model.require_unit()?;
    for (index, t) in model.terms().iter().enumerate() {
        if t.locality() > 2 {
            return Err(CoreError::UnsupportedLocality {
                index,
                locality: t.locality(),
            });
        }
    }
    for g in fractional_groups {
        if g.support.len() > 2 {
            return Err(CoreError::UnsupportedLocality {
                index: g.source_term,
                locality: g.support.len(),
            });
        }
        if g.remainder <= Rat::zero() || g.remainder >= Rat::one() {
            return Err(CoreError::InvalidParameter(format!(
                "fractional remainder must lie in (0, 1), got {}",
                exact::format_rat(&g.remainder)
            )));
        }
    }

    let n = model.num_qubits();
    let mut out = model.clone();
    let mut report = TransformReport {
        params: params.clone(),
        source_qubits: n,
        original_qubits: n,
        extra_qubits: Vec::new(),
        term_provenance: (0..model.num_terms())
            .map(|source_term| TermProvenance::Original { source_term })
            .collect(),
        fractional_groups: fractional_groups.to_vec(),
        ferro_pairs: Vec::new(),
        unit_origin: (0..model.num_terms()).map(UnitOrigin::UserTerm).collect(),
        gadget_offset: Rat::zero(),
    };

    let half_b = &params.b / Rat::from_integer(2);
    let mut gadget_offset = Rat::zero();

    let emit = |out: &mut IsingModel,
                    report: &mut TransformReport,
                    gadget_offset: &mut Rat,
                    source: ExtraSource,
                    support: &[usize],
                    sign: i8,
                    extra_delta: &Rat|
     -> Result<()> {
        let s = Rat::from_integer(sign as i128);
        for replica in 1..=params.a {
            let extra = out.num_qubits();
            out.add_qubits(1, extra_delta.clone());
            let provenance = TermProvenance::Gadget { source, replica };
            match (support.len(), params.locality) {
                // b (h sigma_i + 1)(sigma_e + 1)/2, constant folded out.
                (1, _) => {
                    report.extra_qubits.push(ExtraQubit {
                        qubit: extra,
                        source,
                        source_support: support.to_vec(),
                        source_sign: sign,
                        replica,
                        kind: ExtraQubitKind::Degeneracy,
                    });
                    let i = support[0];
                    out.push_term(Term::field(i, &half_b * &s))?;
                    out.push_term(Term::field(extra, half_b.clone()))?;
                    out.push_term(Term::coupler(i, extra, &half_b * &s))?;
                    *gadget_offset += &half_b;
                    for _ in 0..3 {
                        report.term_provenance.push(provenance);
                    }
                }
                // b (J sigma_i sigma_j + 1)(sigma_e + 1)/2.
                (2, Locality::ThreeLocal) => {
                    report.extra_qubits.push(ExtraQubit {
                        qubit: extra,
                        source,
                        source_support: support.to_vec(),
                        source_sign: sign,
                        replica,
                        kind: ExtraQubitKind::Degeneracy,
                    });
                    let (i, j) = (support[0], support[1]);
                    out.push_term(Term::coupler(i, j, &half_b * &s))?;
                    out.push_term(Term::field(extra, half_b.clone()))?;
                    out.push_term(Term::triple(i, j, extra, &half_b * &s))?;
                    *gadget_offset += &half_b;
                    for _ in 0..3 {
                        report.term_provenance.push(provenance);
                    }
                }
                // f_plus / f_minus with one auxiliary star qubit.
                (2, Locality::TwoLocal) => {
                    let star = out.num_qubits();
                    out.add_qubits(1, Rat::one());
                    report.extra_qubits.push(ExtraQubit {
                        qubit: extra,
                        source,
                        source_support: support.to_vec(),
                        source_sign: sign,
                        replica,
                        kind: ExtraQubitKind::Degeneracy,
                    });
                    report.extra_qubits.push(ExtraQubit {
                        qubit: star,
                        source,
                        source_support: support.to_vec(),
                        source_sign: sign,
                        replica,
                        kind: ExtraQubitKind::AuxiliaryStar,
                    });
                    let (terms, constant) =
                        two_local_gadget(sign, support[0], support[1], extra, star, &params.b)?;
                    for t in terms {
                        out.push_term(t)?;
                        report.term_provenance.push(provenance);
                    }
                    *gadget_offset += constant;
                }
                _ => unreachable!("locality checked above"),
            }
        }
        Ok(())
    };

    for (t_idx, term) in model.terms().iter().enumerate() {
        let sign = if term.coeff().is_positive() { 1 } else { -1 };
        emit(
            &mut out,
            &mut report,
            &mut gadget_offset,
            ExtraSource::Term(t_idx),
            term.support(),
            sign,
            &Rat::one(),
        )?;
    }
    for (g_idx, group) in fractional_groups.iter().enumerate() {
        emit(
            &mut out,
            &mut report,
            &mut gadget_offset,
            ExtraSource::Fractional(g_idx),
            &group.support,
            group.sign,
            &group.remainder,
        )?;
    }

    out.set_offset(model.offset() + &gadget_offset);
    report.gadget_offset = gadget_offset;

    debug_assert_eq!(report.term_provenance.len(), out.num_terms());
    debug_assert_eq!(
        out.num_qubits(),
        n + report.extra_qubit_count(),
        "qubit count bookkeeping"
    );
    Ok((out, report))
}

/// The configuration extension with every gadget at its zero-cost value:
/// degeneracy extras at −1, auxiliary stars at the table value for their
/// coupler row. At this extension the transformed energy equals the input
/// energy exactly.
pub fn zero_cost_extension(
    report: &TransformReport,
    config: &SpinConfiguration,
) -> Result<SpinConfiguration> {
    if config.len() != report.original_qubits {
        return Err(CoreError::DimensionMismatch {
            expected: report.original_qubits,
            got: config.len(),
        });
    }
    let mut tail = vec![-1i8; report.extra_qubit_count()];
    for e in &report.extra_qubits {
        if e.kind == ExtraQubitKind::AuxiliaryStar {
            let si = config.spin(e.source_support[0]);
            let sj = config.spin(e.source_support[1]);
            // f at ij_k = −1 vanishes at star = −1 only on the
            // (sign*sigma_i, sigma_j) = (−1, −1) row; everywhere else at +1.
            tail[e.qubit - report.original_qubits] =
                if e.source_sign * si == -1 && sj == -1 { -1 } else { 1 };
        }
    }
    config.extended(&tail)
}

/// The model consisting solely of gadget terms (with the gadget constant),
/// used for the no-local-minima property of the penalty landscape.
pub fn gadget_only_model(transformed: &IsingModel, report: &TransformReport) -> Result<IsingModel> {
    let terms: Vec<Term> = transformed
        .terms()
        .iter()
        .zip(&report.term_provenance)
        .filter(|(_, p)| matches!(p, TermProvenance::Gadget { .. }))
        .map(|(t, _)| t.clone())
        .collect();
    let mut out = IsingModel::new(transformed.num_qubits(), terms)?;
    out.set_delta(transformed.delta().to_vec())?;
    out.set_offset(report.gadget_offset.clone());
    Ok(out)
}

/// Options for the full pipeline.
#[derive(Debug, Clone)]
pub struct TransformOptions {
    pub params: GadgetParams,
    /// Run the ferro-pair pass between unitization and the construction.
    pub ferro_pairs: bool,
}

/// Result of the full pipeline.
#[derive(Debug, Clone)]
pub struct TransformOutcome {
    pub transformed: IsingModel,
    pub report: TransformReport,
    /// The construction input: unitized and (optionally) ferro-paired.
    pub preprocessed: IsingModel,
}

/// Full pipeline: unitize, optionally ferro-pair, then apply the construction.
pub fn transform(model: &IsingModel, opts: &TransformOptions) -> Result<TransformOutcome> {
    let unitized = unitize(model)?;
    let (preprocessed, pairs) = if opts.ferro_pairs {
        let f = ferro_pair_preprocess(&unitized.model)?;
        (f.model, f.pairs)
    } else {
        (unitized.model.clone(), Vec::new())
    };
    let (transformed, mut report) =
        apply_construction_with_fractional(&preprocessed, &unitized.fractional_groups, &opts.params)?;

    report.source_qubits = model.num_qubits();
    let unit_terms = unitized.term_origin.len();
    report.unit_origin = (0..preprocessed.num_terms())
        .map(|i| {
            if i < unit_terms {
                UnitOrigin::UserTerm(unitized.term_origin[i])
            } else {
                // Ferro couplers are appended pair by pair after the unit terms.
                let mut offset = i - unit_terms;
                for (p_idx, p) in pairs.iter().enumerate() {
                    if offset < p.strength {
                        return UnitOrigin::FerroPair(p_idx);
                    }
                    offset -= p.strength;
                }
                unreachable!("term beyond ferro couplers")
            }
        })
        .collect();
    report.ferro_pairs = pairs;
    Ok(TransformOutcome {
        transformed,
        report,
        preprocessed,
    })
}

// ---------------------------------------------------------------------------
// Appendix cost tables and their verification.
// ---------------------------------------------------------------------------

/// Appendix cost table rows in units of `2b`:
/// `(sigma_i, sigma_j, sigma_ij_k, f at star = -1, f at star = +1)`.
pub const F_PLUS_TABLE: [(i8, i8, i8, i128, i128); 8] = [
    (-1, -1, -1, 0, 2),
    (-1, -1, 1, 2, 1),
    (-1, 1, -1, 1, 0),
    (-1, 1, 1, 4, 0),
    (1, -1, -1, 1, 0),
    (1, -1, 1, 4, 0),
    (1, 1, -1, 4, 0),
    (1, 1, 1, 8, 1),
];

/// Cost table of `f_minus`, same layout as [`F_PLUS_TABLE`].
pub const F_MINUS_TABLE: [(i8, i8, i8, i128, i128); 8] = [
    (-1, -1, -1, 1, 0),
    (-1, -1, 1, 4, 0),
    (-1, 1, -1, 4, 0),
    (-1, 1, 1, 8, 1),
    (1, -1, -1, 0, 2),
    (1, -1, 1, 2, 1),
    (1, 1, -1, 1, 0),
    (1, 1, 1, 4, 0),
];

/// One verified table row.
#[derive(Debug, Clone, Serialize)]
pub struct GadgetRowCheck {
    pub sign: i8,
    pub spins: [i8; 4],
    /// Expected value in units of `2b`.
    pub expected: i128,
    /// Computed value in units of `2b` (exact rational).
    pub computed: String,
    pub matches: bool,
}

/// Result of checking both appendix tables and their four properties.
#[derive(Debug, Clone, Serialize)]
pub struct GadgetVerification {
    pub rows: Vec<GadgetRowCheck>,
    /// Property 1: every value is >= 0.
    pub nonnegative: bool,
    /// Property 2: satisfied rows have exactly two zeros, one ij_k-flip apart.
    pub satisfied_two_zeros: bool,
    /// Property 3: unsatisfied rows have exactly one zero.
    pub unsatisfied_one_zero: bool,
    /// Property 4: every nonzero entry is >= 1 in units of 2b.
    pub floor_2b: bool,
}

impl GadgetVerification {
    pub fn all_rows_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn passed(&self) -> bool {
        self.all_rows_match()
            && self.nonnegative
            && self.satisfied_two_zeros
            && self.unsatisfied_one_zero
            && self.floor_2b
    }
}

/// Evaluate an emitted gadget (terms plus constant) against the appendix
/// table for `sign`, in exact rational arithmetic.
pub fn verify_gadget_rows(
    sign: i8,
    terms: &[Term],
    constant: &Rat,
    b: &Rat,
) -> Result<Vec<GadgetRowCheck>> {
    let table = if sign == 1 { &F_PLUS_TABLE } else { &F_MINUS_TABLE };
    let two_b = Rat::from_integer(2) * b;
    let mut rows = Vec::with_capacity(16);
    for &(si, sj, sk, at_minus, at_plus) in table {
        for (star, expected) in [(-1i8, at_minus), (1i8, at_plus)] {
            let config = SpinConfiguration::new(vec![si, sj, sk, star])?;
            let mut value = constant.clone();
            for t in terms {
                value += t.contribution(&config);
            }
            let in_units = &value / &two_b;
            rows.push(GadgetRowCheck {
                sign,
                spins: [si, sj, sk, star],
                expected,
                computed: exact::format_rat(&in_units),
                matches: in_units == Rat::from_integer(expected),
            });
        }
    }
    Ok(rows)
}

/// Verify both penalty functions against the appendix tables and check the
/// four required properties.
pub fn verify_gadget_tables() -> Result<GadgetVerification> {
    let b = Rat::one();
    let mut rows = Vec::with_capacity(32);
    let mut nonnegative = true;
    let mut satisfied_two_zeros = true;
    let mut unsatisfied_one_zero = true;
    let mut floor_2b = true;

    for sign in [1i8, -1i8] {
        let (terms, constant) = two_local_gadget(sign, 0, 1, 2, 3, &b)?;
        rows.extend(verify_gadget_rows(sign, &terms, &constant, &b)?);

        let table = if sign == 1 { &F_PLUS_TABLE } else { &F_MINUS_TABLE };
        for &(si, sj, _sk, _m, _p) in table.iter().step_by(2) {
            // Rows of the (si, sj) block: four (ij_k, star) assignments.
            let entries: Vec<(i8, i8, i128)> = table
                .iter()
                .filter(|&&(a, b2, _, _, _)| a == si && b2 == sj)
                .flat_map(|&(_, _, sk, m, p)| [(sk, -1i8, m), (sk, 1i8, p)])
                .collect();
            let satisfied = (sign as i128) * (si as i128) * (sj as i128) == -1;
            let zeros: Vec<(i8, i8)> = entries
                .iter()
                .filter(|&&(_, _, v)| v == 0)
                .map(|&(k, s, _)| (k, s))
                .collect();
            if satisfied {
                let one_flip_apart =
                    zeros.len() == 2 && zeros[0].1 == zeros[1].1 && zeros[0].0 != zeros[1].0;
                satisfied_two_zeros &= one_flip_apart;
            } else {
                unsatisfied_one_zero &= zeros.len() == 1;
            }
            for &(_, _, v) in &entries {
                nonnegative &= v >= 0;
                floor_2b &= v == 0 || v >= 1;
            }
        }
    }

    Ok(GadgetVerification {
        rows,
        nonnegative,
        satisfied_two_zeros,
        unsatisfied_one_zero,
        floor_2b,
    })
}
