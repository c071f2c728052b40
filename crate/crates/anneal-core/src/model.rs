//! Ising models over ±1 spins with 1-, 2-, and 3-local Z-terms.
//!
//! A model is a *multiset* of terms: identical supports may repeat, insertion
//! order is preserved, and merging equal-support terms is an explicit
//! operation (`canonicalized`), never implicit. The term count `m` used by the
//! degeneracy construction is defined over the multiset.
//!
//! Energies are exact rationals. A model carries a constant energy `offset`
//! (used by the gadget passes when folding expansion constants) and a per-qubit
//! transverse weight `delta` consumed by the spectral layer.

use crate::error::{CoreError, Result};
use crate::exact::{self, format_rat, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A single Z-product term: `coeff * prod_{i in support} sigma_z^(i)`.
///
/// The support holds 1 to 3 distinct qubit indices, sorted ascending; the
/// coefficient is a nonzero rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TermRepr", into = "TermRepr")]
pub struct Term {
    support: Vec<usize>,
    coeff: Rat,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    spins: Vec<usize>,
    #[serde(with = "exact::rat_serde")]
    coeff: Rat,
}

impl From<Term> for TermRepr {
    fn from(t: Term) -> Self {
        TermRepr {
            spins: t.support,
            coeff: t.coeff,
        }
    }
}

impl TryFrom<TermRepr> for Term {
    type Error = String;
    fn try_from(r: TermRepr) -> std::result::Result<Self, String> {
        Term::new(r.spins, r.coeff).map_err(|e| e.to_string())
    }
}

impl Term {
    /// Build a term, sorting the support and checking the invariants.
    pub fn new(mut support: Vec<usize>, coeff: Rat) -> Result<Self> {
        if coeff.is_zero() {
            return Err(CoreError::InvalidTerm {
                index: 0,
                reason: "zero coefficient".into(),
            });
        }
        if support.is_empty() || support.len() > 3 {
            return Err(CoreError::InvalidTerm {
                index: 0,
                reason: format!("support size {} not in 1..=3", support.len()),
            });
        }
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(CoreError::InvalidTerm {
                index: 0,
                reason: "repeated qubit index in support".into(),
            });
        }
        Ok(Term { support, coeff })
    }

    /// Local field term `c * sigma_z^(i)`.
    pub fn field(i: usize, coeff: Rat) -> Self {
        Term::new(vec![i], coeff).expect("field term")
    }

    /// Coupler term `c * sigma_z^(i) sigma_z^(j)`.
    pub fn coupler(i: usize, j: usize, coeff: Rat) -> Self {
        Term::new(vec![i, j], coeff).expect("coupler term")
    }

    /// Three-spin term `c * sigma_z^(i) sigma_z^(j) sigma_z^(k)`.
    pub fn triple(i: usize, j: usize, k: usize, coeff: Rat) -> Self {
        Term::new(vec![i, j, k], coeff).expect("triple term")
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    /// Number of qubits the term acts on (1, 2, or 3).
    pub fn locality(&self) -> usize {
        self.support.len()
    }

    /// True when the coefficient is exactly ±1.
    pub fn is_unit(&self) -> bool {
        exact::is_unit(&self.coeff)
    }

    /// Signed contribution of the term at a configuration: `coeff * prod spins`.
    pub fn contribution(&self, config: &SpinConfiguration) -> Rat {
        let mut sign = 1i128;
        for &q in &self.support {
            sign *= config.spins[q] as i128;
        }
        &self.coeff * Rat::from_integer(sign)
    }
}

/// An assignment of ±1 to every qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfiguration {
    spins: Vec<i8>,
}

impl From<SpinConfiguration> for Vec<i8> {
    fn from(c: SpinConfiguration) -> Self {
        c.spins
    }
}

impl TryFrom<Vec<i8>> for SpinConfiguration {
    type Error = String;
    fn try_from(spins: Vec<i8>) -> std::result::Result<Self, String> {
        SpinConfiguration::new(spins).map_err(|e| e.to_string())
    }
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(CoreError::InvalidModel(
                "spin entries must be +1 or -1".into(),
            ));
        }
        Ok(SpinConfiguration { spins })
    }

    /// All spins up (+1).
    pub fn all_up(n: usize) -> Self {
        SpinConfiguration { spins: vec![1; n] }
    }

    /// All spins down (−1).
    pub fn all_down(n: usize) -> Self {
        SpinConfiguration { spins: vec![-1; n] }
    }

    /// Decode a basis-state index: bit `i` set means spin `i` is −1.
    pub fn from_index(index: usize, n: usize) -> Self {
        let spins = (0..n)
            .map(|i| if index >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        SpinConfiguration { spins }
    }

    /// Basis-state index of this configuration (inverse of `from_index`).
    pub fn to_index(&self) -> usize {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0usize, |acc, (i, _)| acc | 1 << i)
    }

    /// Parse `+`/`-` (also `1`/`0`, `u`/`d`) characters, one per qubit.
    pub fn parse(s: &str) -> Result<Self> {
        let spins = s
            .chars()
            .map(|c| match c {
                '+' | '1' | 'u' => Ok(1i8),
                '-' | '0' | 'd' => Ok(-1i8),
                other => Err(CoreError::InvalidModel(format!(
                    "invalid spin character {other:?} (expected one of + - 1 0 u d)"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinConfiguration { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn spin(&self, i: usize) -> i8 {
        self.spins[i]
    }

    /// Copy with one spin flipped.
    pub fn flipped(&self, qubit: usize) -> Self {
        let mut spins = self.spins.clone();
        spins[qubit] = -spins[qubit];
        SpinConfiguration { spins }
    }

    /// Copy with every spin flipped.
    pub fn negated(&self) -> Self {
        SpinConfiguration {
            spins: self.spins.iter().map(|&s| -s).collect(),
        }
    }

    /// Concatenate with another configuration (original spins first).
    pub fn extended(&self, tail: &[i8]) -> Result<Self> {
        let mut spins = self.spins.clone();
        spins.extend_from_slice(tail);
        SpinConfiguration::new(spins)
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for &s in &self.spins {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// An Ising model: a multiset of Z-terms plus per-qubit transverse weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct IsingModel {
    num_qubits: usize,
    terms: Vec<Term>,
    delta: Vec<Rat>,
    offset: Rat,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    num_qubits: usize,
    terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<DeltaRepr>,
    #[serde(
        default,
        with = "exact::rat_serde",
        skip_serializing_if = "exact::is_zero"
    )]
    offset: Rat,
}

#[derive(Serialize, Deserialize)]
struct DeltaRepr(#[serde(with = "exact::rat_vec_serde")] Vec<Rat>);

impl From<IsingModel> for ModelRepr {
    fn from(m: IsingModel) -> Self {
        let delta = if m.delta.iter().all(|d| d.is_one()) {
            None
        } else {
            Some(DeltaRepr(m.delta))
        };
        ModelRepr {
            num_qubits: m.num_qubits,
            terms: m.terms,
            delta,
            offset: m.offset,
        }
    }
}

impl TryFrom<ModelRepr> for IsingModel {
    type Error = String;
    fn try_from(r: ModelRepr) -> std::result::Result<Self, String> {
        let mut m = IsingModel::new(r.num_qubits, r.terms).map_err(|e| e.to_string())?;
        if let Some(DeltaRepr(delta)) = r.delta {
            m.set_delta(delta).map_err(|e| e.to_string())?;
        }
        m.set_offset(r.offset);
        Ok(m)
    }
}

impl IsingModel {
    /// Build a model with unit transverse weights and zero offset.
    pub fn new(num_qubits: usize, terms: Vec<Term>) -> Result<Self> {
        for (index, t) in terms.iter().enumerate() {
            if let Some(&q) = t.support.iter().find(|&&q| q >= num_qubits) {
                return Err(CoreError::InvalidTerm {
                    index,
                    reason: format!("qubit {q} out of range for {num_qubits} qubits"),
                });
            }
        }
        Ok(IsingModel {
            num_qubits,
            terms,
            delta: vec![Rat::one(); num_qubits],
            offset: Rat::zero(),
        })
    }

    /// Empty model on `n` qubits.
    pub fn empty(n: usize) -> Self {
        IsingModel::new(n, vec![]).expect("empty model")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Multiset term count `m`.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn delta(&self) -> &[Rat] {
        &self.delta
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn set_offset(&mut self, offset: Rat) {
        self.offset = offset;
    }

    pub fn set_delta(&mut self, delta: Vec<Rat>) -> Result<()> {
        if delta.len() != self.num_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.num_qubits,
                got: delta.len(),
            });
        }
        if delta.iter().any(|d| d.is_negative()) {
            return Err(CoreError::InvalidModel(
                "transverse weights must be nonnegative".into(),
            ));
        }
        self.delta = delta;
        Ok(())
    }

    /// Append a term, growing the qubit count if needed is not allowed:
    /// the term must fit the existing qubit range.
    pub fn push_term(&mut self, term: Term) -> Result<()> {
        if let Some(&q) = term.support.iter().find(|&&q| q >= self.num_qubits) {
            return Err(CoreError::IndexOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Append `extra` fresh qubits with the given transverse weight.
    pub fn add_qubits(&mut self, extra: usize, delta: Rat) {
        self.num_qubits += extra;
        self.delta.extend(std::iter::repeat(delta).take(extra));
    }

    /// True when every coefficient is exactly ±1.
    pub fn is_unit(&self) -> bool {
        self.terms.iter().all(Term::is_unit)
    }

    fn check_config(&self, config: &SpinConfiguration) -> Result<()> {
        if config.len() != self.num_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.num_qubits,
                got: config.len(),
            });
        }
        Ok(())
    }

    /// Exact energy: `offset + sum_t coeff_t * prod_{i in t} spin_i`.
    pub fn energy(&self, config: &SpinConfiguration) -> Result<Rat> {
        self.check_config(config)?;
        let mut e = self.offset.clone();
        for t in &self.terms {
            e += t.contribution(config);
        }
        Ok(e)
    }

    /// Energy change of flipping one spin:
    /// `E(flipped) - E(config) = -2 * sum of signed contributions of terms containing the qubit`.
    pub fn flip_cost(&self, config: &SpinConfiguration, qubit: usize) -> Result<Rat> {
        self.check_config(config)?;
        if qubit >= self.num_qubits {
            return Err(CoreError::IndexOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let mut incident = Rat::zero();
        for t in &self.terms {
            if t.support.contains(&qubit) {
                incident += t.contribution(config);
            }
        }
        Ok(incident * Rat::from_integer(-2))
    }

    /// Number of satisfied terms (signed contribution −1). Requires a unit model.
    pub fn count_satisfied(&self, config: &SpinConfiguration) -> Result<usize> {
        self.check_config(config)?;
        self.require_unit()?;
        let minus_one = -Rat::one();
        Ok(self
            .terms
            .iter()
            .filter(|t| t.contribution(config) == minus_one)
            .count())
    }

    /// Error unless every coefficient is ±1.
    pub fn require_unit(&self) -> Result<()> {
        if let Some((index, t)) = self.terms.iter().enumerate().find(|(_, t)| !t.is_unit()) {
            return Err(CoreError::UnitModelRequired {
                index,
                coeff: format_rat(&t.coeff),
            });
        }
        Ok(())
    }

    /// Qubits whose single flip leaves the energy unchanged at `config`.
    pub fn single_flip_degenerate_qubits(
        &self,
        config: &SpinConfiguration,
    ) -> Result<BTreeSet<usize>> {
        self.check_config(config)?;
        let mut sums = vec![Rat::zero(); self.num_qubits];
        for t in &self.terms {
            let c = t.contribution(config);
            for &q in &t.support {
                sums[q] += &c;
            }
        }
        Ok(sums
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_zero())
            .map(|(q, _)| q)
            .collect())
    }

    /// Number of terms (any locality) incident to each qubit.
    pub fn incidence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_qubits];
        for t in &self.terms {
            for &q in &t.support {
                counts[q] += 1;
            }
        }
        counts
    }

    /// Merge equal-support terms, dropping exact cancellations.
    ///
    /// This is the only place multiset duplicates collapse; no other
    /// operation canonicalizes implicitly.
    pub fn canonicalized(&self) -> IsingModel {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry(t.support.clone()).or_insert_with(Rat::zero) += &t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(support, coeff)| Term { support, coeff })
            .collect();
        let mut out = IsingModel {
            num_qubits: self.num_qubits,
            terms,
            delta: self.delta.clone(),
            offset: self.offset.clone(),
        };
        out.offset = self.offset.clone();
        out
    }

    /// Parse a model from its JSON representation.
    pub fn from_json(json: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    /// Serialize to pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn one() -> Rat {
        Rat::one()
    }

    fn cfg(s: &str) -> SpinConfiguration {
        SpinConfiguration::parse(s).unwrap()
    }

    #[test]
    fn single_field_energy() {
        let m = IsingModel::new(1, vec![Term::field(0, -one())]).unwrap();
        assert_eq!(m.energy(&cfg("+")).unwrap(), rat(-1, 1));
        assert_eq!(m.energy(&cfg("-")).unwrap(), rat(1, 1));
    }

    #[test]
    fn coupler_energy_is_spin_product() {
        let m = IsingModel::new(2, vec![Term::coupler(0, 1, one())]).unwrap();
        assert_eq!(m.energy(&cfg("+-")).unwrap(), rat(-1, 1));
        assert_eq!(m.energy(&cfg("++")).unwrap(), rat(1, 1));
    }

    #[test]
    fn energy_matches_independent_resummation() {
        // Second straight-line summation, deliberately written differently
        // from IsingModel::energy (per-term loop over raw parts).
        fn oracle(m: &IsingModel, c: &SpinConfiguration) -> Rat {
            let mut total = m.offset().clone();
            for t in m.terms() {
                let mut prod = t.coeff().clone();
                for &q in t.support() {
                    if c.spin(q) == -1 {
                        prod = -prod;
                    }
                }
                total += prod;
            }
            total
        }
        let m = IsingModel::new(
            4,
            vec![
                Term::field(0, rat(1, 1)),
                Term::field(2, rat(-1, 1)),
                Term::coupler(0, 3, rat(-1, 1)),
                Term::coupler(1, 2, rat(1, 1)),
                Term::triple(0, 1, 3, rat(-1, 1)),
            ],
        )
        .unwrap();
        for idx in 0..16 {
            let c = SpinConfiguration::from_index(idx, 4);
            assert_eq!(m.energy(&c).unwrap(), oracle(&m, &c));
        }
    }

    #[test]
    fn flip_cost_examples() {
        let m = IsingModel::new(1, vec![Term::field(0, -one())]).unwrap();
        assert_eq!(m.flip_cost(&cfg("+"), 0).unwrap(), rat(2, 1));
        assert_eq!(m.flip_cost(&cfg("-"), 0).unwrap(), rat(-2, 1));
        assert!(matches!(
            m.flip_cost(&cfg("+"), 1),
            Err(CoreError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn flip_cost_matches_two_evaluation_oracle() {
        let m = IsingModel::new(
            5,
            vec![
                Term::field(1, rat(3, 2)),
                Term::coupler(0, 2, rat(-2, 1)),
                Term::coupler(3, 4, rat(1, 3)),
                Term::triple(0, 1, 4, rat(-1, 1)),
                Term::coupler(0, 2, rat(1, 2)),
            ],
        )
        .unwrap();
        for idx in 0..32 {
            let c = SpinConfiguration::from_index(idx, 5);
            for q in 0..5 {
                let direct = m.energy(&c.flipped(q)).unwrap() - m.energy(&c).unwrap();
                assert_eq!(m.flip_cost(&c, q).unwrap(), direct);
            }
        }
    }

    #[test]
    fn count_satisfied_examples() {
        let m = IsingModel::new(1, vec![Term::field(0, -one())]).unwrap();
        assert_eq!(m.count_satisfied(&cfg("+")).unwrap(), 1);

        let m = IsingModel::new(
            2,
            vec![Term::field(0, -one()), Term::coupler(0, 1, one())],
        )
        .unwrap();
        // h satisfied, J unsatisfied at (+,+).
        assert_eq!(m.count_satisfied(&cfg("++")).unwrap(), 1);

        let non_unit = IsingModel::new(1, vec![Term::field(0, rat(2, 1))]).unwrap();
        assert!(matches!(
            non_unit.count_satisfied(&cfg("+")),
            Err(CoreError::UnitModelRequired { .. })
        ));
    }

    #[test]
    fn unit_identity_energy_equals_m_minus_twice_satisfied() {
        let m = IsingModel::new(
            4,
            vec![
                Term::field(0, one()),
                Term::field(3, -one()),
                Term::coupler(0, 1, one()),
                Term::coupler(1, 2, -one()),
                Term::coupler(2, 3, -one()),
            ],
        )
        .unwrap();
        let total = m.num_terms() as i128;
        for idx in 0..16 {
            let c = SpinConfiguration::from_index(idx, 4);
            let s = m.count_satisfied(&c).unwrap() as i128;
            assert_eq!(m.energy(&c).unwrap(), Rat::from_integer(total - 2 * s));
        }
    }

    #[test]
    fn single_flip_degenerate_examples() {
        let m = IsingModel::new(1, vec![Term::field(0, -one())]).unwrap();
        assert!(m.single_flip_degenerate_qubits(&cfg("+")).unwrap().is_empty());

        // Qubit 1 is uncoupled, so it is degenerate at every configuration.
        let m = IsingModel::new(2, vec![Term::field(0, -one())]).unwrap();
        for idx in 0..4 {
            let c = SpinConfiguration::from_index(idx, 2);
            let degens = m.single_flip_degenerate_qubits(&c).unwrap();
            assert_eq!(degens, BTreeSet::from([1]));
        }
    }

    #[test]
    fn term_invariants_enforced() {
        assert!(Term::new(vec![0], Rat::zero()).is_err());
        assert!(Term::new(vec![0, 0], one()).is_err());
        assert!(Term::new(vec![], one()).is_err());
        assert!(Term::new(vec![0, 1, 2, 3], one()).is_err());
        let t = Term::new(vec![2, 0], one()).unwrap();
        assert_eq!(t.support(), &[0, 2]);
    }

    #[test]
    fn model_rejects_out_of_range_terms() {
        assert!(IsingModel::new(1, vec![Term::coupler(0, 1, one())]).is_err());
    }

    #[test]
    fn canonicalize_merges_multiset_duplicates() {
        let m = IsingModel::new(
            2,
            vec![
                Term::coupler(0, 1, -one()),
                Term::coupler(0, 1, -one()),
                Term::field(0, one()),
                Term::field(0, -one()),
            ],
        )
        .unwrap();
        assert_eq!(m.num_terms(), 4);
        let canon = m.canonicalized();
        assert_eq!(canon.num_terms(), 1);
        assert_eq!(canon.terms()[0], Term::coupler(0, 1, rat(-2, 1)));
        // The original multiset is untouched.
        assert_eq!(m.num_terms(), 4);
    }

    #[test]
    fn json_round_trip_and_wire_format() {
        let mut m = IsingModel::new(
            3,
            vec![Term::field(0, rat(-5, 2)), Term::coupler(1, 2, one())],
        )
        .unwrap();
        m.set_delta(vec![one(), rat(1, 2), one()]).unwrap();
        m.set_offset(rat(3, 1));
        let json = m.to_json();
        let back = IsingModel::from_json(&json).unwrap();
        assert_eq!(m, back);

        // Wire format: non-integer coefficients are "p/q" strings.
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["terms"][0]["coeff"], "-5/2");
        assert_eq!(v["terms"][1]["coeff"], 1);
        assert_eq!(v["offset"], 3);
    }

    #[test]
    fn json_defaults_for_delta_and_offset() {
        let m: IsingModel = serde_json::from_str(
            r#"{"num_qubits": 2, "terms": [{"spins": [0, 1], "coeff": "1/3"}]}"#,
        )
        .unwrap();
        assert_eq!(m.delta(), &[one(), one()]);
        assert!(m.offset().is_zero());
        assert_eq!(m.terms()[0].coeff(), &rat(1, 3));
    }

    #[test]
    fn index_round_trip_and_parse() {
        for idx in 0..32 {
            let c = SpinConfiguration::from_index(idx, 5);
            assert_eq!(c.to_index(), idx);
        }
        assert_eq!(cfg("+-+").spins(), &[1, -1, 1]);
        assert!(SpinConfiguration::parse("+x").is_err());
    }
}
