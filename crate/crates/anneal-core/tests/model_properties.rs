//! Property tests for the model layer's algebraic invariants.

use anneal_core::exact::Rat;
use anneal_core::model::{IsingModel, SpinConfiguration, Term};
use num_traits::One;
use proptest::prelude::*;

const MAX_QUBITS: usize = 6;

fn arb_coeff() -> impl Strategy<Value = Rat> {
    (any::<i8>(), 1i128..=4i128).prop_filter_map("nonzero coefficient", |(n, d)| {
        if n == 0 {
            None
        } else {
            Some(Rat::new(n as i128, d))
        }
    })
}

fn arb_unit_coeff() -> impl Strategy<Value = Rat> {
    any::<bool>().prop_map(|s| if s { Rat::one() } else { -Rat::one() })
}

fn arb_term(n: usize, coeff: impl Strategy<Value = Rat> + 'static) -> BoxedStrategy<Term> {
    (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=3.min(n)), coeff)
        .prop_map(|(support, c)| Term::new(support, c).unwrap())
        .boxed()
}

fn arb_model(coeff: fn() -> BoxedStrategy<Rat>) -> impl Strategy<Value = IsingModel> {
    (2..=MAX_QUBITS).prop_flat_map(move |n| {
        proptest::collection::vec(arb_term(n, coeff()), 0..8)
            .prop_map(move |terms| IsingModel::new(n, terms).unwrap())
    })
}

fn rational_model() -> impl Strategy<Value = IsingModel> {
    arb_model(|| arb_coeff().boxed())
}

fn unit_model() -> impl Strategy<Value = IsingModel> {
    arb_model(|| arb_unit_coeff().boxed())
}

fn arb_config(n: usize) -> impl Strategy<Value = SpinConfiguration> {
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(|bits| {
            SpinConfiguration::new(bits.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Energy is linear in the term multiset: concatenating two models adds
    /// their energies at every configuration.
    #[test]
    fn energy_is_linear_in_terms(
        a in rational_model(),
        b in rational_model(),
        seed in any::<u64>(),
    ) {
        let n = a.num_qubits().max(b.num_qubits());
        let mut terms = a.terms().to_vec();
        terms.extend_from_slice(b.terms());
        let combined = IsingModel::new(n, terms).unwrap();
        let config = SpinConfiguration::from_index(seed as usize % (1 << n), n);
        let cut = |m: &IsingModel| {
            // Evaluate a model on the widened qubit set.
            let wide = IsingModel::new(n, m.terms().to_vec()).unwrap();
            wide.energy(&config).unwrap()
        };
        prop_assert_eq!(combined.energy(&config).unwrap(), cut(&a) + cut(&b));
    }

    /// Flipping a spin negates the incident contribution:
    /// flip_cost(config, i) = -flip_cost(config with i flipped, i).
    #[test]
    fn flip_cost_is_antisymmetric(model in rational_model(), seed in any::<u64>()) {
        let n = model.num_qubits();
        let config = SpinConfiguration::from_index(seed as usize % (1 << n), n);
        for q in 0..n {
            let forward = model.flip_cost(&config, q).unwrap();
            let back = model.flip_cost(&config.flipped(q), q).unwrap();
            prop_assert_eq!(forward, -back);
        }
    }

    /// Unit models satisfy E = m - 2 * (# satisfied) at every configuration.
    #[test]
    fn unit_energy_identity(model in unit_model(), seed in any::<u64>()) {
        let n = model.num_qubits();
        let config = SpinConfiguration::from_index(seed as usize % (1 << n), n);
        let s = model.count_satisfied(&config).unwrap() as i128;
        let m = model.num_terms() as i128;
        prop_assert_eq!(model.energy(&config).unwrap(), Rat::from_integer(m - 2 * s));
    }

    /// Models with only even-support terms are invariant under a global flip.
    #[test]
    fn global_flip_symmetry(model in rational_model(), seed in any::<u64>()) {
        let even = IsingModel::new(
            model.num_qubits(),
            model
                .terms()
                .iter()
                .filter(|t| t.locality() % 2 == 0)
                .cloned()
                .collect(),
        )
        .unwrap();
        let n = even.num_qubits();
        let config = SpinConfiguration::from_index(seed as usize % (1 << n), n);
        prop_assert_eq!(
            even.energy(&config).unwrap(),
            even.energy(&config.negated()).unwrap()
        );
    }

    /// JSON round trip is the identity on the data model.
    #[test]
    fn json_round_trip_is_identity(model in rational_model()) {
        let back = IsingModel::from_json(&model.to_json()).unwrap();
        prop_assert_eq!(model, back);
    }
}
