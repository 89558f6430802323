use alc_core::engine::{best_decoder_value, encode, perfect_decoder_exists, search_perfect};
use alc_core::gpt::GptModel as Model;
use alc_core::squarebit::{build_catalog, build_model_from};
use alc_core::{
    DecoderWitness, EncodingStrategy, Families, GptModel, ModelName, Rational, Scalar,
    SearchOptions, SquareBitCatalog,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn models() -> &'static (GptModel, GptModel) {
    static M: OnceLock<(GptModel, GptModel)> = OnceLock::new();
    M.get_or_init(|| {
        let cat: SquareBitCatalog = build_catalog();
        (
            build_model_from(&cat, ModelName::Pr).unwrap(),
            build_model_from(&cat, ModelName::Hs).unwrap(),
        )
    })
}

fn op_index(model: &GptModel, m: &alc_core::RMatrix) -> usize {
    model
        .local_ops
        .iter()
        .position(|o| o.matrix == *m)
        .expect("local ops form a group")
}

fn correlated(n_states: usize) -> impl Strategy<Value = EncodingStrategy> {
    (
        0..n_states,
        prop::collection::vec(0usize..8, 4),
        prop::collection::vec(0usize..8, 4),
    )
        .prop_map(|(s, a, b)| EncodingStrategy::correlated(s, a, b))
}

fn product() -> impl Strategy<Value = EncodingStrategy> {
    (
        prop::collection::vec(0usize..4, 4),
        prop::collection::vec(0usize..4, 4),
    )
        .prop_map(|(a, b)| EncodingStrategy::product(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauge_transform_preserves_family(strategy in correlated(24), v in 0usize..8) {
        let (pr, _) = models();
        let fam = encode(pr, &strategy).unwrap();
        let vm = &pr.local_ops[v].matrix;
        let shared = pr.states[pr.position_of_catalog(strategy.shared_state.unwrap()).unwrap()]
            .matrix()
            .unwrap()
            .clone();
        // V-preimage of the shared state: find Ω' with V Ω' = Ω.
        let pre = pr
            .states
            .iter()
            .find(|s| vm.mul(s.matrix().unwrap()).unwrap() == shared)
            .and_then(|s| s.catalog_index)
            .unwrap();
        let alice = strategy
            .alice_assign
            .iter()
            .map(|&a| op_index(pr, &pr.local_ops[a].matrix.mul(vm).unwrap()))
            .collect();
        let moved = EncodingStrategy::correlated(pre, alice, strategy.bob_assign.clone());
        let fam2 = encode(pr, &moved).unwrap();
        prop_assert_eq!(fam.positions, fam2.positions);
    }

    #[test]
    fn value_never_below_constant_baseline(strategy in correlated(24)) {
        let (pr, _) = models();
        let fam = encode(pr, &strategy).unwrap();
        let v = best_decoder_value(pr, &fam).unwrap();
        prop_assert!(v >= Rational::from_ratio(3, 4));
        prop_assert!(v <= Rational::from_ratio(1, 1));
    }

    #[test]
    fn hs_product_value_between_baseline_and_one(strategy in product()) {
        let (_, hs) = models();
        let fam = encode(hs, &strategy).unwrap();
        let v = best_decoder_value(hs, &fam).unwrap();
        prop_assert!(v >= Rational::from_ratio(3, 4) && v < Rational::from_ratio(1, 1));
        prop_assert!(perfect_decoder_exists(hs, &fam).unwrap().is_none());
    }
}

fn opts() -> SearchOptions {
    SearchOptions {
        jobs: Some(2),
        ..SearchOptions::default()
    }
}

#[test]
fn one_bit_witnesses_replay_to_one() {
    let cat: SquareBitCatalog = build_catalog();
    for (name, fams) in [
        (ModelName::ClassicalBit, Families::Product),
        (ModelName::Hs, Families::Product),
        (ModelName::Pr, Families::Both),
        (ModelName::HybridA, Families::Both),
    ] {
        let m = build_model_from(&cat, name).unwrap();
        let r = search_perfect(&m, 2, fams, &opts()).unwrap();
        let p = r.perfect.as_ref().unwrap_or_else(|| panic!("{name}: no witness"));
        assert!(p.witness.is_complete(&m), "{name}");
        let fam = encode(&m, &p.strategy).unwrap();
        assert_eq!(p.witness.success(&m, &fam).unwrap(), Rational::from_int(1), "{name}");
        assert_eq!(p.replay_success, Rational::from_int(1), "{name}");
    }
}

/// Re-expresses a decoder over another effect list by catalog index.
fn transport(from: &Model<Rational>, to: &Model<Rational>, w: &DecoderWitness) -> DecoderWitness {
    let map = |ws: &[Rational]| {
        let mut out = vec![Rational::from_int(0); to.effects.len()];
        for (i, x) in ws.iter().enumerate() {
            let c = from.effects[i].catalog_index;
            let j = to.effects.iter().position(|e| e.catalog_index == c).unwrap();
            out[j] = x.clone();
        }
        out
    };
    DecoderWitness {
        p_weights: map(&w.p_weights),
        q_weights: map(&w.q_weights),
    }
}

#[test]
fn hybrid_witness_is_valid_in_extended_hs() {
    let cat: SquareBitCatalog = build_catalog();
    let hy = build_model_from(&cat, ModelName::HybridA).unwrap();
    let hs = build_model_from(&cat, ModelName::Hs).unwrap();
    let mut states = hs.states.clone();
    states.extend(hy.states.iter().filter(|s| s.catalog_index >= Some(16)).cloned());
    let extended = Model::new(
        "HS+",
        states,
        hs.effects.clone(),
        hs.transformations.clone(),
        hs.local_ops.clone(),
        hs.local_states.clone(),
        hs.unit.clone(),
        2,
    );
    let r = search_perfect(&hy, 2, Families::Both, &opts()).unwrap();
    let p = r.perfect.expect("witness");
    let w = transport(&hy, &extended, &p.witness);
    assert!(w.is_complete(&extended));
    let fam = encode(&hy, &p.strategy).unwrap();
    let fam_ext = alc_core::EncodedFamily {
        positions: fam
            .states
            .iter()
            .map(|s| extended.position_of(s.matrix().unwrap()).unwrap())
            .collect(),
        ..fam
    };
    assert_eq!(w.success(&extended, &fam_ext).unwrap(), Rational::from_int(1));
}
