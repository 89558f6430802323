use alc_core::engine::{
    best_decoder_value, encode, has_collision, perfect_decoder_exists, replay, search_perfect,
};
use alc_core::squarebit::{build_catalog, build_model_from};
use alc_core::{
    EncodingStrategy, Families, GptModel, ModelName, Rational, Scalar, SearchOptions,
    SquareBitCatalog,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn model(name: ModelName) -> GptModel {
    let cat: SquareBitCatalog = build_catalog();
    build_model_from(&cat, name).unwrap()
}

// D8 positions: U0+..U3+ = 0..3, U0-..U3- = 4..7.
fn pr_strategy() -> EncodingStrategy {
    EncodingStrategy::correlated(16, vec![0, 4, 2, 6], vec![0, 6, 7, 1])
}

#[test]
fn pr_encoding_lands_on_shared_state() {
    let pr = model(ModelName::Pr);
    let fam = encode(&pr, &pr_strategy()).unwrap();
    assert_eq!(fam.state(0, 0).catalog_index, Some(16));
    assert_eq!(fam.state(1, 2).catalog_index, Some(16));
    assert!(has_collision(&fam));
    assert!(perfect_decoder_exists(&pr, &fam).unwrap().is_none());
}

#[test]
fn diagonal_product_encoding() {
    let hs = model(ModelName::Hs);
    let s = EncodingStrategy::product(vec![0, 1, 2, 3], vec![0, 1, 2, 3]);
    let fam = encode(&hs, &s).unwrap();
    assert_eq!(fam.state(1, 1).catalog_index, Some(5));
    assert_eq!(fam.eq_set, [0, 5, 10, 15].into_iter().collect());
    assert_eq!(fam.neq_set.len(), 12);
    assert!(!has_collision(&fam));
    assert!(perfect_decoder_exists(&hs, &fam).unwrap().is_none());
}

#[test]
fn identity_encoding_collides() {
    let pr = model(ModelName::Pr);
    let s = EncodingStrategy::correlated(16, vec![0; 4], vec![0; 4]);
    let fam = encode(&pr, &s).unwrap();
    assert!(has_collision(&fam));
    assert_eq!(fam.eq_set, fam.neq_set);
    assert_eq!(best_decoder_value(&pr, &fam).unwrap(), q(3, 4));
}

#[test]
fn one_bit_game_on_hs_has_a_witness() {
    let hs = model(ModelName::Hs);
    let s = EncodingStrategy::product(vec![0, 2], vec![0, 2]);
    let fam = encode(&hs, &s).unwrap();
    let w = perfect_decoder_exists(&hs, &fam).unwrap().expect("witness");
    assert!(w.is_complete(&hs));
    assert_eq!(replay(&hs, &s, &w).unwrap(), q(1, 1));
}

#[test]
fn classical_embedding_reaches_thirteen_sixteenths() {
    let cb = model(ModelName::ClassicalBit);
    // local state 0 = ω0, 1 = ω2; only string 00 sends ω0
    let s = EncodingStrategy::product(vec![0, 1, 1, 1], vec![0, 1, 1, 1]);
    let fam = encode(&cb, &s).unwrap();
    assert_eq!(best_decoder_value(&cb, &fam).unwrap(), q(13, 16));
}

#[test]
fn out_of_range_assignment_is_rejected() {
    let hy = model(ModelName::HybridA);
    let s = EncodingStrategy::correlated(20, vec![0, 1, 2, 0], vec![0; 4]);
    assert!(encode(&hy, &s).is_err());
    let s = EncodingStrategy::correlated(21, vec![0; 4], vec![0; 4]);
    assert!(encode(&hy, &s).is_err());
    let s = EncodingStrategy::product(vec![0; 3], vec![0; 3]);
    assert!(encode(&hy, &s).is_err());
}

fn opts(jobs: usize) -> SearchOptions {
    SearchOptions {
        jobs: Some(jobs),
        ..SearchOptions::default()
    }
}

#[test]
fn classical_bit_one_bit_game_is_perfect() {
    let cb = model(ModelName::ClassicalBit);
    let r = search_perfect(&cb, 2, Families::Product, &opts(2)).unwrap();
    let p = r.perfect.as_ref().expect("perfect strategy");
    assert_eq!(p.replay_success, q(1, 1));
    assert_eq!(r.best_value(), Some(&q(1, 1)));
    assert_eq!(r.strategies_examined, 16);
}

#[test]
fn classical_bit_two_bit_optimum() {
    let cb = model(ModelName::ClassicalBit);
    let r = search_perfect(&cb, 4, Families::Both, &opts(2)).unwrap();
    assert!(r.perfect.is_none());
    assert_eq!(r.best_value(), Some(&q(13, 16)));
}

#[test]
fn hs_product_search_has_no_perfect_strategy() {
    let hs = model(ModelName::Hs);
    let r = search_perfect(&hs, 4, Families::Product, &opts(4)).unwrap();
    assert!(r.perfect.is_none());
    assert_eq!(r.strategies_examined, 65536);
    assert_eq!(r.farkas_certificates_verified, r.distinct_lps);
    assert_eq!(r.audit.confirmed_infeasible, r.audit.distinct_lps);
    eprintln!("HS product best value {}", r.best_value().unwrap());
}

#[test]
fn hybrid_and_frozen_have_no_perfect_strategy() {
    let mut names = vec![ModelName::HybridA, ModelName::HybridB];
    names.extend((16..24).map(ModelName::Frozen));
    for name in names {
        let m = model(name);
        let r = search_perfect(&m, 4, Families::Both, &opts(4)).unwrap();
        assert!(r.perfect.is_none(), "{name}");
        assert_eq!(r.farkas_certificates_verified, r.distinct_lps, "{name}");
    }
}

#[test]
fn single_thread_matches_parallel() {
    let hy = model(ModelName::HybridA);
    let a = search_perfect(&hy, 4, Families::Both, &opts(1)).unwrap();
    let b = search_perfect(&hy, 4, Families::Both, &opts(4)).unwrap();
    let strip = |r: &alc_core::SearchReport| {
        let mut r = r.clone();
        r.wall_time = None;
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
}

