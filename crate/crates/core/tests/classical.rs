use alc_core::classical::{
    evaluate, evaluate_mixture, exhaustive_optimum, first_bit_strategy, from_published,
    thirteen_sixteenths_strategy, PureClassicalStrategy,
};
use alc_core::reference::{CLASSICAL_OPTIMUM, PUBLISHED_TABLE1};
use alc_core::{Rational, Scalar};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

#[test]
fn optimum_is_thirteen_sixteenths() {
    let (best, winners) = exhaustive_optimum();
    assert_eq!(best, q(CLASSICAL_OPTIMUM.0, CLASSICAL_OPTIMUM.1));
    assert!(winners.contains(&thirteen_sixteenths_strategy()));
    assert!(winners.iter().all(|s| evaluate(s) == best));
}

#[test]
fn no_strategy_is_perfect() {
    assert!((0..PureClassicalStrategy::COUNT)
        .map(|i| PureClassicalStrategy::from_index(i).unwrap())
        .all(|s| evaluate(&s) < q(1, 1)));
}

#[test]
fn named_strategies() {
    assert_eq!(evaluate(&first_bit_strategy()), q(3, 4));
    assert_eq!(evaluate(&thirteen_sixteenths_strategy()), q(13, 16));
}

#[test]
fn published_rows_evaluate_as_listed() {
    for row in &PUBLISHED_TABLE1 {
        let s = from_published(row).unwrap();
        assert_eq!(evaluate(&s), q(row.value.0, row.value.1));
    }
}

#[test]
fn alice_relabelling_preserves_value() {
    for i in 0..PureClassicalStrategy::COUNT {
        let s = PureClassicalStrategy::from_index(i).unwrap();
        let r = s.relabel_alice();
        assert_eq!(evaluate(&s), evaluate(&r));
        assert_eq!(r.relabel_alice(), s);
    }
}

#[test]
fn mixture_rejects_bad_weights() {
    let s = first_bit_strategy();
    assert!(evaluate_mixture(&[(q(1, 2), s)]).is_err());
    assert!(evaluate_mixture(&[(q(3, 2), s), (q(-1, 2), s)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mixtures_are_convex_and_bounded(
        parts in prop::collection::vec((1u32..20, 0u16..4096), 1..6)
    ) {
        let total: u32 = parts.iter().map(|p| p.0).sum();
        let mix: Vec<_> = parts
            .iter()
            .map(|&(w, i)| (q(w as i64, total as i64), PureClassicalStrategy::from_index(i).unwrap()))
            .collect();
        let v = evaluate_mixture(&mix).unwrap();
        let avg: Rational = mix.iter().map(|(w, s)| w * evaluate(s)).sum();
        prop_assert_eq!(&v, &avg);
        prop_assert!(v <= q(13, 16));
    }
}
