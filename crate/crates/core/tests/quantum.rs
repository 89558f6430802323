use alc_core::quantum::{
    bell_overlap_matrix, bell_protocol, encoded_bell_state, fidelity, product_strategy_report,
    product_strategy_search, singlet, ProductStrategy, OVERLAP_TOLERANCE,
};

#[test]
fn bell_protocol_is_perfect() {
    let r = bell_protocol();
    assert_eq!(r.pairs.len(), 16);
    assert!((r.overall - 1.0).abs() < OVERLAP_TOLERANCE);
    for p in &r.pairs {
        assert!((-OVERLAP_TOLERANCE..=1.0 + OVERLAP_TOLERANCE).contains(&p.success));
    }
    let first = &r.pairs[0];
    assert!((first.p_equal - 1.0).abs() < OVERLAP_TOLERANCE);
    // x = 01, y = 10: σ1 ⊗ σ2
    let p12 = &r.pairs[4 + 2];
    assert_eq!((p12.x.as_str(), p12.y.as_str()), ("01", "10"));
    assert!(p12.p_equal.abs() < OVERLAP_TOLERANCE);
}

#[test]
fn diagonal_encodings_give_the_singlet() {
    for k in 0..4 {
        let f = fidelity(&encoded_bell_state(k, k), &singlet());
        assert!((f - 1.0).abs() < OVERLAP_TOLERANCE, "k = {k}");
    }
}

#[test]
fn encoded_states_form_four_bell_classes() {
    let m = bell_overlap_matrix();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let near0 = v.abs() < OVERLAP_TOLERANCE;
            let near1 = (v - 1.0).abs() < OVERLAP_TOLERANCE;
            assert!(near0 || near1, "({i},{j}) = {v}");
            // same class iff k xor k' agrees
            let same = (i / 4) ^ (i % 4) == (j / 4) ^ (j % 4);
            assert_eq!(near1, same, "({i},{j})");
        }
    }
}

#[test]
fn classical_embedding_value() {
    let s = ProductStrategy::classical_embedding();
    assert!(s.decoder_is_valid());
    assert!((s.value() - 13.0 / 16.0).abs() < 1e-12);
}

#[test]
fn zero_iterations_reports_initial_value() {
    let r = product_strategy_report(7, 1, 0).unwrap();
    assert_eq!(r.runs[0].initial, r.best_value);
    assert!((0.0..=1.0).contains(&r.best_value));
    assert!(product_strategy_report(7, 0, 10).is_err());
}

#[test]
fn seesaw_is_monotone_valid_and_short_of_one() {
    let r = product_strategy_report(2024, 64, 200).unwrap();
    assert!(r.monotone());
    assert!(r.decoders_valid());
    assert!(r.best_value < 1.0 - 1e-3, "{}", r.best_value);
    assert!(r.best_value >= 13.0 / 16.0 - 1e-9, "{}", r.best_value);
    eprintln!("seesaw best {}", r.best_value);
}

#[test]
fn seesaw_is_deterministic() {
    assert_eq!(
        product_strategy_search(5, 8, 50).unwrap(),
        product_strategy_search(5, 8, 50).unwrap()
    );
}
