use alc_core::linalg::lp::LpProblem;
use alc_core::linalg::{Matrix, Vector};
use alc_core::scalar::Scalar;
use alc_core::selfcheck::{
    classical_convexity_samples, d8_table, elementary_completeness, gauge_samples,
    klein_group_table, lp_oracle_suite, oracle, OracleAnswer,
};
use alc_core::squarebit::{build_catalog, build_model, ModelName};
use alc_core::Rational;

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

#[test]
fn oracle_handles_textbook_cases() {
    // x1 + x2 = 1, maximise x1.
    let a = Matrix::from_rows(vec![vec![r(1), r(1)]]).unwrap();
    let p = LpProblem::maximize(a.clone(), Vector::new(vec![r(1)]), Vector::new(vec![r(1), r(0)]));
    assert_eq!(oracle(&p), OracleAnswer::Optimal(r(1)));
    // x1 - x2 = 1 is unbounded in x1.
    let a = Matrix::from_rows(vec![vec![r(1), r(-1)]]).unwrap();
    let p = LpProblem::maximize(a, Vector::new(vec![r(1)]), Vector::new(vec![r(1), r(0)]));
    assert_eq!(oracle(&p), OracleAnswer::Unbounded);
    // x1 + x2 = -1 has no nonnegative solution.
    let a = Matrix::from_rows(vec![vec![r(1), r(1)]]).unwrap();
    let p = LpProblem::feasibility(a, Vector::new(vec![r(-1)]));
    assert_eq!(oracle(&p), OracleAnswer::Infeasible);
}

#[test]
fn simplex_matches_oracle_on_random_instances() {
    let s = lp_oracle_suite(7, 1000).unwrap();
    assert_eq!(s.agreements, 1000, "{s:?}");
    assert_eq!(s.verified, 1000, "{s:?}");
    assert!(s.feasible > 0 && s.infeasible > 0 && s.unbounded > 0, "{s:?}");
}

#[test]
fn group_tables_are_groups() {
    let cat = build_catalog::<Rational>();
    let d8 = d8_table(&cat);
    assert!(d8.closed && d8.has_identity && d8.has_inverses);
    // Non-abelian.
    assert!((0..8).any(|i| (0..8).any(|j| d8.table[i][j] != d8.table[j][i])));
    let k = klein_group_table().unwrap();
    assert!(k.closed && k.has_identity && k.has_inverses);
    assert!((0..4).all(|i| k.table[i][i] == k.table[0][0]));
    assert!(elementary_completeness(&cat));
}

#[test]
fn gauge_and_convexity_samples_pass() {
    let pr = build_model::<Rational>(ModelName::Pr).unwrap();
    assert!(gauge_samples(&pr, 3, 100).unwrap().passed);
    let c = classical_convexity_samples(3, 500).unwrap();
    assert!(c.passed, "{c:?}");
}
