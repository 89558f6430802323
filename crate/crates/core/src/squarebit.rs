//! The square-bit theory: a square elementary state space, its D₈ symmetry
//! group, the 24 bipartite extremal states and effects, and the composite
//! models built from them.
//!
//! Catalog numbering: `Ω_{4i+j} = ω_i ω_jᵀ` and `E_{4i+j} = e_i e_jᵀ` for
//! `i, j ∈ 0..4`, with the entangled states and effects at 16..=23. Local
//! operations are ordered `U0+, U1+, U2+, U3+, U0-, U1-, U2-, U3-`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{AlcError, Result};
use crate::gpt::{
    GptEffect, GptModel, GptState, LocalOp, LocalState, Transformation,
};
use crate::linalg::{trace_product, Matrix, Vector};
use crate::scalar::Scalar;

/// Entangled states as `½ Σ c·ω_a ω_bᵀ`, listed as `(c, a, b)`.
const ENTANGLED_STATE_TERMS: [[(i64, usize, usize); 4]; 8] = [
    [(1, 1, 1), (-1, 2, 2), (1, 2, 3), (1, 3, 2)],
    [(1, 0, 3), (-1, 0, 0), (1, 1, 1), (1, 3, 0)],
    [(1, 0, 0), (-1, 1, 1), (1, 1, 2), (1, 2, 1)],
    [(1, 0, 0), (-1, 0, 3), (1, 1, 3), (1, 3, 2)],
    [(1, 0, 3), (-1, 0, 0), (1, 1, 0), (1, 3, 1)],
    [(1, 0, 0), (-1, 0, 1), (1, 1, 1), (1, 3, 2)],
    [(1, 1, 1), (-1, 2, 1), (1, 2, 2), (1, 3, 0)],
    [(1, 0, 1), (-1, 1, 1), (1, 1, 2), (1, 2, 0)],
];

/// Entangled effects as `Σ c·e_a e_bᵀ` over normalized local effects.
const ENTANGLED_EFFECT_TERMS: [[(i64, usize, usize); 4]; 8] = [
    [(1, 0, 0), (-1, 0, 3), (1, 1, 3), (1, 3, 2)],
    [(1, 1, 1), (-1, 2, 2), (1, 2, 3), (1, 3, 2)],
    [(1, 0, 3), (-1, 0, 0), (1, 1, 1), (1, 3, 0)],
    [(1, 0, 0), (-1, 1, 1), (1, 1, 2), (1, 2, 1)],
    [(1, 0, 1), (-1, 1, 1), (1, 1, 2), (1, 2, 0)],
    [(1, 1, 1), (-1, 2, 1), (1, 2, 2), (1, 3, 0)],
    [(1, 0, 0), (-1, 0, 1), (1, 1, 1), (1, 3, 2)],
    [(1, 0, 3), (-1, 0, 0), (1, 1, 0), (1, 3, 1)],
];

pub const NUM_STATES: usize = 24;
pub const NUM_EFFECTS: usize = 24;

/// Labels of the D₈ elements in catalog order.
pub const D8_LABELS: [&str; 8] = ["U0+", "U1+", "U2+", "U3+", "U0-", "U1-", "U2-", "U3-"];

#[derive(Clone, Debug)]
pub struct Catalog<T: Scalar> {
    pub omega: [Vector<T>; 4],
    pub e: [Vector<T>; 4],
    pub u: Vector<T>,
    pub d8: Vec<LocalOp<T>>,
    pub states: Vec<Matrix<T>>,
    pub effects: Vec<Matrix<T>>,
}

/// `U_k^s`: rotation by `kπ/2`, composed with the reflection `y ↦ -y` when
/// `s = -1`.
pub fn d8_element<T: Scalar>(k: usize, s: i64) -> Matrix<T> {
    let (c, sn) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4];
    Matrix::from_ratios(3, 3, &[c, -s * sn, 0, sn, s * c, 0, 0, 0, 1], 1)
}

pub fn build_catalog<T: Scalar>() -> Catalog<T> {
    let omega = [
        Vector::from_ratios(&[1, 0, 1], 1),
        Vector::from_ratios(&[0, 1, 1], 1),
        Vector::from_ratios(&[-1, 0, 1], 1),
        Vector::from_ratios(&[0, -1, 1], 1),
    ];
    let e = [
        Vector::from_ratios(&[1, 1, 1], 2),
        Vector::from_ratios(&[-1, 1, 1], 2),
        Vector::from_ratios(&[-1, -1, 1], 2),
        Vector::from_ratios(&[1, -1, 1], 2),
    ];
    let u = Vector::from_ratios(&[0, 0, 1], 1);

    let d8 = (0..8)
        .map(|i| LocalOp {
            label: D8_LABELS[i].to_string(),
            matrix: d8_element(i % 4, if i < 4 { 1 } else { -1 }),
        })
        .collect();

    let combine = |vs: &[Vector<T>; 4], terms: &[(i64, usize, usize); 4], scale: T| {
        terms
            .iter()
            .fold(Matrix::zeros(3, 3), |acc, &(c, a, b)| {
                acc.add(&vs[a].outer(&vs[b]).scale(&T::from_int(c)))
                    .expect("3x3")
            })
            .scale(&scale)
    };

    let mut states: Vec<Matrix<T>> = (0..16).map(|n| omega[n / 4].outer(&omega[n % 4])).collect();
    states.extend(
        ENTANGLED_STATE_TERMS
            .iter()
            .map(|t| combine(&omega, t, T::from_ratio(1, 2))),
    );
    let mut effects: Vec<Matrix<T>> = (0..16).map(|n| e[n / 4].outer(&e[n % 4])).collect();
    effects.extend(
        ENTANGLED_EFFECT_TERMS
            .iter()
            .map(|t| combine(&e, t, T::one())),
    );

    Catalog {
        omega,
        e,
        u,
        d8,
        states,
        effects,
    }
}

impl<T: Scalar> Catalog<T> {
    pub fn unit_effect(&self) -> Matrix<T> {
        self.u.outer(&self.u)
    }

    pub fn state_index(&self, m: &Matrix<T>) -> Option<usize> {
        self.states.iter().position(|s| s == m)
    }

    pub fn state(&self, i: usize) -> GptState<T> {
        GptState::bipartite(self.states[i].clone(), Some(i))
    }

    pub fn effect(&self, i: usize) -> GptEffect<T> {
        GptEffect::bipartite(self.effects[i].clone(), Some(i))
    }

    pub fn local_transformation(&self, alice: usize, bob: usize) -> Transformation<T> {
        Transformation::local(&self.d8[alice], &self.d8[bob], false)
    }

    /// The full `{W^i (U ⊗ U')}` group, 128 elements, non-swapped first.
    pub fn full_transformations(&self) -> Vec<Transformation<T>> {
        let mut out = Vec::with_capacity(128);
        for swap in [false, true] {
            for a in &self.d8 {
                for b in &self.d8 {
                    out.push(Transformation::local(a, b, swap));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelName {
    Pr,
    Hs,
    HybridA,
    HybridB,
    Frozen(u32),
    /// Square bit restricted to `ω0, ω2`: an embedded classical bit.
    ClassicalBit,
}

impl ModelName {
    pub fn all_composite_models() -> Vec<ModelName> {
        let mut v = vec![ModelName::Hs, ModelName::Pr, ModelName::HybridA, ModelName::HybridB];
        v.extend((16..=23).map(ModelName::Frozen));
        v
    }

    pub fn slug(&self) -> String {
        match self {
            ModelName::Pr => "pr".into(),
            ModelName::Hs => "hs".into(),
            ModelName::HybridA => "hybrid-a".into(),
            ModelName::HybridB => "hybrid-b".into(),
            ModelName::Frozen(n) => format!("frozen-{n}"),
            ModelName::ClassicalBit => "classical-bit".into(),
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelName::Pr => write!(f, "PR"),
            ModelName::Hs => write!(f, "HS"),
            ModelName::HybridA => write!(f, "Hybrid-A"),
            ModelName::HybridB => write!(f, "Hybrid-B"),
            ModelName::Frozen(n) => write!(f, "Frozen({n})"),
            ModelName::ClassicalBit => write!(f, "Classical-bit"),
        }
    }
}

impl FromStr for ModelName {
    type Err = AlcError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "pr" => Ok(ModelName::Pr),
            "hs" => Ok(ModelName::Hs),
            "hybrid-a" | "hybrida" => Ok(ModelName::HybridA),
            "hybrid-b" | "hybridb" => Ok(ModelName::HybridB),
            "classical-bit" | "classical" => Ok(ModelName::ClassicalBit),
            _ => {
                let n = lower
                    .strip_prefix("frozen-")
                    .or_else(|| lower.strip_prefix("frozen"))
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .ok_or_else(|| AlcError::InvalidModel(s.to_string()))?;
                if (16..=23).contains(&n) {
                    Ok(ModelName::Frozen(n))
                } else {
                    Err(AlcError::FrozenIndexOutOfRange(n))
                }
            }
        }
    }
}

pub fn build_model<T: Scalar>(name: ModelName) -> Result<GptModel<T>> {
    build_model_from(&build_catalog(), name)
}

pub fn build_model_from<T: Scalar>(cat: &Catalog<T>, name: ModelName) -> Result<GptModel<T>> {
    let factorized: BTreeSet<usize> = (0..16).collect();
    let with = |extra: &[usize]| -> BTreeSet<usize> {
        factorized.iter().copied().chain(extra.iter().copied()).collect()
    };
    let all: BTreeSet<usize> = (0..24).collect();
    let op = |i: usize| cat.d8[i].clone();
    let products = |ops: &[usize]| -> Vec<Transformation<T>> {
        ops.iter()
            .flat_map(|&a| ops.iter().map(move |&b| (a, b)))
            .map(|(a, b)| cat.local_transformation(a, b))
            .collect()
    };
    let all_local: Vec<usize> = (0..4).collect();

    let (states, effects, transformations, local_ops, local_state_idx) = match name {
        ModelName::Pr => (
            all.clone(),
            factorized.clone(),
            cat.full_transformations(),
            (0..8).map(op).collect::<Vec<_>>(),
            all_local,
        ),
        ModelName::Hs => (
            factorized.clone(),
            all.clone(),
            cat.full_transformations(),
            (0..8).map(op).collect(),
            all_local,
        ),
        ModelName::HybridA | ModelName::HybridB => {
            let extra = if name == ModelName::HybridA { [20, 22] } else { [21, 23] };
            (
                with(&extra),
                with(&extra),
                products(&[0, 2]),
                vec![op(0), op(2)],
                all_local,
            )
        }
        ModelName::Frozen(n) => {
            if !(16..=23).contains(&n) {
                return Err(AlcError::FrozenIndexOutOfRange(n));
            }
            let n = n as usize;
            let id = Transformation::local(&cat.d8[0], &cat.d8[0], false);
            let mut ts = vec![id];
            if n <= 19 {
                ts.push(Transformation::local(&cat.d8[0], &cat.d8[0], true));
            }
            (with(&[n]), with(&[n]), ts, vec![op(0)], all_local)
        }
        ModelName::ClassicalBit => {
            let sub: BTreeSet<usize> = [0, 2, 8, 10].into_iter().collect();
            (
                sub.clone(),
                sub,
                products(&[0, 2]),
                vec![op(0), op(2)],
                vec![0, 2],
            )
        }
    };

    Ok(GptModel::new(
        name.to_string(),
        states.into_iter().map(|i| cat.state(i)).collect(),
        effects.into_iter().map(|i| cat.effect(i)).collect(),
        transformations,
        local_ops,
        local_state_idx
            .into_iter()
            .map(|i| LocalState {
                label: format!("ω{i}"),
                vector: cat.omega[i].clone(),
            })
            .collect(),
        GptEffect::bipartite(cat.unit_effect(), None),
        2,
    ))
}

/// `table[state][effect] = Tr[E_effectᵀ Ω_state]` over the full catalog.
pub fn compute_table3<T: Scalar>(cat: &Catalog<T>) -> Vec<Vec<T>> {
    cat.states
        .iter()
        .map(|s| {
            cat.effects
                .iter()
                .map(|e| trace_product(e, s).expect("3x3"))
                .collect()
        })
        .collect()
}

/// The factorized 16×16 block of [`compute_table3`].
pub fn compute_table4<T: Scalar>(cat: &Catalog<T>) -> Vec<Vec<T>> {
    compute_table3(cat)
        .into_iter()
        .take(16)
        .map(|row| row.into_iter().take(16).collect())
        .collect()
}

/// `table[alice][bob]` = catalog index of `U_alice Ω16 U_bobᵀ`.
pub fn compute_table5<T: Scalar>(cat: &Catalog<T>) -> Result<[[usize; 8]; 8]> {
    let mut out = [[0usize; 8]; 8];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let img = cat.local_transformation(a, b).act(&cat.states[16]);
            *cell = cat.state_index(&img).ok_or(AlcError::NotInCatalog)?;
        }
    }
    Ok(out)
}

pub fn is_valid_probability<T: Scalar>(v: &T) -> bool {
    *v >= T::zero() && *v <= T::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::{probability, validate_model};
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn elementary_constants() {
        let cat = build_catalog::<Rational>();
        assert_eq!(cat.omega[0], Vector::from_ratios(&[1, 0, 1], 1));
        assert_eq!(cat.omega[3], Vector::from_ratios(&[0, -1, 1], 1));
        assert_eq!(cat.e[0].add(&cat.e[2]).unwrap(), cat.u);
        assert_eq!(cat.e[1].add(&cat.e[3]).unwrap(), cat.u);
        assert_eq!(cat.e[0].dot(&cat.omega[0]).unwrap(), q(1, 1));
        assert_eq!(cat.e[2].dot(&cat.omega[0]).unwrap(), q(0, 1));
    }

    #[test]
    fn index_arithmetic() {
        let cat = build_catalog::<Rational>();
        assert_eq!(cat.states[5], cat.omega[1].outer(&cat.omega[1]));
        assert_eq!(
            trace_product(&cat.effects[16], &cat.states[0]).unwrap(),
            q(0, 1)
        );
    }

    #[test]
    fn d8_has_four_rotations_and_four_reflections() {
        let cat = build_catalog::<Rational>();
        let det2 = |m: &Matrix<Rational>| {
            m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone()
        };
        let rot = cat.d8.iter().filter(|o| det2(&o.matrix) == q(1, 1)).count();
        let refl = cat.d8.iter().filter(|o| det2(&o.matrix) == q(-1, 1)).count();
        assert_eq!((rot, refl), (4, 4));
    }

    #[test]
    fn model_sizes() {
        let pr = build_model::<Rational>(ModelName::Pr).unwrap();
        assert_eq!((pr.states.len(), pr.effects.len(), pr.transformations.len()), (24, 16, 128));
        let ha = build_model::<Rational>(ModelName::HybridA).unwrap();
        assert_eq!((ha.states.len(), ha.effects.len(), ha.transformations.len()), (18, 18, 4));
        assert!(ha.states.iter().any(|s| s.catalog_index == Some(20)));
        let f16 = build_model::<Rational>(ModelName::Frozen(16)).unwrap();
        assert_eq!(f16.states.len(), 17);
        assert_eq!(f16.transformations.len(), 2);
        assert!(f16.transformations[1].swap);
        let f20 = build_model::<Rational>(ModelName::Frozen(20)).unwrap();
        assert_eq!(f20.transformations.len(), 1);
        assert!(build_model::<Rational>(ModelName::Frozen(24)).is_err());
    }

    #[test]
    fn consistent_models_validate() {
        let mut names = vec![
            ModelName::Pr,
            ModelName::Hs,
            ModelName::HybridA,
            ModelName::HybridB,
            ModelName::ClassicalBit,
        ];
        names.extend((20..=23).map(ModelName::Frozen));
        for name in names {
            let m = build_model::<Rational>(name).unwrap();
            let v = validate_model(&m);
            assert!(v.is_empty(), "{name}: {:?}", v.first());
        }
    }

    #[test]
    fn frozen_with_matching_index_below_twenty_is_inconsistent() {
        // Tr[E_nᵀ Ω_n] = 3/2 for n in 16..=19; it is the only violation.
        for n in 16..=19 {
            let m = build_model::<Rational>(ModelName::Frozen(n)).unwrap();
            let v = validate_model(&m);
            assert_eq!(
                v,
                vec![crate::gpt::Violation::ProbabilityOutOfRange {
                    effect: format!("E{n}"),
                    state: format!("Ω{n}"),
                    value: q(3, 2),
                }]
            );
        }
    }

    #[test]
    fn validation_flags_shaded_cell() {
        let cat = build_catalog::<Rational>();
        let m = GptModel::new(
            "probe",
            vec![cat.state(16)],
            vec![cat.effect(18)],
            vec![],
            vec![],
            vec![],
            GptEffect::bipartite(cat.unit_effect(), None),
            2,
        );
        let v = validate_model(&m);
        assert_eq!(v.len(), 1);
        match &v[0] {
            crate::gpt::Violation::ProbabilityOutOfRange { value, .. } => {
                assert_eq!(*value, q(-1, 2))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn model_name_parsing() {
        assert_eq!("pr".parse::<ModelName>().unwrap(), ModelName::Pr);
        assert_eq!("frozen-17".parse::<ModelName>().unwrap(), ModelName::Frozen(17));
        assert_eq!(
            "frozen-9".parse::<ModelName>(),
            Err(AlcError::FrozenIndexOutOfRange(9))
        );
        assert!("square".parse::<ModelName>().is_err());
        for n in ModelName::all_composite_models() {
            assert_eq!(n.slug().parse::<ModelName>().unwrap(), n);
        }
    }

    #[test]
    fn float_catalog_agrees_with_exact() {
        let exact = compute_table3(&build_catalog::<Rational>());
        let float = compute_table3(&build_catalog::<f64>());
        for (re, rf) in exact.iter().zip(&float) {
            for (a, b) in re.iter().zip(rf) {
                assert_eq!(Scalar::to_f64(a), *b);
            }
        }
    }

    #[test]
    fn unit_normalizes_every_state() {
        let cat = build_catalog::<Rational>();
        let unit = GptEffect::bipartite(cat.unit_effect(), None);
        for i in 0..24 {
            assert_eq!(probability(&unit, &cat.state(i)).unwrap(), q(1, 1));
        }
    }
}
