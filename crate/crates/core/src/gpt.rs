//! Theory-neutral GPT objects: states, effects, reversible transformations,
//! finite models and two-party measurements.
//!
//! Elementary systems are 3-vectors and the probability rule is the dot
//! product. Bipartite systems are 3×3 matrices with rule `Tr[Eᵀ Ω]`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{AlcError, Result};
use crate::linalg::{trace_product, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Repr<T> {
    Elementary(Vector<T>),
    Bipartite(Matrix<T>),
}

impl<T: Scalar> Repr<T> {
    fn keys(&self) -> Vec<T::Key> {
        match self {
            Repr::Elementary(v) => v.keys(),
            Repr::Bipartite(m) => m.keys(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GptState<T> {
    pub repr: Repr<T>,
    pub catalog_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GptEffect<T> {
    pub repr: Repr<T>,
    pub catalog_index: Option<usize>,
}

macro_rules! impl_repr_ctors {
    ($ty:ident) => {
        impl<T: Scalar> $ty<T> {
            pub fn elementary(v: Vector<T>, catalog_index: Option<usize>) -> Self {
                Self {
                    repr: Repr::Elementary(v),
                    catalog_index,
                }
            }

            pub fn bipartite(m: Matrix<T>, catalog_index: Option<usize>) -> Self {
                Self {
                    repr: Repr::Bipartite(m),
                    catalog_index,
                }
            }

            pub fn matrix(&self) -> Option<&Matrix<T>> {
                match &self.repr {
                    Repr::Bipartite(m) => Some(m),
                    Repr::Elementary(_) => None,
                }
            }

            pub fn vector(&self) -> Option<&Vector<T>> {
                match &self.repr {
                    Repr::Elementary(v) => Some(v),
                    Repr::Bipartite(_) => None,
                }
            }
        }
    };
}

impl_repr_ctors!(GptState);
impl_repr_ctors!(GptEffect);

/// Outcome probability of `effect` on `state`.
pub fn probability<T: Scalar>(effect: &GptEffect<T>, state: &GptState<T>) -> Result<T> {
    match (&effect.repr, &state.repr) {
        (Repr::Elementary(e), Repr::Elementary(w)) => e.dot(w),
        (Repr::Bipartite(e), Repr::Bipartite(w)) => trace_product(e, w),
        _ => Err(AlcError::RepresentationMismatch),
    }
}

/// A local reversible operation available to one party.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOp<T> {
    pub label: String,
    pub matrix: Matrix<T>,
}

/// An elementary preparation available to one party.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalState<T> {
    pub label: String,
    pub vector: Vector<T>,
}

/// `Ω ↦ W^swap (A Ω Bᵀ)`, with `W` acting as transposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformation<T> {
    pub alice_op: Matrix<T>,
    pub bob_op: Matrix<T>,
    pub swap: bool,
    pub label: String,
}

impl<T: Scalar> Transformation<T> {
    pub fn local(alice: &LocalOp<T>, bob: &LocalOp<T>, swap: bool) -> Self {
        let label = if swap {
            format!("W({}⊗{})", alice.label, bob.label)
        } else {
            format!("{}⊗{}", alice.label, bob.label)
        };
        Self {
            alice_op: alice.matrix.clone(),
            bob_op: bob.matrix.clone(),
            swap,
            label,
        }
    }

    pub fn identity() -> Self {
        Self {
            alice_op: Matrix::identity(3),
            bob_op: Matrix::identity(3),
            swap: false,
            label: "id".into(),
        }
    }

    pub fn act(&self, m: &Matrix<T>) -> Matrix<T> {
        let out = self
            .alice_op
            .mul(m)
            .and_then(|am| am.mul(&self.bob_op.transpose()))
            .expect("3x3 operands");
        if self.swap {
            out.transpose()
        } else {
            out
        }
    }

    /// The transformation `after ∘ self` (apply `self` first).
    pub fn then(&self, after: &Self) -> Self {
        let (a2, b2) = if self.swap {
            (&after.bob_op, &after.alice_op)
        } else {
            (&after.alice_op, &after.bob_op)
        };
        Self {
            alice_op: a2.mul(&self.alice_op).expect("3x3"),
            bob_op: b2.mul(&self.bob_op).expect("3x3"),
            swap: self.swap ^ after.swap,
            label: format!("{}∘{}", after.label, self.label),
        }
    }
}

/// Applies `t` to a bipartite state. The result carries no catalog index; use
/// [`GptModel::apply`] to recover it.
pub fn apply<T: Scalar>(t: &Transformation<T>, state: &GptState<T>) -> Result<GptState<T>> {
    match &state.repr {
        Repr::Bipartite(m) => Ok(GptState::bipartite(t.act(m), None)),
        Repr::Elementary(_) => Err(AlcError::RepresentationMismatch),
    }
}

/// A finite bipartite model: extremal states and effects, reversible
/// transformations, and the party-local resources used to build encodings.
#[derive(Clone, Debug)]
pub struct GptModel<T: Scalar> {
    pub name: String,
    pub states: Vec<GptState<T>>,
    pub effects: Vec<GptEffect<T>>,
    pub transformations: Vec<Transformation<T>>,
    pub local_ops: Vec<LocalOp<T>>,
    pub local_states: Vec<LocalState<T>>,
    pub unit: GptEffect<T>,
    pub measurement_dimension: usize,
    index: HashMap<Vec<T::Key>, usize>,
}

impl<T: Scalar> GptModel<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<GptState<T>>,
        effects: Vec<GptEffect<T>>,
        transformations: Vec<Transformation<T>>,
        local_ops: Vec<LocalOp<T>>,
        local_states: Vec<LocalState<T>>,
        unit: GptEffect<T>,
        measurement_dimension: usize,
    ) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.repr.keys(), i))
            .collect();
        Self {
            name: name.into(),
            states,
            effects,
            transformations,
            local_ops,
            local_states,
            unit,
            measurement_dimension,
            index,
        }
    }

    /// Position of a state in `self.states`, by exact equality.
    pub fn position_of(&self, m: &Matrix<T>) -> Option<usize> {
        self.index.get(&m.keys()).copied()
    }

    /// Position of the state carrying catalog index `idx`.
    pub fn position_of_catalog(&self, idx: usize) -> Option<usize> {
        self.states
            .iter()
            .position(|s| s.catalog_index == Some(idx))
    }

    /// Catalog index of the state at `pos`, or `pos` itself for uncatalogued
    /// states.
    pub fn catalog_index_at(&self, pos: usize) -> usize {
        self.states[pos].catalog_index.unwrap_or(pos)
    }

    pub fn apply(&self, t: &Transformation<T>, state: &GptState<T>) -> Result<GptState<T>> {
        let mut out = apply(t, state)?;
        out.catalog_index = out
            .matrix()
            .and_then(|m| self.position_of(m))
            .and_then(|p| self.states[p].catalog_index);
        Ok(out)
    }

    pub fn state_label(&self, pos: usize) -> String {
        match self.states[pos].catalog_index {
            Some(i) => format!("Ω{i}"),
            None => format!("state#{pos}"),
        }
    }

    pub fn effect_label(&self, pos: usize) -> String {
        match self.effects[pos].catalog_index {
            Some(i) => format!("E{i}"),
            None => format!("effect#{pos}"),
        }
    }

    /// `probabilities[effect][state]`.
    pub fn probability_table(&self) -> Result<Vec<Vec<T>>> {
        self.effects
            .iter()
            .map(|e| self.states.iter().map(|s| probability(e, s)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation<T> {
    ProbabilityOutOfRange {
        effect: String,
        state: String,
        value: T,
    },
    Unnormalized {
        state: String,
        value: T,
    },
    NotClosed {
        transformation: String,
        state: String,
    },
}

impl<T: fmt::Display> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProbabilityOutOfRange {
                effect,
                state,
                value,
            } => write!(f, "Tr[{effect}ᵀ{state}] = {value} outside [0,1]"),
            Violation::Unnormalized { state, value } => {
                write!(f, "{state} has unit-effect value {value}")
            }
            Violation::NotClosed {
                transformation,
                state,
            } => write!(f, "{transformation} maps {state} outside the model"),
        }
    }
}

/// Consistency and closure check. Empty iff every effect/state pair lies in
/// `[0,1]`, every state is normalized and every transformation maps model
/// states to model states.
pub fn validate_model<T: Scalar>(model: &GptModel<T>) -> Vec<Violation<T>> {
    let mut out = Vec::new();
    let (zero, one) = (T::zero(), T::one());
    for (si, s) in model.states.iter().enumerate() {
        match probability(&model.unit, s) {
            Ok(v) if v == one => {}
            Ok(value) => out.push(Violation::Unnormalized {
                state: model.state_label(si),
                value,
            }),
            Err(_) => out.push(Violation::Unnormalized {
                state: model.state_label(si),
                value: zero.clone(),
            }),
        }
    }
    for (ei, e) in model.effects.iter().enumerate() {
        for (si, s) in model.states.iter().enumerate() {
            let Ok(value) = probability(e, s) else {
                continue;
            };
            if value < zero || value > one {
                out.push(Violation::ProbabilityOutOfRange {
                    effect: model.effect_label(ei),
                    state: model.state_label(si),
                    value,
                });
            }
        }
    }
    for t in &model.transformations {
        for (si, s) in model.states.iter().enumerate() {
            let closed = s
                .matrix()
                .map(|m| model.position_of(&t.act(m)).is_some())
                .unwrap_or(false);
            if !closed {
                out.push(Violation::NotClosed {
                    transformation: t.label.clone(),
                    state: model.state_label(si),
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome<T> {
    /// Nonnegative weights over the model's effect positions.
    pub weights: Vec<(usize, T)>,
    pub effect: Matrix<T>,
}

/// A measurement built as conic combinations of a model's extremal effects.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<T> {
    pub outcomes: Vec<MeasurementOutcome<T>>,
}

impl<T: Scalar> Measurement<T> {
    /// Fails unless every weight is nonnegative and the outcomes sum to the
    /// model's unit effect exactly.
    pub fn new(model: &GptModel<T>, outcome_weights: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let unit = model.unit.matrix().ok_or(AlcError::RepresentationMismatch)?;
        let mut total = Matrix::zeros(3, 3);
        let mut outcomes = Vec::with_capacity(outcome_weights.len());
        for weights in outcome_weights {
            let mut effect = Matrix::zeros(3, 3);
            for (pos, w) in &weights {
                if *w < T::zero() {
                    return Err(AlcError::InvalidStrategy(format!(
                        "negative weight {w} on effect {pos}"
                    )));
                }
                let e = model
                    .effects
                    .get(*pos)
                    .and_then(GptEffect::matrix)
                    .ok_or(AlcError::IndexOutOfRange {
                        what: "effect",
                        index: *pos,
                        len: model.effects.len(),
                    })?;
                effect = effect.add(&e.scale(w))?;
            }
            total = total.add(&effect)?;
            outcomes.push(MeasurementOutcome { weights, effect });
        }
        if total != *unit {
            return Err(AlcError::IncompleteMeasurement);
        }
        Ok(Self { outcomes })
    }

    pub fn probabilities(&self, state: &GptState<T>) -> Result<Vec<T>> {
        let w = state.matrix().ok_or(AlcError::RepresentationMismatch)?;
        self.outcomes
            .iter()
            .map(|o| trace_product(&o.effect, w))
            .collect()
    }
}
