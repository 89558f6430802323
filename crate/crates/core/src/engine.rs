//! The ALC game engine over a finite [`GptModel`]: encodings, exact decoder
//! feasibility, optimal decoder values and the exhaustive perfect-strategy
//! search.
//!
//! Strings are indexed `0..n` (`n` = 2 or 4); the pair `(x, y)` lives at
//! `x * n + y` in every per-pair vector.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};

use crate::error::{AlcError, Result};
use crate::gpt::{probability, GptModel, GptState, Transformation};
use crate::linalg::lp::{solve_feasibility, solve_lp_max, LpOutcome, LpProblem, LpStatus};
use crate::linalg::{trace_product, Matrix, Vector};
use crate::scalar::ExactScalar;

/// Largest model the packed search keys support.
pub const MAX_SEARCH_STATES: usize = 25;

pub fn string_labels(n_strings: usize) -> Result<Vec<String>> {
    match n_strings {
        2 => Ok(vec!["0".into(), "1".into()]),
        4 => Ok(["00", "01", "10", "11"].map(String::from).to_vec()),
        n => Err(AlcError::UnsupportedStringCount(n)),
    }
}

pub(crate) fn ser_frac<T: ExactScalar, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_fraction_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    Correlated,
    Product,
}

/// How Alice and Bob map their strings to systems sent to the verifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EncodingStrategy {
    pub kind: EncodingKind,
    /// Catalog index of the shared state; `None` for product encodings.
    pub shared_state: Option<usize>,
    /// Local op index (correlated) or local state index (product) per string.
    pub alice_assign: Vec<usize>,
    pub bob_assign: Vec<usize>,
}

impl EncodingStrategy {
    pub fn correlated(shared_state: usize, alice: Vec<usize>, bob: Vec<usize>) -> Self {
        Self {
            kind: EncodingKind::Correlated,
            shared_state: Some(shared_state),
            alice_assign: alice,
            bob_assign: bob,
        }
    }

    pub fn product(alice: Vec<usize>, bob: Vec<usize>) -> Self {
        Self {
            kind: EncodingKind::Product,
            shared_state: None,
            alice_assign: alice,
            bob_assign: bob,
        }
    }

    pub fn n_strings(&self) -> usize {
        self.alice_assign.len()
    }

    fn validate<T: ExactScalar>(&self, model: &GptModel<T>) -> Result<()> {
        let n = self.n_strings();
        string_labels(n)?;
        if self.bob_assign.len() != n {
            return Err(AlcError::InvalidStrategy(format!(
                "Alice assigns {n} strings but Bob assigns {}",
                self.bob_assign.len()
            )));
        }
        let (what, len) = match self.kind {
            EncodingKind::Correlated => ("local op", model.local_ops.len()),
            EncodingKind::Product => ("local state", model.local_states.len()),
        };
        for &i in self.alice_assign.iter().chain(&self.bob_assign) {
            if i >= len {
                return Err(AlcError::IndexOutOfRange { what, index: i, len });
            }
        }
        match (self.kind, self.shared_state) {
            (EncodingKind::Correlated, None) => Err(AlcError::InvalidStrategy(
                "correlated encoding without a shared state".into(),
            )),
            (EncodingKind::Product, Some(_)) => Err(AlcError::InvalidStrategy(
                "product encoding with a shared state".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Human-readable labels (`Ω16`, `U2-`, `ω1`) keyed by string.
    pub fn describe<T: ExactScalar>(&self, model: &GptModel<T>) -> StrategyDescription {
        let labels = string_labels(self.n_strings()).unwrap_or_default();
        let name = |i: usize| match self.kind {
            EncodingKind::Correlated => model
                .local_ops
                .get(i)
                .map_or_else(|| format!("op#{i}"), |o| o.label.clone()),
            EncodingKind::Product => model
                .local_states
                .get(i)
                .map_or_else(|| format!("state#{i}"), |s| s.label.clone()),
        };
        let side = |assign: &[usize]| {
            labels
                .iter()
                .zip(assign)
                .map(|(l, &i)| (l.clone(), name(i)))
                .collect()
        };
        StrategyDescription {
            kind: self.kind,
            shared_state: self.shared_state.map(|i| format!("Ω{i}")),
            alice: side(&self.alice_assign),
            bob: side(&self.bob_assign),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyDescription {
    pub kind: EncodingKind,
    pub shared_state: Option<String>,
    pub alice: BTreeMap<String, String>,
    pub bob: BTreeMap<String, String>,
}

/// The 16 (or 4) states the verifier may receive.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedFamily<T: ExactScalar> {
    pub n_strings: usize,
    pub states: Vec<GptState<T>>,
    /// Model positions of `states`.
    pub positions: Vec<usize>,
    /// Catalog indices received on equal pairs.
    pub eq_set: BTreeSet<usize>,
    /// Catalog indices received on unequal pairs.
    pub neq_set: BTreeSet<usize>,
}

impl<T: ExactScalar> EncodedFamily<T> {
    fn from_positions(model: &GptModel<T>, n: usize, positions: Vec<usize>) -> Self {
        let mut eq_set = BTreeSet::new();
        let mut neq_set = BTreeSet::new();
        for (k, &p) in positions.iter().enumerate() {
            let c = model.catalog_index_at(p);
            if k / n == k % n {
                eq_set.insert(c);
            } else {
                neq_set.insert(c);
            }
        }
        Self {
            n_strings: n,
            states: positions.iter().map(|&p| model.states[p].clone()).collect(),
            positions,
            eq_set,
            neq_set,
        }
    }

    pub fn state(&self, x: usize, y: usize) -> &GptState<T> {
        &self.states[x * self.n_strings + y]
    }

    /// Model positions seen on equal and on unequal pairs.
    pub fn position_sets(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let n = self.n_strings;
        let mut eq = BTreeSet::new();
        let mut neq = BTreeSet::new();
        for (k, &p) in self.positions.iter().enumerate() {
            if k / n == k % n {
                eq.insert(p);
            } else {
                neq.insert(p);
            }
        }
        (eq, neq)
    }

    /// `(position, #equal pairs − #unequal pairs)` for every received state.
    pub fn multiplicity_weights(&self) -> Vec<(usize, i64)> {
        let n = self.n_strings;
        let mut w: BTreeMap<usize, i64> = BTreeMap::new();
        for (k, &p) in self.positions.iter().enumerate() {
            *w.entry(p).or_default() += if k / n == k % n { 1 } else { -1 };
        }
        w.into_iter().filter(|&(_, c)| c != 0).collect()
    }
}

pub fn encode<T: ExactScalar>(
    model: &GptModel<T>,
    strategy: &EncodingStrategy,
) -> Result<EncodedFamily<T>> {
    strategy.validate(model)?;
    let n = strategy.n_strings();
    let mut positions = Vec::with_capacity(n * n);
    match strategy.kind {
        EncodingKind::Correlated => {
            let idx = strategy.shared_state.expect("validated");
            let shared_pos = model
                .position_of_catalog(idx)
                .ok_or(AlcError::IndexOutOfRange {
                    what: "shared state",
                    index: idx,
                    len: model.states.len(),
                })?;
            let shared = &model.states[shared_pos];
            for &a in &strategy.alice_assign {
                for &b in &strategy.bob_assign {
                    let t = Transformation::local(&model.local_ops[a], &model.local_ops[b], false);
                    let out = model.apply(&t, shared)?;
                    let pos = out
                        .matrix()
                        .and_then(|m| model.position_of(m))
                        .ok_or(AlcError::NotInCatalog)?;
                    positions.push(pos);
                }
            }
        }
        EncodingKind::Product => {
            for &a in &strategy.alice_assign {
                for &b in &strategy.bob_assign {
                    let m = model.local_states[a]
                        .vector
                        .outer(&model.local_states[b].vector);
                    positions.push(model.position_of(&m).ok_or(AlcError::NotInCatalog)?);
                }
            }
        }
    }
    Ok(EncodedFamily::from_positions(model, n, positions))
}

/// True when some state is received both on an equal and an unequal pair.
pub fn has_collision<T: ExactScalar>(family: &EncodedFamily<T>) -> bool {
    !family.eq_set.is_disjoint(&family.neq_set)
}

/// A two-outcome measurement `M_eq = Σ pᵢEᵢ`, `M_neq = Σ qⱼEⱼ` over the
/// model's effect list.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderWitness<T> {
    pub p_weights: Vec<T>,
    pub q_weights: Vec<T>,
}

impl<T: ExactScalar> DecoderWitness<T> {
    fn combine(model: &GptModel<T>, weights: &[T]) -> Result<Matrix<T>> {
        let mut m = Matrix::zeros(3, 3);
        for (e, w) in model.effects.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            let em = e.matrix().ok_or(AlcError::RepresentationMismatch)?;
            m = m.add(&em.scale(w))?;
        }
        Ok(m)
    }

    pub fn m_eq(&self, model: &GptModel<T>) -> Result<Matrix<T>> {
        Self::combine(model, &self.p_weights)
    }

    pub fn m_neq(&self, model: &GptModel<T>) -> Result<Matrix<T>> {
        Self::combine(model, &self.q_weights)
    }

    /// Nonnegative weights summing exactly to the unit effect.
    pub fn is_complete(&self, model: &GptModel<T>) -> bool {
        let k = model.effects.len();
        if self.p_weights.len() != k || self.q_weights.len() != k {
            return false;
        }
        if self
            .p_weights
            .iter()
            .chain(&self.q_weights)
            .any(|w| *w < T::zero())
        {
            return false;
        }
        let (Ok(a), Ok(b), Some(u)) = (self.m_eq(model), self.m_neq(model), model.unit.matrix())
        else {
            return false;
        };
        a.add(&b).map(|s| s == *u).unwrap_or(false)
    }

    /// Average success over all `n²` pairs, recomputed from the states.
    pub fn success(&self, model: &GptModel<T>, family: &EncodedFamily<T>) -> Result<T> {
        let m_eq = self.m_eq(model)?;
        let m_neq = self.m_neq(model)?;
        let n = family.n_strings;
        let mut total = T::zero();
        for x in 0..n {
            for y in 0..n {
                let w = family
                    .state(x, y)
                    .matrix()
                    .ok_or(AlcError::RepresentationMismatch)?;
                let m = if x == y { &m_eq } else { &m_neq };
                total = total + trace_product(m, w)?;
            }
        }
        Ok(total / T::from_int((n * n) as i64))
    }

    pub fn describe(&self, model: &GptModel<T>) -> DecoderDescription {
        let side = |ws: &[T]| {
            ws.iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| WeightedEffect {
                    effect: model.effect_label(i),
                    weight: w.to_fraction_string(),
                })
                .collect()
        };
        DecoderDescription {
            m_eq: side(&self.p_weights),
            m_neq: side(&self.q_weights),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedEffect {
    pub effect: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoderDescription {
    pub m_eq: Vec<WeightedEffect>,
    pub m_neq: Vec<WeightedEffect>,
}

/// Decoder linear programs for one model. Variables are `(p, q)` over the
/// effect list; the first nine rows impose `M_eq + M_neq = u⊗uᵀ` entrywise
/// (row-major).
pub struct DecoderLp<'a, T: ExactScalar> {
    model: &'a GptModel<T>,
    /// `table[effect][state position]`.
    table: Vec<Vec<T>>,
}

/// Result of the perfect-decoder LP.
#[derive(Clone, Debug)]
pub enum DecoderDecision<T> {
    Perfect(DecoderWitness<T>),
    /// Farkas vector for the LP in [`DecoderLp::perfect_problem`].
    Impossible(Vector<T>),
}

impl<'a, T: ExactScalar> DecoderLp<'a, T> {
    pub fn new(model: &'a GptModel<T>) -> Result<Self> {
        for e in model.effects.iter().chain(std::iter::once(&model.unit)) {
            if e.matrix().map(Matrix::shape) != Some((3, 3)) {
                return Err(AlcError::RepresentationMismatch);
            }
        }
        Ok(Self {
            model,
            table: model.probability_table()?,
        })
    }

    pub fn model(&self) -> &GptModel<T> {
        self.model
    }

    fn completeness_rows(&self, extra: usize) -> (Matrix<T>, Vector<T>) {
        let k = self.model.effects.len();
        let mut a = Matrix::zeros(9 + extra, 2 * k);
        let mut b = Vector::zeros(9 + extra);
        for (j, e) in self.model.effects.iter().enumerate() {
            let v = e.matrix().expect("checked in new").vectorize();
            for r in 0..9 {
                a[(r, j)] = v[r].clone();
                a[(r, k + j)] = v[r].clone();
            }
        }
        let u = self.model.unit.matrix().expect("checked in new").vectorize();
        for r in 0..9 {
            b[r] = u[r].clone();
        }
        (a, b)
    }

    /// `M_eq` equals 1 on every position in `eq` and 0 on every one in `neq`.
    pub fn perfect_problem(&self, eq: &BTreeSet<usize>, neq: &BTreeSet<usize>) -> LpProblem<T> {
        let (mut a, mut b) = self.completeness_rows(eq.len() + neq.len());
        for (r, (&s, target)) in eq
            .iter()
            .map(|s| (s, T::one()))
            .chain(neq.iter().map(|s| (s, T::zero())))
            .enumerate()
        {
            for (j, row) in self.table.iter().enumerate() {
                a[(9 + r, j)] = row[s].clone();
            }
            b[9 + r] = target;
        }
        LpProblem::feasibility(a, b)
    }

    /// Maximises `Σ c_s · Tr[M_eqᵀ Ω_s]` for `(position, c_s)` weights.
    pub fn value_problem(&self, weights: &[(usize, i64)]) -> LpProblem<T> {
        let (a, b) = self.completeness_rows(0);
        let k = self.model.effects.len();
        let mut c = Vector::zeros(2 * k);
        for (j, row) in self.table.iter().enumerate() {
            c[j] = weights
                .iter()
                .fold(T::zero(), |acc, &(s, w)| acc + row[s].clone() * T::from_int(w));
        }
        LpProblem::maximize(a, b, c)
    }

    fn witness_from(&self, x: &Vector<T>) -> DecoderWitness<T> {
        let k = self.model.effects.len();
        let v = x.as_slice();
        DecoderWitness {
            p_weights: v[..k].to_vec(),
            q_weights: v[k..].to_vec(),
        }
    }

    pub fn decide(&self, eq: &BTreeSet<usize>, neq: &BTreeSet<usize>) -> Result<DecoderDecision<T>> {
        let problem = self.perfect_problem(eq, neq);
        let out = solve_feasibility(&problem)?;
        Ok(match out.status {
            LpStatus::Feasible => {
                DecoderDecision::Perfect(self.witness_from(out.witness.as_ref().expect("feasible")))
            }
            _ => DecoderDecision::Impossible(out.certificate.expect("infeasible carries a certificate")),
        })
    }

    /// Optimal `Σ c_s Tr[M_eqᵀ Ω_s]` and a decoder attaining it.
    pub fn optimise(&self, weights: &[(usize, i64)]) -> Result<(T, DecoderWitness<T>, LpOutcome<T>)> {
        let problem = self.value_problem(weights);
        let out = solve_lp_max(&problem)?;
        match (&out.status, &out.value, &out.witness) {
            (LpStatus::Feasible, Some(v), Some(x)) => Ok((v.clone(), self.witness_from(x), out.clone())),
            _ => Err(AlcError::MalformedLp(format!(
                "decoder value LP ended {:?}; the unit split is always feasible and bounded",
                out.status
            ))),
        }
    }
}

/// Exact decision of whether some decoder wins on every pair.
pub fn perfect_decoder_exists<T: ExactScalar>(
    model: &GptModel<T>,
    family: &EncodedFamily<T>,
) -> Result<Option<DecoderWitness<T>>> {
    let lp = DecoderLp::new(model)?;
    let (eq, neq) = family.position_sets();
    Ok(match lp.decide(&eq, &neq)? {
        DecoderDecision::Perfect(w) => Some(w),
        DecoderDecision::Impossible(_) => None,
    })
}

/// Best average success over all decoders, pairs counted with multiplicity.
pub fn best_decoder_value<T: ExactScalar>(
    model: &GptModel<T>,
    family: &EncodedFamily<T>,
) -> Result<T> {
    Ok(best_decoder(model, family)?.0)
}

/// As [`best_decoder_value`], also returning an optimal decoder.
pub fn best_decoder<T: ExactScalar>(
    model: &GptModel<T>,
    family: &EncodedFamily<T>,
) -> Result<(T, DecoderWitness<T>)> {
    let lp = DecoderLp::new(model)?;
    let n = family.n_strings as i64;
    let (opt, w, _) = lp.optimise(&family.multiplicity_weights())?;
    Ok((value_from_optimum(opt, n), w))
}

fn value_from_optimum<T: ExactScalar>(opt: T, n: i64) -> T {
    (T::from_int(n * (n - 1)) + opt) / T::from_int(n * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Families {
    Correlated,
    Product,
    Both,
}

impl Families {
    fn includes(self, kind: EncodingKind) -> bool {
        matches!(
            (self, kind),
            (Families::Both, _)
                | (Families::Correlated, EncodingKind::Correlated)
                | (Families::Product, EncodingKind::Product)
        )
    }
}

impl fmt::Display for Families {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Families::Correlated => "correlated",
            Families::Product => "product",
            Families::Both => "both",
        })
    }
}

impl FromStr for Families {
    type Err = AlcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlated" => Ok(Families::Correlated),
            "product" => Ok(Families::Product),
            "both" => Ok(Families::Both),
            other => Err(AlcError::InvalidStrategy(format!(
                "unknown family `{other}` (expected correlated, product or both)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    /// Fraction of collision-pruned families re-checked by LP.
    pub audit_rate: f64,
    pub seed: u64,
    /// Also compute the best value over every examined strategy.
    pub best_value: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            jobs: None,
            audit_rate: 0.01,
            seed: 0,
            best_value: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSummary {
    pub rate: f64,
    pub sampled_families: u64,
    pub distinct_lps: usize,
    pub confirmed_infeasible: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: ExactScalar"))]
pub struct PerfectStrategy<T> {
    pub strategy: EncodingStrategy,
    pub strategy_labels: StrategyDescription,
    #[serde(skip)]
    pub witness: DecoderWitness<T>,
    pub decoder: DecoderDescription,
    /// Success recomputed from scratch with the witness decoder.
    #[serde(serialize_with = "ser_frac")]
    pub replay_success: T,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: ExactScalar"))]
pub struct BestStrategy<T> {
    #[serde(serialize_with = "ser_frac")]
    pub value: T,
    pub strategy: EncodingStrategy,
    pub strategy_labels: StrategyDescription,
    pub decoder: DecoderDescription,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: ExactScalar"))]
pub struct SearchReport<T> {
    pub model: String,
    pub n_strings: usize,
    pub families: Families,
    /// Alice's op for the first string fixed to the identity.
    pub gauge_fixed: bool,
    pub strategies_examined: u64,
    pub collisions_pruned: u64,
    /// Distinct `(eq_set, neq_set)` pairs among unpruned strategies, each
    /// decided by one LP.
    pub distinct_lps: usize,
    pub farkas_certificates_verified: usize,
    /// Distinct multiplicity vectors, each needing one value LP.
    pub distinct_objectives: usize,
    pub audit: AuditSummary,
    pub perfect: Option<PerfectStrategy<T>>,
    pub best: Option<BestStrategy<T>>,
    /// Seconds; filled by the search, stripped by callers that want
    /// reproducible output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl<T: ExactScalar> SearchReport<T> {
    pub fn best_value(&self) -> Option<&T> {
        self.best.as_ref().map(|b| &b.value)
    }
}

/// Precomputed index arithmetic for one (model, n, families) search.
struct Plan {
    n: usize,
    num_states: usize,
    /// `alice_table[op][pos]`, `bob_table[op][pos]` for correlated encodings.
    alice_table: Vec<Vec<u8>>,
    bob_table: Vec<Vec<u8>>,
    /// `product_table[a][b]` position of `ω_a ⊗ ω_bᵀ`.
    product_table: Vec<Vec<u8>>,
    ops: usize,
    locals: usize,
    gauge: Option<usize>,
    correlated: bool,
    product: bool,
    /// First rank of product strategies.
    product_offset: u64,
}

#[derive(Clone, Copy)]
struct Prefix {
    kind: EncodingKind,
    shared: usize,
    alice: u64,
}

impl Plan {
    fn new<T: ExactScalar>(model: &GptModel<T>, n: usize, families: Families) -> Result<Self> {
        string_labels(n)?;
        let num_states = model.states.len();
        if num_states > MAX_SEARCH_STATES {
            return Err(AlcError::InvalidModel(format!(
                "{} has {num_states} states; the search supports at most {MAX_SEARCH_STATES}",
                model.name
            )));
        }
        let correlated = families.includes(EncodingKind::Correlated);
        let product = families.includes(EncodingKind::Product);
        let ident = Matrix::<T>::identity(3);
        let side_table = |alice: bool| -> Result<Vec<Vec<u8>>> {
            model
                .local_ops
                .iter()
                .map(|op| {
                    model
                        .states
                        .iter()
                        .map(|s| {
                            let w = s.matrix().ok_or(AlcError::RepresentationMismatch)?;
                            let out = if alice {
                                op.matrix.mul(w)?
                            } else {
                                w.mul(&op.matrix.transpose())?
                            };
                            model
                                .position_of(&out)
                                .map(|p| p as u8)
                                .ok_or(AlcError::NotInCatalog)
                        })
                        .collect()
                })
                .collect()
        };
        let (alice_table, bob_table) = if correlated {
            (side_table(true)?, side_table(false)?)
        } else {
            (Vec::new(), Vec::new())
        };
        let product_table = if product {
            model
                .local_states
                .iter()
                .map(|a| {
                    model
                        .local_states
                        .iter()
                        .map(|b| {
                            model
                                .position_of(&a.vector.outer(&b.vector))
                                .map(|p| p as u8)
                                .ok_or(AlcError::NotInCatalog)
                        })
                        .collect()
                })
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        let ops = model.local_ops.len();
        let gauge = if correlated && local_ops_form_group(model) {
            model.local_ops.iter().position(|o| o.matrix == ident)
        } else {
            None
        };
        let product_offset = if correlated {
            (num_states as u64) * (ops as u64).pow(2 * n as u32)
        } else {
            0
        };
        Ok(Self {
            n,
            num_states,
            alice_table,
            bob_table,
            product_table,
            ops,
            locals: model.local_states.len(),
            gauge,
            correlated,
            product,
            product_offset,
        })
    }

    fn prefixes(&self) -> Vec<Prefix> {
        let n = self.n as u32;
        let mut out = Vec::new();
        if self.correlated {
            let l = self.ops as u64;
            let alices: Vec<u64> = match self.gauge {
                Some(g) => {
                    let rest = l.pow(n - 1);
                    (0..rest).map(|r| g as u64 * rest + r).collect()
                }
                None => (0..l.pow(n)).collect(),
            };
            for shared in 0..self.num_states {
                out.extend(alices.iter().map(|&alice| Prefix {
                    kind: EncodingKind::Correlated,
                    shared,
                    alice,
                }));
            }
        }
        if self.product {
            out.extend((0..(self.locals as u64).pow(n)).map(|alice| Prefix {
                kind: EncodingKind::Product,
                shared: 0,
                alice,
            }));
        }
        out
    }

    fn base(&self, kind: EncodingKind) -> u64 {
        match kind {
            EncodingKind::Correlated => self.ops as u64,
            EncodingKind::Product => self.locals as u64,
        }
    }

    fn rank(&self, p: &Prefix, bob: u64) -> u64 {
        let block = self.base(p.kind).pow(self.n as u32);
        match p.kind {
            EncodingKind::Correlated => (p.shared as u64 * block + p.alice) * block + bob,
            EncodingKind::Product => self.product_offset + p.alice * block + bob,
        }
    }

    fn digits(&self, mut v: u64, base: u64) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for slot in d.iter_mut().rev() {
            *slot = (v % base) as usize;
            v /= base;
        }
        d
    }

    fn strategy<T: ExactScalar>(&self, model: &GptModel<T>, rank: u64) -> EncodingStrategy {
        let n = self.n as u32;
        if self.correlated && rank < self.product_offset {
            let l = self.ops as u64;
            let block = l.pow(n);
            let shared = (rank / (block * block)) as usize;
            let rem = rank % (block * block);
            EncodingStrategy::correlated(
                model.catalog_index_at(shared),
                self.digits(rem / block, l),
                self.digits(rem % block, l),
            )
        } else {
            let m = self.locals as u64;
            let block = m.pow(n);
            let r = rank - self.product_offset;
            EncodingStrategy::product(self.digits(r / block, m), self.digits(r % block, m))
        }
    }

    /// Offset making every packed multiplicity nonnegative.
    fn key_offset(&self) -> u128 {
        (self.n * (self.n - 1)) as u128
    }

    fn run_prefix(&self, p: &Prefix, audit_threshold: u64, seed: u64, acc: &mut Acc) {
        let n = self.n;
        let base = self.base(p.kind);
        let alice = self.digits(p.alice, base);
        let bobs = base.pow(n as u32);
        let alice_states: Vec<u8> = match p.kind {
            EncodingKind::Correlated => alice
                .iter()
                .map(|&a| self.alice_table[a][p.shared])
                .collect(),
            EncodingKind::Product => Vec::new(),
        };
        let zero_key: u128 = (0..self.num_states).fold(0, |k, s| k | (self.key_offset() << (5 * s)));
        let mut bob = vec![0usize; n];
        let mut pos = vec![0u8; n * n];
        for bob_num in 0..bobs {
            for x in 0..n {
                for y in 0..n {
                    pos[x * n + y] = match p.kind {
                        EncodingKind::Correlated => self.bob_table[bob[y]][alice_states[x] as usize],
                        EncodingKind::Product => self.product_table[alice[x]][bob[y]],
                    };
                }
            }
            let (mut eq, mut neq) = (0u32, 0u32);
            let mut key = zero_key;
            for (k, &s) in pos.iter().enumerate() {
                if k / n == k % n {
                    eq |= 1 << s;
                    key += 1u128 << (5 * s as u32);
                } else {
                    neq |= 1 << s;
                    key -= 1u128 << (5 * s as u32);
                }
            }
            let rank = self.rank(p, bob_num);
            acc.examined += 1;
            if acc.track_values {
                acc.values.entry(key).or_insert(rank);
            }
            if eq & neq != 0 {
                acc.pruned += 1;
                if splitmix64(rank ^ seed) < audit_threshold {
                    acc.audit_sampled += 1;
                    acc.audit.entry((eq, neq)).or_insert(rank);
                }
            } else {
                acc.survivors.entry((eq, neq)).or_insert(rank);
            }
            // odometer over Bob's digits, last string fastest
            for d in (0..n).rev() {
                bob[d] += 1;
                if bob[d] < base as usize {
                    break;
                }
                bob[d] = 0;
            }
        }
    }

    fn unpack(&self, key: u128) -> Vec<(usize, i64)> {
        let off = self.key_offset() as i64;
        (0..self.num_states)
            .map(|s| (s, ((key >> (5 * s)) & 31) as i64 - off))
            .filter(|&(_, c)| c != 0)
            .collect()
    }
}

fn local_ops_form_group<T: ExactScalar>(model: &GptModel<T>) -> bool {
    let ops = &model.local_ops;
    ops.iter().all(|a| {
        ops.iter().all(|b| {
            a.matrix
                .mul(&b.matrix)
                .map(|ab| ops.iter().any(|c| c.matrix == ab))
                .unwrap_or(false)
        })
    })
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Default)]
struct Acc {
    track_values: bool,
    examined: u64,
    pruned: u64,
    audit_sampled: u64,
    /// First rank per distinct `(eq mask, neq mask)`.
    survivors: FxHashMap<(u32, u32), u64>,
    audit: FxHashMap<(u32, u32), u64>,
    /// First rank per packed multiplicity vector.
    values: FxHashMap<u128, u64>,
}

impl Acc {
    fn merge(mut self, other: Self) -> Self {
        self.examined += other.examined;
        self.pruned += other.pruned;
        self.audit_sampled += other.audit_sampled;
        for (mine, theirs) in [
            (&mut self.survivors, other.survivors),
            (&mut self.audit, other.audit),
        ] {
            for (k, r) in theirs {
                mine.entry(k).and_modify(|m| *m = (*m).min(r)).or_insert(r);
            }
        }
        for (k, r) in other.values {
            self.values
                .entry(k)
                .and_modify(|m| *m = (*m).min(r))
                .or_insert(r);
        }
        self
    }
}

fn mask_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

/// Exhaustive search for a perfect strategy.
///
/// Correlated encodings apply party-local ops to a shared model state, with
/// Alice's first-string op fixed to the identity whenever the local ops form
/// a group containing it. Product encodings send `ω_a ⊗ ω_bᵀ`. Families are
/// grouped by `(eq_set, neq_set)` so each distinct LP is solved once; the
/// reported witness belongs to the first strategy in enumeration order.
pub fn search_perfect<T: ExactScalar>(
    model: &GptModel<T>,
    n_strings: usize,
    families: Families,
    options: &SearchOptions,
) -> Result<SearchReport<T>> {
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = options.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| AlcError::InvalidStrategy(format!("thread pool: {e}")))?;
    pool.install(|| search_in_pool(model, n_strings, families, options, start))
}

fn search_in_pool<T: ExactScalar>(
    model: &GptModel<T>,
    n: usize,
    families: Families,
    options: &SearchOptions,
    start: Instant,
) -> Result<SearchReport<T>> {
    let plan = Plan::new(model, n, families)?;
    let lp = DecoderLp::new(model)?;
    let audit_threshold = (options.audit_rate.clamp(0.0, 1.0) * u64::MAX as f64) as u64;
    let acc = plan
        .prefixes()
        .par_iter()
        .fold(
            || Acc {
                track_values: options.best_value,
                ..Acc::default()
            },
            |mut acc, p| {
                plan.run_prefix(p, audit_threshold, options.seed, &mut acc);
                acc
            },
        )
        .reduce(Acc::default, Acc::merge);

    let mut survivors: Vec<((u32, u32), u64)> = acc.survivors.into_iter().collect();
    survivors.sort_by_key(|&(_, r)| r);
    let decided: Vec<(u64, DecoderDecision<T>, bool)> = survivors
        .par_iter()
        .map(|&((eq, neq), rank)| {
            let (eq, neq) = (mask_set(eq), mask_set(neq));
            let problem = lp.perfect_problem(&eq, &neq);
            let out = solve_feasibility(&problem)?;
            let verified = out.verify(&problem);
            let decision = match out.status {
                LpStatus::Feasible => {
                    DecoderDecision::Perfect(lp.witness_from(out.witness.as_ref().expect("feasible")))
                }
                _ => DecoderDecision::Impossible(out.certificate.expect("certificate")),
            };
            Ok((rank, decision, verified))
        })
        .collect::<Result<_>>()?;
    let farkas_certificates_verified = decided
        .iter()
        .filter(|(_, d, ok)| *ok && matches!(d, DecoderDecision::Impossible(_)))
        .count();

    let perfect = decided
        .iter()
        .find_map(|(rank, d, _)| match d {
            DecoderDecision::Perfect(w) => Some((*rank, w.clone())),
            DecoderDecision::Impossible(_) => None,
        })
        .map(|(rank, witness)| -> Result<PerfectStrategy<T>> {
            let strategy = plan.strategy(model, rank);
            let family = encode(model, &strategy)?;
            let replay_success = witness.success(model, &family)?;
            Ok(PerfectStrategy {
                strategy_labels: strategy.describe(model),
                decoder: witness.describe(model),
                strategy,
                witness,
                replay_success,
            })
        })
        .transpose()?;

    let audit_keys: Vec<(u32, u32)> = acc.audit.keys().copied().collect();
    let confirmed_infeasible = audit_keys
        .par_iter()
        .map(|&(eq, neq)| {
            let problem = lp.perfect_problem(&mask_set(eq), &mask_set(neq));
            let out = solve_feasibility(&problem)?;
            Ok(out.status == LpStatus::Infeasible && out.verify(&problem))
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();

    let distinct_objectives = acc.values.len();
    let best = if options.best_value {
        let mut keys: Vec<(u128, u64)> = acc.values.into_iter().collect();
        keys.sort_by_key(|&(_, r)| r);
        let solved = keys
            .par_iter()
            .map(|&(key, rank)| {
                let (opt, w, _) = lp.optimise(&plan.unpack(key))?;
                Ok((opt, rank, w))
            })
            .collect::<Result<Vec<_>>>()?;
        // Highest value, then earliest strategy.
        solved
            .into_iter()
            .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
            .map(|(opt, rank, w)| {
                let strategy = plan.strategy(model, rank);
                BestStrategy {
                    value: value_from_optimum(opt, n as i64),
                    strategy_labels: strategy.describe(model),
                    decoder: w.describe(model),
                    strategy,
                }
            })
    } else {
        None
    };

    Ok(SearchReport {
        model: model.name.clone(),
        n_strings: n,
        families,
        gauge_fixed: plan.gauge.is_some(),
        strategies_examined: acc.examined,
        collisions_pruned: acc.pruned,
        distinct_lps: decided.len(),
        farkas_certificates_verified,
        distinct_objectives,
        audit: AuditSummary {
            rate: options.audit_rate,
            sampled_families: acc.audit_sampled,
            distinct_lps: audit_keys.len(),
            confirmed_infeasible,
        },
        perfect,
        best,
        wall_time: Some(start.elapsed().as_secs_f64()),
    })
}

/// Success of an explicit strategy under an explicit decoder.
pub fn replay<T: ExactScalar>(
    model: &GptModel<T>,
    strategy: &EncodingStrategy,
    decoder: &DecoderWitness<T>,
) -> Result<T> {
    let family = encode(model, strategy)?;
    if !decoder.is_complete(model) {
        return Err(AlcError::IncompleteMeasurement);
    }
    decoder.success(model, &family)
}

/// Per-pair probabilities `Tr[M_eqᵀ Ω(x,y)]`, row `x`, column `y`.
pub fn eq_probabilities<T: ExactScalar>(
    model: &GptModel<T>,
    family: &EncodedFamily<T>,
    decoder: &DecoderWitness<T>,
) -> Result<Vec<Vec<T>>> {
    let m = decoder.m_eq(model)?;
    let eff = crate::gpt::GptEffect::bipartite(m, None);
    (0..family.n_strings)
        .map(|x| {
            (0..family.n_strings)
                .map(|y| probability(&eff, family.state(x, y)))
                .collect()
        })
        .collect()
}
