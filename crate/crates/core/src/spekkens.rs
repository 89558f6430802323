//! Toy-bit theory: epistemic states as support sets over ontic states.
//!
//! Ontic values are zero-based here (`0..4`); labels printed for humans are
//! one-based as in the usual `(a.b)` notation. The bipartite ontic state
//! `(a.b)` is bit `4a + b` of a 16-bit support.

use std::fmt;

use serde::Serialize;

use crate::error::{AlcError, Result};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arity {
    Elementary,
    Bipartite,
}

/// Uniform distribution over `support`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ToyEpistemic {
    pub arity: Arity,
    pub support: u16,
}

fn bit(a: usize, b: usize) -> u16 {
    1 << (4 * a + b)
}

impl ToyEpistemic {
    /// `a ∨ b` on one system.
    pub fn elementary(a: usize, b: usize) -> Result<Self> {
        if a >= 4 || b >= 4 || a == b {
            return Err(AlcError::InvalidStrategy(format!(
                "elementary epistemic state needs two distinct ontic values, got {a} and {b}"
            )));
        }
        Ok(Self {
            arity: Arity::Elementary,
            support: 1 << a | 1 << b,
        })
    }

    /// `(a ∨ b).(c ∨ d)`.
    pub fn product(alice: &Self, bob: &Self) -> Result<Self> {
        if alice.arity != Arity::Elementary || bob.arity != Arity::Elementary {
            return Err(AlcError::RepresentationMismatch);
        }
        let mut support = 0;
        for a in 0..4 {
            for b in 0..4 {
                if alice.support >> a & 1 == 1 && bob.support >> b & 1 == 1 {
                    support |= bit(a, b);
                }
            }
        }
        Ok(Self {
            arity: Arity::Bipartite,
            support,
        })
    }

    /// `∨ₐ (a . matching[a])`.
    pub fn matching(matching: [usize; 4]) -> Result<Self> {
        let p = ToyPermutation::new(matching.map(|v| v as u8))?;
        Ok(Self {
            arity: Arity::Bipartite,
            support: (0..4).fold(0, |s, a| s | bit(a, p.apply(a))),
        })
    }

    pub fn bipartite(support: u16) -> Self {
        Self {
            arity: Arity::Bipartite,
            support,
        }
    }

    pub fn size(&self) -> u32 {
        self.support.count_ones()
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        self.support & bit(a, b) != 0
    }

    /// Alice's and Bob's marginal supports.
    fn marginals(&self) -> (u8, u8) {
        let (mut ma, mut mb) = (0u8, 0u8);
        for a in 0..4 {
            for b in 0..4 {
                if self.contains(a, b) {
                    ma |= 1 << a;
                    mb |= 1 << b;
                }
            }
        }
        (ma, mb)
    }

    /// Product of two 2-sets.
    pub fn is_type1(&self) -> bool {
        let (ma, mb) = self.marginals();
        self.arity == Arity::Bipartite
            && self.size() == 4
            && ma.count_ones() == 2
            && mb.count_ones() == 2
    }

    /// A perfect matching between the two parties' ontic values.
    pub fn is_type2(&self) -> bool {
        let (ma, mb) = self.marginals();
        self.arity == Arity::Bipartite && self.size() == 4 && ma == 0xF && mb == 0xF
    }

    /// Knowledge balance for pure states.
    pub fn is_valid(&self) -> bool {
        match self.arity {
            Arity::Elementary => self.support < 16 && self.size() == 2,
            Arity::Bipartite => self.is_type1() || self.is_type2(),
        }
    }
}

impl fmt::Display for ToyEpistemic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.arity {
            Arity::Elementary => {
                for a in 0..4 {
                    if self.support >> a & 1 == 1 {
                        parts.push(format!("{}", a + 1));
                    }
                }
            }
            Arity::Bipartite => {
                for a in 0..4 {
                    for b in 0..4 {
                        if self.contains(a, b) {
                            parts.push(format!("({}.{})", a + 1, b + 1));
                        }
                    }
                }
            }
        }
        f.write_str(&parts.join("∨"))
    }
}

/// A bijection on the four ontic values of one system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ToyPermutation {
    pub mapping: [u8; 4],
}

impl ToyPermutation {
    pub fn new(mapping: [u8; 4]) -> Result<Self> {
        let seen = mapping.iter().fold(0u8, |s, &v| s | 1u8.checked_shl(v as u32).unwrap_or(0));
        if seen != 0xF {
            return Err(AlcError::InvalidStrategy(format!(
                "{mapping:?} is not a permutation of 0..4"
            )));
        }
        Ok(Self { mapping })
    }

    /// `U_k`, `k ∈ 0..4`: identity, `(12)(34)`, `(13)(24)`, `(14)(23)`.
    pub fn u(k: usize) -> Result<Self> {
        if k >= 4 {
            return Err(AlcError::IndexOutOfRange {
                what: "toy permutation",
                index: k,
                len: 4,
            });
        }
        // (a ↦ a xor k) realises exactly these four double transpositions.
        Self::new([0, 1, 2, 3].map(|a: u8| a ^ k as u8))
    }

    pub fn apply(&self, a: usize) -> usize {
        self.mapping[a] as usize
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mapping: [0, 1, 2, 3].map(|a| self.mapping[other.mapping[a] as usize]),
        }
    }
}

/// Two-party measurement given as a partition of the 16 ontic states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyMeasurement {
    pub outcomes: Vec<ToyEpistemic>,
}

impl ToyMeasurement {
    pub fn new(outcomes: Vec<ToyEpistemic>) -> Result<Self> {
        let mut seen = 0u16;
        for o in &outcomes {
            if o.arity != Arity::Bipartite || seen & o.support != 0 || o.support == 0 {
                return Err(AlcError::InvalidStrategy(
                    "measurement blocks must be nonempty and disjoint".into(),
                ));
            }
            seen |= o.support;
        }
        if seen != u16::MAX {
            return Err(AlcError::IncompleteMeasurement);
        }
        Ok(Self { outcomes })
    }

    /// The four-outcome measurement with blocks `ψ0..ψ3`.
    pub fn bell_like() -> Self {
        Self::new((0..4).map(psi).collect()).expect("the ψ_k partition the ontic states")
    }

    /// `{S_I, everything else}`.
    pub fn coarse() -> Self {
        let s1 = psi(0);
        Self::new(vec![s1, ToyEpistemic::bipartite(!s1.support)]).expect("complement partitions")
    }
}

/// `ψ_k = ∨ₐ (a . a xor k)`.
pub fn psi(k: usize) -> ToyEpistemic {
    ToyEpistemic::matching([0, 1, 2, 3].map(|a| a ^ (k & 3))).expect("xor is a bijection")
}

/// Which `ψ_k` a state is, if any.
pub fn psi_index(state: &ToyEpistemic) -> Option<usize> {
    (0..4).find(|&k| psi(k) == *state)
}

/// Pointwise image `(a.b) ↦ (pA(a).pB(b))`.
pub fn apply_local(
    pa: &ToyPermutation,
    pb: &ToyPermutation,
    state: &ToyEpistemic,
) -> Result<ToyEpistemic> {
    if state.arity != Arity::Bipartite {
        return Err(AlcError::RepresentationMismatch);
    }
    let mut support = 0;
    for a in 0..4 {
        for b in 0..4 {
            if state.contains(a, b) {
                support |= bit(pa.apply(a), pb.apply(b));
            }
        }
    }
    Ok(ToyEpistemic::bipartite(support))
}

pub fn outcome_distribution(state: &ToyEpistemic, m: &ToyMeasurement) -> Result<Vec<Rational>> {
    if state.arity != Arity::Bipartite {
        return Err(AlcError::RepresentationMismatch);
    }
    let n = state.size() as i64;
    if n == 0 {
        return Err(AlcError::InvalidStrategy("empty support".into()));
    }
    Ok(m.outcomes
        .iter()
        .map(|o| Rational::from_ratio((state.support & o.support).count_ones() as i64, n))
        .collect())
}

/// `table[k][k']` = index of `(U_k, U_k')[ψ0]` among `ψ0..ψ3`.
pub fn composition_table() -> Result<[[usize; 4]; 4]> {
    let mut t = [[0; 4]; 4];
    for (k, row) in t.iter_mut().enumerate() {
        for (k2, cell) in row.iter_mut().enumerate() {
            let out = apply_local(&ToyPermutation::u(k)?, &ToyPermutation::u(k2)?, &psi(0))?;
            *cell = psi_index(&out).ok_or(AlcError::NotInCatalog)?;
        }
    }
    Ok(t)
}

/// `table[i][j] = l` with `U_i ∘ U_j = U_l`.
pub fn klein_table() -> Result<[[usize; 4]; 4]> {
    let us: Vec<ToyPermutation> = (0..4).map(ToyPermutation::u).collect::<Result<_>>()?;
    let mut t = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let c = us[i].compose(&us[j]);
            t[i][j] = us.iter().position(|u| *u == c).ok_or(AlcError::NotInCatalog)?;
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToyPairOutcome {
    pub x: String,
    pub y: String,
    /// Index `k` of the received `ψ_k`.
    pub received: usize,
    pub answered_equal: bool,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToyProtocolReport {
    /// `composition[k][k']` as in [`composition_table`].
    pub composition: [[usize; 4]; 4],
    pub pairs: Vec<ToyPairOutcome>,
    #[serde(serialize_with = "crate::engine::ser_frac")]
    pub success_four_outcome: Rational,
    #[serde(serialize_with = "crate::engine::ser_frac")]
    pub success_two_outcome: Rational,
}

/// Average success when the verifier answers "equal" iff outcome 0 of `m`
/// fires; string `x` (as `0..4`) selects `U_x`.
pub fn protocol_success(m: &ToyMeasurement) -> Result<Rational> {
    let mut total = Rational::from_int(0);
    for x in 0..4 {
        for y in 0..4 {
            let out = apply_local(&ToyPermutation::u(x)?, &ToyPermutation::u(y)?, &psi(0))?;
            let dist = outcome_distribution(&out, m)?;
            let p_eq = dist[0].clone();
            total += if x == y { p_eq } else { Rational::from_int(1) - p_eq };
        }
    }
    Ok(total / Rational::from_int(16))
}

/// Success of the perfect toy protocol with the four-outcome measurement.
pub fn toy_protocol() -> Result<Rational> {
    protocol_success(&ToyMeasurement::bell_like())
}

pub fn toy_protocol_report() -> Result<ToyProtocolReport> {
    let labels = ["00", "01", "10", "11"];
    let composition = composition_table()?;
    let mut pairs = Vec::with_capacity(16);
    for x in 0..4 {
        for y in 0..4 {
            let received = composition[x][y];
            let answered_equal = received == 0;
            pairs.push(ToyPairOutcome {
                x: labels[x].into(),
                y: labels[y].into(),
                received,
                answered_equal,
                correct: answered_equal == (x == y),
            });
        }
    }
    Ok(ToyProtocolReport {
        composition,
        pairs,
        success_four_outcome: toy_protocol()?,
        success_two_outcome: protocol_success(&ToyMeasurement::coarse())?,
    })
}
