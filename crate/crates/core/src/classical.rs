//! Pure classical strategies for the ALC game: each party sends one bit, the
//! verifier answers from the two received bits.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{AlcError, Result};
use crate::reference::PublishedClassicalRow;
use crate::scalar::Scalar;
use crate::Rational;

const STRINGS: [&str; 4] = ["00", "01", "10", "11"];

/// Encodings are truth tables over the strings `00, 01, 10, 11` (bit `x` is
/// the symbol sent for string `x`); the decoder's bit `2a + b` is set when it
/// answers "equal" on symbols `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureClassicalStrategy {
    pub alice_enc: u8,
    pub bob_enc: u8,
    pub decoder: u8,
}

impl PureClassicalStrategy {
    pub const COUNT: u16 = 4096;

    pub fn new(alice: [u8; 4], bob: [u8; 4], decoder_equal: [bool; 4]) -> Result<Self> {
        let pack = |bits: [u8; 4]| -> Result<u8> {
            bits.iter().enumerate().try_fold(0u8, |acc, (i, &b)| match b {
                0 | 1 => Ok(acc | (b << i)),
                _ => Err(AlcError::InvalidStrategy(format!("symbol {b} is not a bit"))),
            })
        };
        Ok(Self {
            alice_enc: pack(alice)?,
            bob_enc: pack(bob)?,
            decoder: decoder_equal
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &e)| acc | ((e as u8) << i)),
        })
    }

    /// Bits 0–3 Alice, 4–7 Bob, 8–11 decoder.
    pub fn from_index(index: u16) -> Result<Self> {
        if index >= Self::COUNT {
            return Err(AlcError::IndexOutOfRange {
                what: "classical strategy",
                index: index as usize,
                len: Self::COUNT as usize,
            });
        }
        Ok(Self {
            alice_enc: (index & 0xF) as u8,
            bob_enc: ((index >> 4) & 0xF) as u8,
            decoder: ((index >> 8) & 0xF) as u8,
        })
    }

    pub fn index(&self) -> u16 {
        self.alice_enc as u16 | (self.bob_enc as u16) << 4 | (self.decoder as u16) << 8
    }

    pub fn alice(&self, x: usize) -> u8 {
        self.alice_enc >> x & 1
    }

    pub fn bob(&self, y: usize) -> u8 {
        self.bob_enc >> y & 1
    }

    pub fn says_equal(&self, a: u8, b: u8) -> bool {
        self.decoder >> (2 * a + b) & 1 == 1
    }

    /// Number of the 16 pairs answered correctly.
    pub fn correct_pairs(&self) -> u32 {
        let mut n = 0;
        for x in 0..4 {
            for y in 0..4 {
                if self.says_equal(self.alice(x), self.bob(y)) == (x == y) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Swaps Alice's two symbols and rewires the decoder to match.
    pub fn relabel_alice(&self) -> Self {
        let mut decoder = 0;
        for a in 0..2u8 {
            for b in 0..2u8 {
                if self.says_equal(1 - a, b) {
                    decoder |= 1 << (2 * a + b);
                }
            }
        }
        Self {
            alice_enc: !self.alice_enc & 0xF,
            bob_enc: self.bob_enc,
            decoder,
        }
    }

    pub fn describe(&self) -> ClassicalStrategyDescription {
        let enc = |f: &dyn Fn(usize) -> u8| {
            STRINGS
                .iter()
                .enumerate()
                .map(|(x, s)| (s.to_string(), f(x)))
                .collect()
        };
        let decoder = (0..4u8)
            .map(|k| {
                let (a, b) = (k >> 1, k & 1);
                let answer = if self.says_equal(a, b) { "equal" } else { "not_equal" };
                (format!("{a}{b}"), answer.to_string())
            })
            .collect();
        ClassicalStrategyDescription {
            index: self.index(),
            alice: enc(&|x| self.alice(x)),
            bob: enc(&|y| self.bob(y)),
            decoder,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalStrategyDescription {
    pub index: u16,
    pub alice: BTreeMap<String, u8>,
    pub bob: BTreeMap<String, u8>,
    /// Keyed by received symbols `ab`.
    pub decoder: BTreeMap<String, String>,
}

/// Average success over the 16 equiprobable string pairs.
pub fn evaluate(strategy: &PureClassicalStrategy) -> Rational {
    Rational::from_ratio(strategy.correct_pairs() as i64, 16)
}

/// Success of a shared-randomness mixture; weights must be nonnegative and
/// sum to one.
pub fn evaluate_mixture(mixture: &[(Rational, PureClassicalStrategy)]) -> Result<Rational> {
    if let Some((w, _)) = mixture.iter().find(|(w, _)| *w < Rational::zero()) {
        return Err(AlcError::InvalidStrategy(format!("negative weight {w}")));
    }
    let mass: Rational = mixture.iter().map(|(w, _)| w).sum();
    if mass != Rational::from_int(1) {
        return Err(AlcError::InvalidStrategy(format!(
            "mixture weights sum to {mass}"
        )));
    }
    // Probability of a correct answer on each pair, then the pair average.
    let mut total = Rational::zero();
    for x in 0..4 {
        for y in 0..4 {
            let p: Rational = mixture
                .iter()
                .filter(|(_, s)| s.says_equal(s.alice(x), s.bob(y)) == (x == y))
                .map(|(w, _)| w)
                .sum();
            total += p;
        }
    }
    Ok(total / Rational::from_int(16))
}

/// Exact optimum over all 4096 pure strategies and every maximiser, in index
/// order.
pub fn exhaustive_optimum() -> (Rational, Vec<PureClassicalStrategy>) {
    let all: Vec<_> = (0..PureClassicalStrategy::COUNT)
        .map(|i| PureClassicalStrategy::from_index(i).expect("in range"))
        .collect();
    let best = all.iter().map(|s| s.correct_pairs()).max().unwrap_or(0);
    let winners = all
        .into_iter()
        .filter(|s| s.correct_pairs() == best)
        .collect();
    (Rational::from_ratio(best as i64, 16), winners)
}

/// Only `00` maps to symbol 0 on both sides; the verifier answers "equal"
/// only on `(0,0)`.
pub fn thirteen_sixteenths_strategy() -> PureClassicalStrategy {
    PureClassicalStrategy::new([0, 1, 1, 1], [0, 1, 1, 1], [true, false, false, false])
        .expect("bits")
}

/// Both parties send their first bit; the verifier compares.
pub fn first_bit_strategy() -> PureClassicalStrategy {
    PureClassicalStrategy::new([0, 0, 1, 1], [0, 0, 1, 1], [true, false, false, true])
        .expect("bits")
}

pub fn from_published(row: &PublishedClassicalRow) -> Result<PureClassicalStrategy> {
    PureClassicalStrategy::new(row.alice, row.bob, row.decoder)
}
