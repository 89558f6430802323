//! Qubit strategies in floating point: the entangled Pauli protocol and a
//! seesaw search over product-state encodings.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AlcError, Result};

pub type Complex64 = Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

pub const OVERLAP_TOLERANCE: f64 = 1e-12;
pub const PSD_TOLERANCE: f64 = 1e-10;

const LABELS: [&str; 4] = ["00", "01", "10", "11"];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `σ0 = 𝕀`, `σ1 = X`, `σ2 = Y`, `σ3 = Z`.
pub fn pauli(k: usize) -> CMatrix {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let e = match k & 3 {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, -i, i, z],
        _ => [o, z, z, -o],
    };
    CMatrix::from_row_slice(2, 2, &e)
}

/// `(|01⟩ − |10⟩)/√2` as a 4×1 column.
pub fn singlet() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_column_slice(4, 1, &[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)])
}

pub fn projector(v: &CMatrix) -> CMatrix {
    v * v.adjoint()
}

/// `|⟨a|b⟩|²` for normalised columns.
pub fn fidelity(a: &CMatrix, b: &CMatrix) -> f64 {
    (a.adjoint() * b)[(0, 0)].norm_sqr()
}

/// `(σ_k ⊗ σ_k') |ψ⁻⟩`.
pub fn encoded_bell_state(k: usize, k2: usize) -> CMatrix {
    pauli(k).kronecker(&pauli(k2)) * singlet()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumPair {
    pub x: String,
    pub y: String,
    /// Probability of the singlet outcome.
    pub p_equal: f64,
    pub success: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumProtocolResult {
    pub pairs: Vec<QuantumPair>,
    pub overall: f64,
}

/// String `x` applies `σ_x`; the verifier measures `{|ψ⁻⟩⟨ψ⁻|, 𝕀 − |ψ⁻⟩⟨ψ⁻|}`
/// and answers "equal" on the first outcome.
pub fn bell_protocol() -> QuantumProtocolResult {
    let s = singlet();
    let m_eq = projector(&s);
    let mut pairs = Vec::with_capacity(16);
    for x in 0..4 {
        for y in 0..4 {
            let psi = encoded_bell_state(x, y);
            let p_equal = (psi.adjoint() * &m_eq * &psi)[(0, 0)].re;
            let success = if x == y { p_equal } else { 1.0 - p_equal };
            pairs.push(QuantumPair {
                x: LABELS[x].into(),
                y: LABELS[y].into(),
                p_equal,
                success,
            });
        }
    }
    let overall = pairs.iter().map(|p| p.success).sum::<f64>() / 16.0;
    QuantumProtocolResult { pairs, overall }
}

/// `|⟨ψ_{kk'}|ψ_{jj'}⟩|²` over all 16 encoded states, rows and columns in
/// `4k + k'` order.
pub fn bell_overlap_matrix() -> Vec<Vec<f64>> {
    let states: Vec<CMatrix> = (0..16).map(|i| encoded_bell_state(i / 4, i % 4)).collect();
    states
        .iter()
        .map(|a| states.iter().map(|b| fidelity(a, b)).collect())
        .collect()
}

/// A product-state encoding with a two-outcome decoder `{P, 𝕀 − P}`.
#[derive(Clone, Debug)]
pub struct ProductStrategy {
    pub alice: Vec<CMatrix>,
    pub bob: Vec<CMatrix>,
    /// `M_eq`, a 4×4 Hermitian operator with `0 ≤ P ≤ 𝕀`.
    pub decoder: CMatrix,
}

fn identity4() -> CMatrix {
    CMatrix::identity(4, 4)
}

impl ProductStrategy {
    pub fn value(&self) -> f64 {
        let mut total = 0.0;
        for (x, a) in self.alice.iter().enumerate() {
            for (y, b) in self.bob.iter().enumerate() {
                let psi = a.kronecker(b);
                let p = (psi.adjoint() * &self.decoder * &psi)[(0, 0)].re;
                total += if x == y { p } else { 1.0 - p };
            }
        }
        total / (self.alice.len() * self.bob.len()) as f64
    }

    /// Both `P` and `𝕀 − P` positive semidefinite and Hermitian.
    pub fn decoder_is_valid(&self) -> bool {
        is_effect(&self.decoder) && is_effect(&(identity4() - &self.decoder))
    }

    /// `|0⟩` for `00`, `|1⟩` otherwise on both sides; answer "equal" only on
    /// `|00⟩`.
    pub fn classical_embedding() -> Self {
        let ket = |b: usize| {
            let mut v = CMatrix::zeros(2, 1);
            v[(b, 0)] = c(1.0, 0.0);
            v
        };
        let enc: Vec<CMatrix> = [0, 1, 1, 1].iter().map(|&b| ket(b)).collect();
        let mut p = CMatrix::zeros(4, 4);
        p[(0, 0)] = c(1.0, 0.0);
        Self {
            alice: enc.clone(),
            bob: enc,
            decoder: p,
        }
    }

    fn random(rng: &mut ChaCha8Rng) -> Self {
        let alice = (0..4).map(|_| random_ket(rng, 2)).collect();
        let bob = (0..4).map(|_| random_ket(rng, 2)).collect();
        let mut h = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                h[(i, j)] = gaussian(rng);
            }
        }
        let h = &h + h.adjoint();
        Self {
            alice,
            bob,
            decoder: positive_part_projector(&h),
        }
    }

    /// `Σ_{xy} ± ρ_x ⊗ σ_y`, `+` on equal pairs.
    fn score_operator(&self) -> CMatrix {
        let mut s = CMatrix::zeros(4, 4);
        for (x, a) in self.alice.iter().enumerate() {
            for (y, b) in self.bob.iter().enumerate() {
                let rho = projector(&a.kronecker(b));
                if x == y {
                    s += rho;
                } else {
                    s -= rho;
                }
            }
        }
        s
    }

    fn improve_decoder(&mut self) {
        self.decoder = positive_part_projector(&self.score_operator());
    }

    fn improve_alice(&mut self) {
        let comp = identity4() - &self.decoder;
        for x in 0..self.alice.len() {
            let mut k = CMatrix::zeros(2, 2);
            for (y, b) in self.bob.iter().enumerate() {
                let op = if x == y { &self.decoder } else { &comp };
                k += partial_contract_bob(op, b);
            }
            self.alice[x] = top_eigenvector(&k);
        }
    }

    fn improve_bob(&mut self) {
        let comp = identity4() - &self.decoder;
        for y in 0..self.bob.len() {
            let mut k = CMatrix::zeros(2, 2);
            for (x, a) in self.alice.iter().enumerate() {
                let op = if x == y { &self.decoder } else { &comp };
                k += partial_contract_alice(op, a);
            }
            self.bob[y] = top_eigenvector(&k);
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let v = CMatrix::from_fn(dim, 1, |_, _| gaussian(rng));
    let n = v.norm();
    v / c(n, 0.0)
}

fn is_effect(m: &CMatrix) -> bool {
    let herm = (m - m.adjoint()).norm() <= PSD_TOLERANCE;
    herm && m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .all(|&l| l >= -PSD_TOLERANCE)
}

/// Projector onto the span of eigenvectors with positive eigenvalue.
fn positive_part_projector(h: &CMatrix) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut p = CMatrix::zeros(n, n);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 0.0 {
            let v = eig.eigenvectors.columns(i, 1).into_owned();
            p += &v * v.adjoint();
        }
    }
    p
}

fn top_eigenvector(k: &CMatrix) -> CMatrix {
    let eig = k.clone().symmetric_eigen();
    let i = eig.eigenvalues.imax();
    eig.eigenvectors.columns(i, 1).into_owned()
}

/// `(𝕀 ⊗ ⟨b|) op (𝕀 ⊗ |b⟩)`.
fn partial_contract_bob(op: &CMatrix, b: &CMatrix) -> CMatrix {
    let lift = CMatrix::identity(2, 2).kronecker(b);
    lift.adjoint() * op * lift
}

/// `(⟨a| ⊗ 𝕀) op (|a⟩ ⊗ 𝕀)`.
fn partial_contract_alice(op: &CMatrix, a: &CMatrix) -> CMatrix {
    let lift = a.kronecker(&CMatrix::identity(2, 2));
    lift.adjoint() * op * lift
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeesawRun {
    pub restart: usize,
    pub initial: f64,
    pub value: f64,
    /// Largest drop between consecutive objective values (0 when monotone).
    pub worst_decrease: f64,
    pub decoder_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeesawReport {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub best_value: f64,
    pub best_restart: usize,
    pub runs: Vec<SeesawRun>,
}

impl SeesawReport {
    pub fn monotone(&self) -> bool {
        self.runs.iter().all(|r| r.worst_decrease <= OVERLAP_TOLERANCE)
    }

    pub fn decoders_valid(&self) -> bool {
        self.runs.iter().all(|r| r.decoder_valid)
    }
}

fn seesaw_run(seed: u64, restart: usize, iterations: usize) -> SeesawRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
    let mut s = ProductStrategy::random(&mut rng);
    let initial = s.value();
    let mut last = initial;
    let mut worst_decrease: f64 = 0.0;
    let mut decoder_valid = s.decoder_is_valid();
    for _ in 0..iterations {
        for step in 0..3 {
            match step {
                0 => s.improve_decoder(),
                1 => s.improve_alice(),
                _ => s.improve_bob(),
            }
            let v = s.value();
            worst_decrease = worst_decrease.max(last - v);
            last = v;
        }
        decoder_valid &= s.decoder_is_valid();
    }
    SeesawRun {
        restart,
        initial,
        value: last,
        worst_decrease,
        decoder_valid,
    }
}

/// Alternating optimisation over product encodings; restarts run in
/// parallel, each seeded with `seed + restart`.
pub fn product_strategy_report(seed: u64, restarts: usize, iterations: usize) -> Result<SeesawReport> {
    if restarts == 0 {
        return Err(AlcError::InvalidStrategy("at least one restart".into()));
    }
    let runs: Vec<SeesawRun> = (0..restarts)
        .into_par_iter()
        .map(|r| seesaw_run(seed, r, iterations))
        .collect();
    let best = runs
        .iter()
        .fold(&runs[0], |b, r| if r.value > b.value { r } else { b });
    Ok(SeesawReport {
        seed,
        restarts,
        iterations,
        best_value: best.value,
        best_restart: best.restart,
        runs,
    })
}

pub fn product_strategy_search(seed: u64, restarts: usize, iterations: usize) -> Result<f64> {
    Ok(product_strategy_report(seed, restarts, iterations)?.best_value)
}
