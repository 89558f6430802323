//! Independent cross-checks run by the consolidated report: an LP oracle by
//! basis enumeration, group closure tables, measurement completeness, gauge
//! samples, classical convexity samples and seesaw behaviour.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{evaluate, evaluate_mixture, PureClassicalStrategy};
use crate::engine::{encode, EncodingStrategy};
use crate::error::Result;
use crate::gpt::GptModel;
use crate::linalg::lp::{solve_feasibility, solve_lp_max, LpProblem, LpStatus};
use crate::linalg::{Matrix, Vector};
use crate::quantum::{product_strategy_report, SeesawReport};
use crate::scalar::{ExactScalar, Scalar};
use crate::spekkens::klein_table;
use crate::squarebit::{build_catalog, build_model_from, Catalog, ModelName};
use crate::Rational;

/// Unique solution of `A x = b` (exact elimination), or `None` when `A` has
/// dependent columns or the system is inconsistent.
pub fn solve_unique<T: ExactScalar>(a: &Matrix<T>, b: &Vector<T>) -> Option<Vec<T>> {
    let (m, n) = a.shape();
    let mut rows: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        let inv = T::one() / rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in 0..=n {
                    let d = rows[pivot_row][k].clone() * f.clone();
                    rows[r][k] = rows[r][k].clone() - d;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| rows[i][n].clone()).collect())
}

/// Every basic feasible solution of `A x = b, x ≥ 0`.
pub fn basic_feasible_solutions<T: ExactScalar>(a: &Matrix<T>, b: &Vector<T>) -> Vec<Vector<T>> {
    let (m, n) = a.shape();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if cols.len() > m {
            continue;
        }
        let sub = Matrix::from_rows(
            (0..m)
                .map(|i| cols.iter().map(|&j| a[(i, j)].clone()).collect())
                .collect(),
        )
        .unwrap_or_else(|_| Matrix::zeros(m, 0));
        let sub = if cols.is_empty() { Matrix::zeros(m, 0) } else { sub };
        if let Some(xs) = solve_unique(&sub, b) {
            if xs.iter().all(|v| *v >= T::zero()) {
                let mut x = Vector::zeros(n);
                for (&j, v) in cols.iter().zip(xs) {
                    x[j] = v;
                }
                out.push(x);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleAnswer<T> {
    Infeasible,
    Feasible,
    Optimal(T),
    Unbounded,
}

/// Brute-force answer for tiny problems (at most ~12 variables).
pub fn oracle<T: ExactScalar>(p: &LpProblem<T>) -> OracleAnswer<T> {
    let vertices = basic_feasible_solutions(&p.constraint_matrix, &p.rhs);
    if vertices.is_empty() {
        return OracleAnswer::Infeasible;
    }
    let Some(c) = &p.objective else {
        return OracleAnswer::Feasible;
    };
    // Rays: BFS of {A d = 0, Σd = 1, d ≥ 0}.
    let (m, n) = p.constraint_matrix.shape();
    let mut ray_a = Matrix::zeros(m + 1, n);
    for i in 0..m {
        for j in 0..n {
            ray_a[(i, j)] = p.constraint_matrix[(i, j)].clone();
        }
    }
    for j in 0..n {
        ray_a[(m, j)] = T::one();
    }
    let mut ray_b = Vector::zeros(m + 1);
    ray_b[m] = T::one();
    let improving = basic_feasible_solutions(&ray_a, &ray_b)
        .iter()
        .any(|d| d.dot(c).map(|v| v > T::zero()).unwrap_or(false));
    if improving {
        return OracleAnswer::Unbounded;
    }
    let best = vertices
        .iter()
        .map(|x| x.dot(c).expect("lengths agree"))
        .max()
        .expect("nonempty");
    OracleAnswer::Optimal(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpOracleSummary {
    pub instances: usize,
    pub agreements: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub unbounded: usize,
    /// Outcomes whose witness or certificate re-verified exactly.
    pub verified: usize,
    pub passed: bool,
}

fn random_problem(rng: &mut ChaCha8Rng) -> LpProblem<Rational> {
    let m = rng.random_range(1..=3);
    let n = rng.random_range(1..=5);
    let mut entry = |lo: i64, hi: i64| Rational::from_int(rng.random_range(lo..=hi));
    let a = Matrix::from_rows(
        (0..m)
            .map(|_| (0..n).map(|_| entry(-3, 3)).collect())
            .collect(),
    )
    .expect("rectangular");
    let b = Vector::new((0..m).map(|_| entry(-3, 3)).collect());
    if rng.random_bool(0.5) {
        let c = Vector::new((0..n).map(|_| Rational::from_int(rng.random_range(-3..=3))).collect());
        LpProblem::maximize(a, b, c)
    } else {
        LpProblem::feasibility(a, b)
    }
}

/// Compares the simplex against [`oracle`] on random small instances.
pub fn lp_oracle_suite(seed: u64, instances: usize) -> Result<LpOracleSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = LpOracleSummary {
        instances,
        agreements: 0,
        feasible: 0,
        infeasible: 0,
        unbounded: 0,
        verified: 0,
        passed: false,
    };
    for _ in 0..instances {
        let p = random_problem(&mut rng);
        let out = if p.objective.is_some() {
            solve_lp_max(&p)?
        } else {
            solve_feasibility(&p)?
        };
        if out.verify(&p) {
            s.verified += 1;
        }
        let agree = match (oracle(&p), &out.status) {
            (OracleAnswer::Infeasible, LpStatus::Infeasible) => {
                s.infeasible += 1;
                true
            }
            (OracleAnswer::Feasible, LpStatus::Feasible) => {
                s.feasible += 1;
                true
            }
            (OracleAnswer::Optimal(v), LpStatus::Feasible) => {
                s.feasible += 1;
                out.value.as_ref() == Some(&v)
            }
            (OracleAnswer::Unbounded, LpStatus::Unbounded) => {
                s.unbounded += 1;
                true
            }
            _ => false,
        };
        if agree {
            s.agreements += 1;
        }
    }
    s.passed = s.agreements == instances && s.verified == instances;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupTable {
    /// `table[i][j] = k` with `g_i g_j = g_k`.
    pub table: Vec<Vec<usize>>,
    pub closed: bool,
    pub has_identity: bool,
    pub has_inverses: bool,
}

/// Multiplication table of the eight D₈ matrices in catalog order.
pub fn d8_table<T: Scalar>(cat: &Catalog<T>) -> GroupTable {
    let ms: Vec<&Matrix<T>> = cat.d8.iter().map(|o| &o.matrix).collect();
    let find = |m: &Matrix<T>| ms.iter().position(|x| *x == m);
    let mut closed = true;
    let table: Vec<Vec<usize>> = ms
        .iter()
        .map(|a| {
            ms.iter()
                .map(|b| {
                    let p = a.mul(b).expect("3x3");
                    find(&p).unwrap_or_else(|| {
                        closed = false;
                        usize::MAX
                    })
                })
                .collect()
        })
        .collect();
    group_summary(table, closed)
}

fn group_summary(table: Vec<Vec<usize>>, closed: bool) -> GroupTable {
    let n = table.len();
    let id = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g));
    let has_inverses = id.is_some_and(|e| (0..n).all(|g| (0..n).any(|h| table[g][h] == e)));
    GroupTable {
        table,
        closed,
        has_identity: id.is_some(),
        has_inverses,
    }
}

pub fn klein_group_table() -> Result<GroupTable> {
    let t = klein_table()?;
    Ok(group_summary(t.iter().map(|r| r.to_vec()).collect(), true))
}

/// `e0 + e2 = e1 + e3 = u`.
pub fn elementary_completeness<T: Scalar>(cat: &Catalog<T>) -> bool {
    let s02 = cat.e[0].add(&cat.e[2]).ok();
    let s13 = cat.e[1].add(&cat.e[3]).ok();
    s02.as_ref() == Some(&cat.u) && s13.as_ref() == Some(&cat.u)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub agreements: usize,
    pub passed: bool,
}

/// Random correlated strategies on `model`: replacing every Alice op `A_x`
/// by `A_x V` and the shared state by its `V`-preimage leaves the encoded
/// family unchanged.
pub fn gauge_samples(model: &GptModel<Rational>, seed: u64, samples: usize) -> Result<SampleSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = model.local_ops.len();
    let find_op = |m: &Matrix<Rational>| model.local_ops.iter().position(|o| o.matrix == *m);
    let mut agreements = 0;
    for _ in 0..samples {
        let shared_pos = rng.random_range(0..model.states.len());
        let alice: Vec<usize> = (0..4).map(|_| rng.random_range(0..ops)).collect();
        let bob: Vec<usize> = (0..4).map(|_| rng.random_range(0..ops)).collect();
        let v = &model.local_ops[rng.random_range(0..ops)].matrix;
        let strategy =
            EncodingStrategy::correlated(model.catalog_index_at(shared_pos), alice.clone(), bob.clone());
        let target = model.states[shared_pos].matrix().expect("bipartite");
        let preimage = model
            .states
            .iter()
            .position(|s| s.matrix().and_then(|w| v.mul(w).ok()).as_ref() == Some(target));
        let moved: Option<Vec<usize>> = alice
            .iter()
            .map(|&a| model.local_ops[a].matrix.mul(v).ok().and_then(|m| find_op(&m)))
            .collect();
        if let (Some(pre), Some(moved)) = (preimage, moved) {
            let other = EncodingStrategy::correlated(model.catalog_index_at(pre), moved, bob);
            if encode(model, &strategy)?.positions == encode(model, &other)?.positions {
                agreements += 1;
            }
        }
    }
    Ok(SampleSummary {
        samples,
        agreements,
        passed: agreements == samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexitySummary {
    pub samples: usize,
    /// Mixture value equal to the weighted average of pure values.
    pub agreements: usize,
    #[serde(serialize_with = "crate::engine::ser_frac")]
    pub max_value: Rational,
    pub passed: bool,
}

pub fn classical_convexity_samples(seed: u64, samples: usize) -> Result<ConvexitySummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = Rational::from_ratio(13, 16);
    let mut agreements = 0;
    let mut max_value = Rational::from_int(0);
    for _ in 0..samples {
        let parts = rng.random_range(1..=5);
        let weights: Vec<i64> = (0..parts).map(|_| rng.random_range(1..=20)).collect();
        let total: i64 = weights.iter().sum();
        let mix: Vec<(Rational, PureClassicalStrategy)> = weights
            .iter()
            .map(|&w| {
                let s = PureClassicalStrategy::from_index(rng.random_range(0..4096)).expect("range");
                (Rational::from_ratio(w, total), s)
            })
            .collect();
        let v = evaluate_mixture(&mix)?;
        let avg: Rational = mix.iter().map(|(w, s)| w * evaluate(s)).sum();
        if v == avg && v <= bound {
            agreements += 1;
        }
        if v > max_value {
            max_value = v;
        }
    }
    Ok(ConvexitySummary {
        samples,
        agreements,
        passed: agreements == samples && max_value <= bound,
        max_value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeesawSummary {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub best_value: f64,
    pub monotone: bool,
    pub decoders_valid: bool,
    /// `best_value < 1 − 10⁻³`.
    pub below_one: bool,
    pub passed: bool,
}

impl SeesawSummary {
    pub fn from_report(r: &SeesawReport) -> Self {
        let below_one = r.best_value < 1.0 - 1e-3;
        Self {
            seed: r.seed,
            restarts: r.restarts,
            iterations: r.iterations,
            best_value: r.best_value,
            monotone: r.monotone(),
            decoders_valid: r.decoders_valid(),
            below_one,
            passed: r.restarts >= 50 && r.monotone() && r.decoders_valid() && below_one,
        }
    }
}

pub fn seesaw_summary(seed: u64, restarts: usize, iterations: usize) -> Result<SeesawSummary> {
    Ok(SeesawSummary::from_report(&product_strategy_report(seed, restarts, iterations)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfCheckReport {
    pub lp_oracle: LpOracleSummary,
    pub d8: GroupTable,
    pub klein: GroupTable,
    pub elementary_completeness: bool,
    pub gauge: SampleSummary,
    pub classical_convexity: ConvexitySummary,
    pub seesaw: SeesawSummary,
    pub passed: bool,
}

pub fn run_all(seed: u64) -> Result<SelfCheckReport> {
    let cat: Catalog<Rational> = build_catalog();
    let pr = build_model_from(&cat, ModelName::Pr)?;
    let lp_oracle = lp_oracle_suite(seed, 1000)?;
    let d8 = d8_table(&cat);
    let klein = klein_group_table()?;
    let elementary_completeness = elementary_completeness(&cat);
    let gauge = gauge_samples(&pr, seed, 200)?;
    let classical_convexity = classical_convexity_samples(seed, 1000)?;
    let seesaw = seesaw_summary(seed, 64, 200)?;
    let group_ok = |g: &GroupTable| g.closed && g.has_identity && g.has_inverses;
    let passed = lp_oracle.passed
        && group_ok(&d8)
        && group_ok(&klein)
        && elementary_completeness
        && gauge.passed
        && classical_convexity.passed
        && seesaw.passed;
    Ok(SelfCheckReport {
        lp_oracle,
        d8,
        klein,
        elementary_completeness,
        gauge,
        classical_convexity,
        seesaw,
        passed,
    })
}
