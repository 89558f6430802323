//! Exact reproduction of the authentication-with-limited-communication (ALC)
//! game across classical, quantum, square-bit and toy-bit theories.
//!
//! The linear algebra, GPT and square-bit layers are generic over
//! [`Scalar`]; the aliases below fix the exact rational instantiation used by
//! the strategy search.

pub mod classical;
pub mod engine;
pub mod error;
pub mod gpt;
pub mod linalg;
pub mod quantum;
pub mod reference;
pub mod scalar;
pub mod selfcheck;
pub mod spekkens;
pub mod squarebit;

pub use error::{AlcError, Result};
pub use scalar::{ExactScalar, Scalar};

/// Arbitrary-precision fraction, always in lowest terms.
pub type Rational = num_rational::BigRational;
pub type RVector = linalg::Vector<Rational>;
pub type RMatrix = linalg::Matrix<Rational>;
pub type FVector = linalg::Vector<f64>;
pub type FMatrix = linalg::Matrix<f64>;
pub type LpProblem = linalg::lp::LpProblem<Rational>;
pub type LpOutcome = linalg::lp::LpOutcome<Rational>;
pub type GptState = gpt::GptState<Rational>;
pub type GptEffect = gpt::GptEffect<Rational>;
pub type GptModel = gpt::GptModel<Rational>;
pub type Transformation = gpt::Transformation<Rational>;
pub type Measurement = gpt::Measurement<Rational>;
pub type SquareBitCatalog = squarebit::Catalog<Rational>;
pub type EncodedFamily = engine::EncodedFamily<Rational>;
pub type DecoderWitness = engine::DecoderWitness<Rational>;
pub type SearchReport = engine::SearchReport<Rational>;
pub use engine::{EncodingKind, EncodingStrategy, Families, SearchOptions};
pub use squarebit::ModelName;
