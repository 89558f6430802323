//! Small dense vectors and matrices over a generic [`Scalar`], plus the exact
//! simplex kernel in [`lp`].
//!
//! Matrices are stored row-major. When a matrix is flattened into an LP column
//! ([`Matrix::vectorize`]) the same row-major order is used, so Farkas
//! certificates are reproducible entry for entry.

pub mod lp;

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{AlcError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector<T> {
    entries: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: vec![T::zero(); n],
        }
    }

    /// Entries `n_i / denom`.
    pub fn from_ratios(numers: &[i64], denom: i64) -> Self {
        Self::new(numers.iter().map(|&n| T::from_ratio(n, denom)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn dot(&self, other: &Self) -> Result<T> {
        check_len(self.len(), other.len())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// Column vector times row vector: `self ⊗ otherᵀ`.
    pub fn outer(&self, other: &Self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.len(), other.len());
        for (i, a) in self.iter().enumerate() {
            for (j, b) in other.iter().enumerate() {
                m[(i, j)] = a.clone() * b.clone();
            }
        }
        m
    }

    pub fn keys(&self) -> Vec<T::Key> {
        self.iter().map(Scalar::key).collect()
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.entries[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.entries[i]
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(AlcError::DimensionMismatch {
                    expected: format!("{c} columns"),
                    got: format!("{} columns", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Integer entries divided by a common denominator, row-major.
    pub fn from_ratios(rows: usize, cols: usize, numers: &[i64], denom: i64) -> Self {
        assert_eq!(numers.len(), rows * cols);
        Self {
            rows,
            cols,
            data: numers.iter().map(|&n| T::from_ratio(n, denom)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(AlcError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Result<Vector<T>> {
        check_len(self.cols, v.len())?;
        Ok(Vector::new(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * k.clone()).collect(),
        }
    }

    /// Frobenius inner product `Tr[selfᵀ · other]`.
    pub fn frobenius(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vector<T> {
        Vector::new(self.data.clone())
    }

    pub fn keys(&self) -> Vec<T::Key> {
        self.data.iter().map(Scalar::key).collect()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(AlcError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// `Tr[effectᵀ · state]` for two 3×3 matrices.
pub fn trace_product<T: Scalar>(effect: &Matrix<T>, state: &Matrix<T>) -> Result<T> {
    for m in [effect, state] {
        if m.shape() != (3, 3) {
            return Err(AlcError::DimensionMismatch {
                expected: "3x3".into(),
                got: format!("{}x{}", m.rows(), m.cols()),
            });
        }
    }
    effect.frobenius(state)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(AlcError::DimensionMismatch {
            expected: format!("length {expected}"),
            got: format!("length {got}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn trace_product_rejects_non_square() {
        let a = Matrix::<Rational>::zeros(3, 3);
        let b = Matrix::<Rational>::zeros(2, 3);
        assert!(matches!(
            trace_product(&a, &b),
            Err(AlcError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_product_matches_explicit_trace() {
        let a = Matrix::<Rational>::from_ratios(3, 3, &[1, 2, 0, -1, 0, 3, 0, 0, 1], 2);
        let b = Matrix::<Rational>::from_ratios(3, 3, &[2, 0, 1, 1, 1, 1, 0, -2, 4], 1);
        let prod = a.transpose().mul(&b).unwrap();
        let tr = (0..3).fold(q(0, 1), |acc, i| acc + prod[(i, i)].clone());
        assert_eq!(trace_product(&a, &b).unwrap(), tr);
    }

    #[test]
    fn outer_and_vectorize_are_row_major() {
        let u = Vector::<Rational>::from_ratios(&[0, 0, 1], 1);
        let m = u.outer(&u);
        assert_eq!(
            m.vectorize().into_vec(),
            (0..9).map(|i| q((i == 8) as i64, 1)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn generic_over_f64() {
        let a = Matrix::<f64>::identity(3);
        assert_eq!(trace_product(&a, &a).unwrap(), 3.0);
    }
}
