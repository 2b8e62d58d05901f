//! Small dense linear algebra: a row-major matrix generic over the scalar, and
//! the decompositions the laboratory needs. Decompositions run through
//! `nalgebra` in double precision and convert back.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[T]>::to_vec)
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn symmetric_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            T::half() * (self.get(i, j) + self.get(j, i))
        })
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).as_f64())
    }

    fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| T::lit(m[(i, j)]))
    }

    /// Solves `A x = b` by LU; fails when `A` is singular.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let rhs = DVector::from_iterator(b.len(), b.iter().map(|v| v.as_f64()));
        let x = self.to_nalgebra().lu().solve(&rhs).ok_or(Error::Singular)?;
        Ok(x.iter().map(|&v| T::lit(v)).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.to_nalgebra().try_inverse().ok_or(Error::Singular)?;
        Ok(Self::from_nalgebra(&inv))
    }

    /// Minimum-norm least-squares solution of `A x ~ b`.
    pub fn least_squares(&self, b: &[T]) -> Vec<T> {
        let rhs = DVector::from_iterator(b.len(), b.iter().map(|v| v.as_f64()));
        let a = self.to_nalgebra();
        let scale = a.amax().max(1.0);
        let x = a
            .svd(true, true)
            .solve(&rhs, 1e-12 * scale)
            .expect("svd computed with both factors");
        x.iter().map(|&v| T::lit(v)).collect()
    }

    /// Eigenvalues (ascending) and unit eigenvectors of the symmetric part.
    pub fn symmetric_eigen(&self) -> (Vec<T>, Vec<Vec<T>>) {
        let eig = SymmetricEigen::new(self.symmetric_part().to_nalgebra());
        let mut pairs: Vec<(f64, Vec<f64>)> = (0..eig.eigenvalues.len())
            .map(|k| {
                (
                    eig.eigenvalues[k],
                    eig.eigenvectors.column(k).iter().copied().collect(),
                )
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let values = pairs.iter().map(|p| T::lit(p.0)).collect();
        let vectors = pairs
            .into_iter()
            .map(|p| p.1.into_iter().map(T::lit).collect())
            .collect();
        (values, vectors)
    }

    pub fn min_symmetric_eigenvalue(&self) -> T {
        self.symmetric_eigen()
            .0
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }
}

impl<T: Scalar> Serialize for DenseMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Scalar::as_f64).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for DenseMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<T>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(T::lit).collect())
            .collect();
        DenseMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadStatus {
    /// The reported value is the supremum over the whole parameter space.
    Exact,
    /// The supremum is infinite; the value is attained at the budget radius.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadSup<T> {
    pub value: T,
    pub arg: Vec<T>,
    pub status: QuadStatus,
}

/// `g^T u - u^T Q u` evaluated directly.
pub fn quad_objective<T: Scalar>(q: &DenseMatrix<T>, g: &[T], u: &[T]) -> T {
    dot(g, u) - dot(u, &q.mul_vec(u))
}

/// Supremum of `g^T u - u^T Q u` over `u in R^p` (only the symmetric part of
/// `Q` matters). When the supremum is infinite, the returned point lies at
/// distance about `radius` along a direction of unbounded ascent, so the value
/// is a certified lower bound that grows with the radius.
pub fn concave_quadratic_sup<T: Scalar>(q: &DenseMatrix<T>, g: &[T], radius: T) -> QuadSup<T> {
    let p = g.len();
    if p == 0 {
        return QuadSup {
            value: T::zero(),
            arg: Vec::new(),
            status: QuadStatus::Exact,
        };
    }
    let (values, vectors) = q.symmetric_eigen();
    let lam_scale = values.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let eig_tol = T::lit(1e-10) * lam_scale;
    let g_norm = dot(g, g).sqrt();
    let g_tol = T::lit(1e-9) * (T::one() + g_norm);

    if values[0] < -eig_tol {
        let v = &vectors[0];
        let gv = dot(g, v);
        let sign = if gv < T::zero() { -T::one() } else { T::one() };
        let arg: Vec<T> = v.iter().map(|&c| c * sign * radius).collect();
        return QuadSup {
            value: quad_objective(q, g, &arg),
            arg,
            status: QuadStatus::Unbounded,
        };
    }

    let mut arg = vec![T::zero(); p];
    let mut escape: Option<(T, usize)> = None;
    for (k, (&lam, v)) in values.iter().zip(&vectors).enumerate() {
        let gk = dot(g, v);
        if lam > eig_tol {
            let coef = gk / (T::lit(2.0) * lam);
            for (a, &c) in arg.iter_mut().zip(v) {
                *a = *a + coef * c;
            }
        } else if gk.abs() > g_tol && escape.is_none_or(|(best, _)| gk.abs() > best.abs()) {
            escape = Some((gk, k));
        }
    }
    match escape {
        None => QuadSup {
            value: quad_objective(q, g, &arg),
            arg,
            status: QuadStatus::Exact,
        },
        Some((gk, k)) => {
            let sign = if gk < T::zero() { -T::one() } else { T::one() };
            for (a, &c) in arg.iter_mut().zip(&vectors[k]) {
                *a = *a + sign * radius * c;
            }
            QuadSup {
                value: quad_objective(q, g, &arg),
                arg,
                status: QuadStatus::Unbounded,
            }
        }
    }
}
