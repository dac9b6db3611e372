//! Dense vectors and matrices over the quaternions.
//!
//! Conventions matter here because entry products do not commute:
//!
//! * vectors form a right module, so `v·q` scales amplitudes from the right
//!   and `⟨u|v q⟩ = ⟨u|v⟩ q`;
//! * operators and phases act by left multiplication of amplitudes, and both
//!   `matvec` and `matmul` compute `Σ_c A[r][c] · B[c]` with the matrix entry
//!   on the left of every product.
//!
//! With these conventions applying `diag(1, i)` and then `diag(1, j)` to the
//! `|1⟩` amplitude gives `j·i = -k`, while the opposite order gives `i·j = k`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct QVector<T> {
    amps: Vec<Quaternion<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix<T> {
    rows: usize,
    cols: usize,
    /// Row-major.
    entries: Vec<Quaternion<T>>,
}

impl<T: Real> QVector<T> {
    pub fn new(amps: Vec<Quaternion<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self { amps })
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amps = vec![Quaternion::zero(); dim];
        amps[index] = Quaternion::one();
        Self { amps }
    }

    pub fn from_reals(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Quaternion::real(v)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amps(&self) -> &[Quaternion<T>] {
        &self.amps
    }

    #[inline]
    pub fn into_amps(self) -> Vec<Quaternion<T>> {
        self.amps
    }

    /// `Σ |amp|²`.
    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm_sqr() - T::one()).abs() <= tol
    }

    /// `⟨self|other⟩ = Σ conj(selfᵢ) · otherᵢ`.
    pub fn inner(&self, other: &Self) -> Result<Quaternion<T>> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Quaternion::zero(), |acc, (u, v)| acc + u.conj() * *v))
    }

    /// Each amplitude becomes `q · ampᵢ`.
    pub fn scale_left(&self, q: Quaternion<T>) -> Self {
        Self {
            amps: self.amps.iter().map(|a| q * *a).collect(),
        }
    }

    /// Each amplitude becomes `ampᵢ · q`.
    pub fn scale_right(&self, q: Quaternion<T>) -> Self {
        Self {
            amps: self.amps.iter().map(|a| *a * q).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    /// Largest component-wise difference; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim() != other.dim() {
            return T::infinity();
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(*b)))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl<T: Real> QMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Quaternion<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        check_dim(rows * cols, entries.len())?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Quaternion::zero(); n * n];
        for d in 0..n {
            entries[d * n + d] = Quaternion::one();
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn diag(values: &[Quaternion<T>]) -> Self {
        let n = values.len();
        let mut m = Self::identity(n);
        for (d, v) in values.iter().enumerate() {
            m.entries[d * n + d] = *v;
        }
        m
    }

    /// Row-major real matrix.
    pub fn from_reals(rows: usize, cols: usize, values: &[T]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&v| Quaternion::real(v)).collect(),
        )
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Quaternion<T> {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn entries(&self) -> &[Quaternion<T>] {
        &self.entries
    }

    /// Transpose followed by entry-wise conjugation.
    pub fn dagger(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `(self · other)[r][c] = Σ_m self[r][m] · other[m][c]`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Quaternion::zero();
                for m in 0..self.cols {
                    acc += self.get(r, m) * other.get(m, c);
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// `outᵣ = Σ_c self[r][c] · v[c]`, matrix entry on the left.
    pub fn matvec(&self, v: &QVector<T>) -> Result<QVector<T>> {
        check_dim(self.cols, v.dim())?;
        let amps = (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(Quaternion::zero(), |acc, c| {
                    acc + self.get(r, c) * v.amps[c]
                })
            })
            .collect();
        Ok(QVector { amps })
    }

    /// Largest component deviation of `U U†` from the identity.
    pub fn unitarity_deviation(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let product = self.matmul(&self.dagger())?;
        Ok(product.max_abs_diff(&Self::identity(self.rows)))
    }

    pub fn is_unitary(&self, tol: T) -> Result<bool> {
        Ok(self.unitarity_deviation()? <= tol)
    }

    /// Every entry lies in the complex subalgebra `span{1, i}`.
    pub fn is_complex(&self, tol: T) -> bool {
        self.entries.iter().all(|e| e.is_complex(tol))
    }

    pub fn is_real(&self, tol: T) -> bool {
        self.entries.iter().all(|e| e.is_real(tol))
    }

    pub fn scale_left(&self, q: Quaternion<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| q * *e).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(*b)))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

#[inline]
fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
