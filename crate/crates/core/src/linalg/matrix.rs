use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{KFrameError, Result};

pub type C64 = Complex64;
pub type ComplexVector = DVector<C64>;

/// Dense complex matrix with finite entries.
///
/// Every operator in the toolkit (K, its adjoint and pseudo-inverse,
/// synthesis and frame operators, projections, multipliers) is carried by
/// this type.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

fn all_finite<'a>(mut entries: impl Iterator<Item = &'a C64>) -> bool {
    entries.all(|z| z.re.is_finite() && z.im.is_finite())
}

impl ComplexMatrix {
    /// Build from `rows * cols` entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(KFrameError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if !all_finite(entries.iter()) {
            return Err(KFrameError::NonFiniteInput);
        }
        Ok(ComplexMatrix(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Build from real rows; convenient for hand-written instances.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(KFrameError::ShapeMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::from_row_major(rows.len(), cols, entries)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if !all_finite(m.iter()) {
            return Err(KFrameError::NonFiniteInput);
        }
        Ok(ComplexMatrix(m))
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[ComplexVector]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(KFrameError::ShapeMismatch(format!(
                "column of length {} in a matrix with {rows} rows",
                bad.len()
            )));
        }
        if !columns.iter().all(|c| all_finite(c.iter())) {
            return Err(KFrameError::NonFiniteInput);
        }
        let mut m = DMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            m.set_column(j, c);
        }
        Ok(ComplexMatrix(m))
    }

    /// Wrap a matrix produced internally from finite operands.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        ComplexMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// `u v*` for column vectors `u`, `v`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        ComplexMatrix(u * v.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0 || self.cols() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        all_finite(self.0.iter())
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        self.0.column(j).into_owned()
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        ComplexMatrix(self.0.columns(0, k).into_owned())
    }

    pub fn scale(&self, factor: C64) -> Self {
        ComplexMatrix(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `self * diag(d)`: scales column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[C64]) -> Self {
        let mut m = self.0.clone();
        for (j, &s) in d.iter().enumerate() {
            m.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        ComplexMatrix(m)
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        &self.0 * v
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn norm(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.0
            .clone()
            .singular_values()
            .iter()
            .fold(0.0f64, |acc, &s| acc.max(s))
    }

    /// Spectral norm of `self - other`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn hstack(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows() != other.rows() {
            return Err(KFrameError::ShapeMismatch(format!(
                "cannot stack {}x{} beside {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let mut m = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        m.columns_mut(0, self.cols()).copy_from(&self.0);
        m.columns_mut(self.cols(), other.cols()).copy_from(&other.0);
        Ok(ComplexMatrix(m))
    }

    pub(crate) fn require_same_shape(&self, other: &ComplexMatrix, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(KFrameError::ShapeMismatch(format!(
                "{what}: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(KFrameError::ShapeMismatch(format!(
                "{what} must be square, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "\n  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Complex number from its real part.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Column vector from real entries.
pub fn real_vector(xs: &[f64]) -> ComplexVector {
    DVector::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
}

/// `k`-th standard basis vector of length `n`.
pub fn basis_vector(n: usize, k: usize) -> ComplexVector {
    let mut v = DVector::zeros(n);
    v[k] = re(1.0);
    v
}
