//! Dense complex matrices for dimensions 1 through 4.
//!
//! Everything in this crate lives in a two-level (or two-qubit) Hilbert space,
//! so matrices are stored inline in a fixed 16-entry buffer and passed by value.

mod eigen;

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigen, matrix_exp, matrix_function, matrix_log, HermitianEigensystem, LogZero};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// Relative Hermiticity tolerance used by every check in the crate.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `dim × dim` complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if dim == 0 || dim > MAX_DIM {
            Err(Error::UnsupportedDim(dim))
        } else {
            Ok(())
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_fn<F>(dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from row slices. All rows must have `rows.len()` entries.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimMismatch(dim, bad.len()));
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Builds a real matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimMismatch(dim, bad.len()));
        }
        Self::from_fn(dim, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimMismatch(v.len(), w.len()));
        }
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Result<Self> {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut m = *self;
        m.entries_mut().for_each(|z| *z *= c);
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Hermitian within `HERMITIAN_TOL · ‖M‖_F`.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL * self.frobenius_norm()
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect <= HERMITIAN_TOL * self.frobenius_norm() {
            Ok(())
        } else {
            Err(Error::NotHermitian(defect))
        }
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()) * 0.5
    }

    /// Row `i` as a vector.
    pub fn row(&self, i: usize) -> Vec<Complex64> {
        (0..self.dim).map(|j| self[(i, j)]).collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// `M v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch(self.dim, v.len()));
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// `⟨v|M|w⟩`.
    pub fn sandwich(&self, v: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        let mw = self.apply(w)?;
        if v.len() != self.dim {
            return Err(Error::DimMismatch(self.dim, v.len()));
        }
        Ok(v.iter().zip(&mw).map(|(a, b)| a.conj() * b).sum())
    }

    /// Checked product, returning `DimMismatch` instead of panicking.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        Ok(*self * *rhs)
    }

    fn entries(&self) -> impl Iterator<Item = &Complex64> {
        self.data[..self.dim * self.dim].iter()
    }

    fn entries_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        let n = self.dim * self.dim;
        self.data[..n].iter_mut()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of range for dim {}",
            self.dim
        );
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of range for dim {}",
            self.dim
        );
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for ComplexMatrix {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        let n = self.dim * self.dim;
        for (a, b) in self.data[..n].iter_mut().zip(&rhs.data[..n]) {
            *a += b;
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;

    fn neg(mut self) -> Self {
        self.entries_mut().for_each(|z| *z = -*z);
        self
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = self;
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (0..n).map(|k| self.data[i * n + k] * rhs.data[k * n + j]).sum();
            }
        }
        out
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = Self;

    fn mul(mut self, rhs: f64) -> Self {
        self.entries_mut().for_each(|z| *z *= rhs);
        self
    }
}

impl Mul<Complex64> for ComplexMatrix {
    type Output = Self;

    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        Err(Error::DimMismatch(a.dim, b.dim))
    } else {
        Ok(())
    }
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.trace()
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

/// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(eig.values().iter().map(|a| a.abs()).sum())
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    Ok(*a * *b + *b * *a)
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    Ok(*a * *b - *b * *a)
}

/// One factor of a two-qubit space ordered `|q₁q₂⟩ ∈ {|00⟩, |01⟩, |10⟩, |11⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn index(self) -> usize {
        match self {
            Subsystem::First => 0,
            Subsystem::Second => 1,
        }
    }
}

impl TryFrom<usize> for Subsystem {
    type Error = Error;

    fn try_from(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Subsystem::First),
            1 => Ok(Subsystem::Second),
            other => Err(Error::DimMismatch(2, other)),
        }
    }
}

/// Transposes the indices of one qubit of a 4×4 operator.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::UnsupportedDim(m.dim()));
    }
    ComplexMatrix::from_fn(4, |row, col| {
        let (i1, i2) = (row >> 1, row & 1);
        let (j1, j2) = (col >> 1, col & 1);
        let (src_row, src_col) = match subsystem {
            Subsystem::First => ((j1 << 1) | i2, (i1 << 1) | j2),
            Subsystem::Second => ((i1 << 1) | j2, (j1 << 1) | i2),
        };
        m[(src_row, src_col)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_large_dims() {
        assert_eq!(ComplexMatrix::zeros(5).unwrap_err(), Error::UnsupportedDim(5));
        assert_eq!(ComplexMatrix::zeros(0).unwrap_err(), Error::UnsupportedDim(0));
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(trace(&ComplexMatrix::identity(2).unwrap()), c(2.0, 0.0));
    }

    #[test]
    fn anticommutator_of_diagonals() {
        let a = ComplexMatrix::from_diag(&[0.3, -1.5]).unwrap();
        let b = ComplexMatrix::from_diag(&[2.0, 0.25]).unwrap();
        let ab = anticommutator(&a, &b).unwrap();
        assert_eq!(
            ab,
            ComplexMatrix::from_diag(&[2.0 * 0.3 * 2.0, 2.0 * -1.5 * 0.25]).unwrap()
        );
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let m = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.2, -0.7)], &[c(3.0, 1.0), c(-2.0, 0.5)]]).unwrap();
        assert_eq!(commutator(&m, &m).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn mismatched_dims_error() {
        let a = ComplexMatrix::identity(2).unwrap();
        let b = ComplexMatrix::identity(3).unwrap();
        assert_eq!(anticommutator(&a, &b).unwrap_err(), Error::DimMismatch(2, 3));
        assert_eq!(commutator(&a, &b).unwrap_err(), Error::DimMismatch(2, 3));
    }

    #[test]
    fn trace_norm_of_indefinite_matrix() {
        let m = ComplexMatrix::from_diag(&[0.5, -0.25, 1.0]).unwrap();
        assert!((trace_norm(&m).unwrap() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn partial_transpose_product_state_fixed() {
        let mut m = ComplexMatrix::zeros(4).unwrap();
        m[(2, 2)] = c(1.0, 0.0);
        assert_eq!(partial_transpose(&m, Subsystem::First).unwrap(), m);
        assert_eq!(partial_transpose(&m, Subsystem::Second).unwrap(), m);
    }

    #[test]
    fn partial_transpose_moves_coherence() {
        // entry at (|01⟩, |10⟩) lands on (|00⟩, |11⟩) when the second qubit is transposed
        let mut m = ComplexMatrix::zeros(4).unwrap();
        m[(1, 2)] = c(0.3, 0.1);
        let pt = partial_transpose(&m, Subsystem::Second).unwrap();
        assert_eq!(pt[(0, 3)], c(0.3, 0.1));
        assert_eq!(pt.max_abs(), c(0.3, 0.1).norm());
        let pt1 = partial_transpose(&m, Subsystem::First).unwrap();
        assert_eq!(pt1[(3, 0)], c(0.3, 0.1));
    }

    #[test]
    fn partial_transpose_of_bell_like_state() {
        let coh = c(0.2, 0.3);
        let mut m = ComplexMatrix::zeros(4).unwrap();
        m[(1, 1)] = c(0.5, 0.0);
        m[(2, 2)] = c(0.5, 0.0);
        m[(1, 2)] = coh;
        m[(2, 1)] = coh.conj();
        let pt = partial_transpose(&m, Subsystem::First).unwrap();
        let vals = hermitian_eigen(&pt).unwrap().values().to_vec();
        assert!((vals[0] + coh.norm()).abs() < 1e-14);
        assert!((vals[3] - 0.5).abs() < 1e-14);
        assert!(vals.iter().any(|v| (v - coh.norm()).abs() < 1e-14));
    }

    #[test]
    fn partial_transpose_requires_dim_four() {
        let m = ComplexMatrix::identity(2).unwrap();
        assert_eq!(
            partial_transpose(&m, Subsystem::First).unwrap_err(),
            Error::UnsupportedDim(2)
        );
    }
}
