use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Eigenvalues closer than this are treated as one degenerate cluster.
const CLUSTER_GAP: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this (relative).
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;
/// Eigenvalues of magnitude below this count as exact zeros for `matrix_log`.
const LOG_ZERO_TOL: f64 = 1e-14;

/// Eigen-decomposition `M = Σ αₖ vₖ vₖ†` of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `vectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigensystem {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl HermitianEigensystem {
    /// Assembles an eigensystem from explicit pairs, sorting by eigenvalue.
    pub fn from_pairs(mut pairs: Vec<(f64, Vec<Complex64>)>) -> Result<Self> {
        let dim = pairs.len();
        if let Some((_, v)) = pairs.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::DimMismatch(dim, v.len()));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let vectors = ComplexMatrix::from_fn(dim, |i, k| pairs[k].1[i])?;
        Ok(Self {
            values: pairs.into_iter().map(|(a, _)| a).collect(),
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as the columns of a unitary matrix.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `Σ f(αₖ) vₖ vₖ†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim())?;
        for (k, &alpha) in self.values.iter().enumerate() {
            let fa = f(alpha);
            if !fa.is_finite() {
                return Err(Error::DomainError(alpha));
            }
            out += ComplexMatrix::projector(&self.vector(k))? * fa;
        }
        Ok(out)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|a| a).expect("identity map is finite on a finite spectrum")
    }

    /// `V† M V`: an operator expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.vectors.adjoint().matmul(m)? * self.vectors)
    }

    /// `V M V†`: inverse of [`to_eigenbasis`](Self::to_eigenbasis).
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.vectors.matmul(m)? * self.vectors.adjoint())
    }
}

/// Eigen-decomposition of a Hermitian matrix of dimension at most 4.
///
/// Dimension 2 uses the closed-form trace/determinant solution, larger
/// dimensions use cyclic complex Jacobi rotations.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigensystem> {
    m.ensure_hermitian()?;
    let h = m.hermitian_part();
    let (values, vectors) = match h.dim() {
        1 => (vec![h[(0, 0)].re], ComplexMatrix::identity(1)?),
        2 => eigen_2x2(&h)?,
        _ => jacobi(&h)?,
    };
    let mut pairs: Vec<(f64, Vec<Complex64>)> = values
        .into_iter()
        .enumerate()
        .map(|(k, a)| (a, vectors.column(k)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    orthonormalize_clusters(&mut pairs);
    HermitianEigensystem::from_pairs(pairs)
}

fn eigen_2x2(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    let lo = mean - radius;
    let hi = mean + radius;
    if b.norm() == 0.0 {
        let vectors = ComplexMatrix::identity(2)?;
        return Ok((vec![a, d], vectors));
    }
    // (b, λ − a) and (λ − d, b̄) both span the λ-eigenspace; take the larger.
    let c1 = [b, Complex64::new(lo - a, 0.0)];
    let c2 = [Complex64::new(lo - d, 0.0), b.conj()];
    let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    let n2 = (c2[0].norm_sqr() + c2[1].norm_sqr()).sqrt();
    let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    let v_lo = [v[0] / n, v[1] / n];
    let v_hi = [-v_lo[1].conj(), v_lo[0].conj()];
    let vectors = ComplexMatrix::from_rows(&[&[v_lo[0], v_hi[0]], &[v_lo[1], v_hi[1]]])?;
    Ok((vec![lo, hi], vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim();
    let mut a = *h;
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = JACOBI_TOL * h.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // A phase on q makes the (p, q) entry real; a real rotation finishes.
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let w_pp = Complex64::new(c, 0.0);
                let w_pq = Complex64::new(s, 0.0);
                let w_qp = -phase.conj() * s;
                let w_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * w_pp + akq * w_qp;
                    a[(k, q)] = akp * w_pq + akq * w_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
                    a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * w_pp + vkq * w_qp;
                    v[(k, q)] = vkp * w_pq + vkq * w_qq;
                }
            }
        }
    }

    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Modified Gram–Schmidt inside each cluster of (near-)equal eigenvalues.
fn orthonormalize_clusters(pairs: &mut [(f64, Vec<Complex64>)]) {
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 < CLUSTER_GAP {
            end += 1;
        }
        for k in start..end {
            for j in start..k {
                let (head, tail) = pairs.split_at_mut(k);
                let vj = &head[j].1;
                let vk = &mut tail[0].1;
                let overlap: Complex64 = vj.iter().zip(vk.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in vk.iter_mut().zip(vj) {
                    *x -= overlap * y;
                }
            }
            let norm = pairs[k].1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            pairs[k].1.iter_mut().for_each(|z| *z /= norm);
        }
        start = end;
    }
}

/// `f(M) = Σ f(αₖ) vₖ vₖ†` for Hermitian `M`.
pub fn matrix_function<F: Fn(f64) -> f64>(m: &ComplexMatrix, f: F) -> Result<ComplexMatrix> {
    hermitian_eigen(m)?.map(f)
}

pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function(m, f64::exp)
}

/// How `matrix_log` treats zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogZero {
    /// A singular argument is a domain error.
    Reject,
    /// `log 0` is replaced by 0, so that `ρ log ρ` obeys `0 · log 0 = 0`.
    EntropyConvention,
}

/// Natural logarithm of a positive-semidefinite Hermitian matrix.
pub fn matrix_log(m: &ComplexMatrix, zero: LogZero) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let scale = m.frobenius_norm().max(1.0);
    if let Some(&bad) = eig.values().iter().find(|&&a| a < -HERMITIAN_TOL * scale) {
        return Err(Error::DomainError(bad));
    }
    if zero == LogZero::Reject {
        if let Some(&bad) = eig.values().iter().find(|&&a| a <= LOG_ZERO_TOL) {
            return Err(Error::DomainError(bad));
        }
    }
    eig.map(|a| if a <= LOG_ZERO_TOL { 0.0 } else { a.ln() })
}
