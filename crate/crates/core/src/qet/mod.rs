//! Single-parameter quantum estimation theory.
//!
//! Given a state family `ρ_λ` and its derivative `∂_λρ_λ`, this module
//! computes the symmetric logarithmic derivative (SLD) `L` defined by
//! `∂ρ = ½{ρ, L}`, the quantum Fisher information `H = Tr[ρL²]`, the Fisher
//! information of any POVM, and the Cramér–Rao variance bound `1/(M F)`.

mod family;
mod sld;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HERMITIAN_TOL};

pub use family::{estimate, finite_difference_derivative, EstimationReport, PovmFisher, StateFamily, DEFAULT_FD_STEP};
pub use sld::{
    qfi, qfi_eigenbasis_sum, sld_integral, sld_integral_auto, sld_spectral, KERNEL_DERIVATIVE_TOL, KERNEL_SUM_TOL,
};

/// Outcomes with probability below this are candidates for skipping.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
/// A near-zero-probability outcome is only skipped when its sensitivity is below this.
pub const SENSITIVITY_FLOOR: f64 = 1e-7;

/// Trace-one positive-semidefinite Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all within `1e-10`).
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.ensure_hermitian()?;
        let tr = m.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let min = hermitian_eigen(&m)?.values()[0];
        if min < -HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("smallest eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is a density matrix by construction.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        debug_assert!(Self::new(m).is_ok(), "not a density matrix: {m:?}");
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self(ComplexMatrix::identity(dim)? * (1.0 / dim as f64)))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        Ok(Self(ComplexMatrix::projector(psi)? * (1.0 / norm_sqr)))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Positive operators summing to the identity, one per labelled outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new<S: Into<String>>(elements: Vec<ComplexMatrix>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        if elements.len() != labels.len() {
            return Err(Error::InvalidPovm(format!(
                "{} elements but {} labels",
                elements.len(),
                labels.len()
            )));
        }
        let dim = elements[0].dim();
        let mut total = ComplexMatrix::zeros(dim)?;
        for (e, label) in elements.iter().zip(&labels) {
            if e.dim() != dim {
                return Err(Error::DimMismatch(dim, e.dim()));
            }
            e.ensure_hermitian()?;
            let min = hermitian_eigen(e)?.values()[0];
            if min < -HERMITIAN_TOL {
                return Err(Error::InvalidPovm(format!("element {label} has eigenvalue {min:e}")));
            }
            total += *e;
        }
        let defect = (total - ComplexMatrix::identity(dim)?).max_abs();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:e}"
            )));
        }
        Ok(Self { elements, labels })
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ComplexMatrix)> {
        self.labels.iter().map(String::as_str).zip(&self.elements)
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if self.dim() != rho.dim() {
            Err(Error::DimMismatch(rho.dim(), self.dim()))
        } else {
            Ok(())
        }
    }
}

/// `p(x) = Tr[ρ Πₓ]`, clamped to `[0, 1]`.
pub fn outcome_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>> {
    povm.check_dim(rho)?;
    Ok(povm
        .elements()
        .iter()
        .map(|e| (*rho.matrix() * *e).trace().re.clamp(0.0, 1.0))
        .collect())
}

/// Classical Fisher information `Σ (∂p)² / p` of a parameter-independent outcome set.
pub fn classical_fisher(probs: &[f64], dprobs: &[f64]) -> Result<f64> {
    if probs.len() != dprobs.len() {
        return Err(Error::DimMismatch(probs.len(), dprobs.len()));
    }
    let mut fi = 0.0;
    for (index, (&p, &dp)) in probs.iter().zip(dprobs).enumerate() {
        if p < PROBABILITY_FLOOR {
            if dp.abs() >= SENSITIVITY_FLOOR {
                return Err(Error::SingularOutcome { index, sensitivity: dp });
            }
            continue;
        }
        fi += dp * dp / p;
    }
    Ok(fi)
}

/// Fisher information of a POVM through the SLD:
/// `F = Σₓ [Re Tr(ρ Πₓ L)]² / Tr[ρ Πₓ]`.
///
/// This form stays valid when the POVM itself depends on the parameter,
/// which is why it is preferred over [`classical_fisher`].
pub fn fisher_information(rho: &DensityMatrix, sld: &ComplexMatrix, povm: &Povm) -> Result<f64> {
    povm.check_dim(rho)?;
    if sld.dim() != rho.dim() {
        return Err(Error::DimMismatch(rho.dim(), sld.dim()));
    }
    sld.ensure_hermitian()?;
    let mut fi = 0.0;
    for (index, e) in povm.elements().iter().enumerate() {
        let rho_e = *rho.matrix() * *e;
        let p = rho_e.trace().re;
        let sensitivity = (rho_e * *sld).trace().re;
        if p < PROBABILITY_FLOOR {
            if sensitivity.abs() >= SENSITIVITY_FLOOR {
                return Err(Error::SingularOutcome { index, sensitivity });
            }
            continue;
        }
        fi += sensitivity * sensitivity / p;
    }
    Ok(fi)
}

/// Cramér–Rao lower bound `1 / (M F)` on the variance of any unbiased estimator.
pub fn cramer_rao_bound(fi: f64, measurement_count: u64) -> Result<f64> {
    if measurement_count == 0 {
        return Err(Error::ZeroMeasurements);
    }
    if fi.is_nan() || fi <= 0.0 {
        return Err(Error::NonpositiveFisher(fi));
    }
    Ok(1.0 / (measurement_count as f64 * fi))
}

/// Projective measurement onto the eigenspaces of an operator (typically the SLD).
///
/// Degenerate eigenvalues share one projector.
pub fn eigenprojector_povm(op: &ComplexMatrix) -> Result<Povm> {
    let eig = hermitian_eigen(op)?;
    let scale = op.frobenius_norm().max(1.0);
    let mut elements: Vec<ComplexMatrix> = Vec::new();
    let mut labels = Vec::new();
    let mut last: Option<f64> = None;
    for (k, &value) in eig.values().iter().enumerate() {
        let proj = ComplexMatrix::projector(&eig.vector(k))?;
        match last {
            Some(prev) if value - prev < 1e-10 * scale => {
                *elements.last_mut().expect("cluster has a projector") += proj;
            }
            _ => {
                elements.push(proj);
                labels.push(format!("eig{value:+.6}"));
                last = Some(value);
            }
        }
    }
    Povm::new(elements, labels)
}

/// Rank-one projective measurement in a Haar-random orthonormal basis.
pub fn random_projective_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<Povm> {
    ComplexMatrix::zeros(dim)?;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        basis.push(v);
    }
    let elements = basis
        .iter()
        .map(|v| ComplexMatrix::projector(v))
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..dim).map(|k| format!("r{k}")).collect();
    Povm::new(elements, labels)
}
