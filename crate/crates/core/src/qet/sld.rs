//! Two routes to the symmetric logarithmic derivative.
//!
//! In the eigenbasis `ρ = Σ αₙ |ψₙ⟩⟨ψₙ|` the SLD is
//! `L = 2 Σ ⟨ψₘ|∂ρ|ψₙ⟩ / (αₘ + αₙ) |ψₘ⟩⟨ψₙ|`, summed over pairs with a
//! nonzero eigenvalue sum. The same operator is the integral
//! `L = 2 ∫₀^∞ e^{−ρs} ∂ρ e^{−ρs} ds`, evaluated here by composite Simpson
//! quadrature and used as an independent check of the spectral sum.

use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HermitianEigensystem};

/// Eigenvalue sums below this are treated as zero (kernel pairs).
pub const KERNEL_SUM_TOL: f64 = 1e-12;
/// Largest derivative element tolerated on a kernel pair.
pub const KERNEL_DERIVATIVE_TOL: f64 = 1e-8;
const TRACELESS_TOL: f64 = 1e-8;
const QFI_CONSISTENCY_TOL: f64 = 1e-9;

const DEFAULT_TAIL_EFOLDS: f64 = 50.0;
const DEFAULT_PANELS: usize = 10_000;
/// Simpson nodes per unit of the fastest decay rate.
const NODES_PER_DECAY: f64 = 20.0;

/// The derivative in the eigenbasis of `ρ`, with the kernel condition checked.
struct Eigenframe {
    eig: HermitianEigensystem,
    drho: ComplexMatrix,
}

impl Eigenframe {
    fn new(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<Self> {
        if drho.dim() != rho.dim() {
            return Err(Error::DimMismatch(rho.dim(), drho.dim()));
        }
        if !drho.is_hermitian() {
            return Err(Error::InvalidDerivative(format!(
                "not Hermitian (defect {:e})",
                drho.hermiticity_defect()
            )));
        }
        let tr = drho.trace().norm();
        if tr > TRACELESS_TOL {
            return Err(Error::InvalidDerivative(format!("trace {tr:e} is not zero")));
        }
        let eig = hermitian_eigen(rho.matrix())?;
        let in_basis = eig.to_eigenbasis(drho)?;
        let frame = Self { eig, drho: in_basis };
        frame.check_kernel()?;
        Ok(frame)
    }

    fn eigenvalue_sum(&self, m: usize, n: usize) -> f64 {
        self.eig.values()[m] + self.eig.values()[n]
    }

    fn check_kernel(&self) -> Result<()> {
        let dim = self.eig.dim();
        for m in 0..dim {
            for n in 0..dim {
                let magnitude = self.drho[(m, n)].norm();
                if self.eigenvalue_sum(m, n) < KERNEL_SUM_TOL && magnitude > KERNEL_DERIVATIVE_TOL {
                    return Err(Error::KernelObstruction { m, n, magnitude });
                }
            }
        }
        Ok(())
    }

    /// SLD matrix elements in the eigenbasis.
    fn sld_elements(&self) -> Result<ComplexMatrix> {
        let dim = self.eig.dim();
        ComplexMatrix::from_fn(dim, |m, n| {
            let sum = self.eigenvalue_sum(m, n);
            if sum < KERNEL_SUM_TOL {
                Complex64::new(0.0, 0.0)
            } else {
                self.drho[(m, n)] * (2.0 / sum)
            }
        })
    }
}

/// SLD from the spectral decomposition of `ρ`.
///
/// The result vanishes on the kernel of `ρ`. Fails with `KernelObstruction`
/// when `∂ρ` has a non-negligible element between two kernel vectors, since
/// no SLD of that form exists.
pub fn sld_spectral(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let frame = Eigenframe::new(rho, drho)?;
    let l = frame.eig.from_eigenbasis(&frame.sld_elements()?)?;
    Ok(l.hermitian_part())
}

/// SLD from the truncated integral `2 ∫₀^{s_max} e^{−ρs} ∂ρ e^{−ρs} ds`.
///
/// Composite Simpson with `panels` panels (`2·panels` subintervals).
/// `e^{−ρs}` is evaluated spectrally at each node.
pub fn sld_integral(rho: &DensityMatrix, drho: &ComplexMatrix, s_max: f64, panels: usize) -> Result<ComplexMatrix> {
    if !(s_max.is_finite() && s_max > 0.0) || panels == 0 {
        return Err(Error::BadQuadrature { s_max, panels });
    }
    let frame = Eigenframe::new(rho, drho)?;
    let eig = &frame.eig;
    let integrand = |s: f64| -> Result<ComplexMatrix> {
        let decay = eig.map(|a| (-a * s).exp())?;
        Ok(decay * *drho * decay)
    };

    let intervals = 2 * panels;
    let h = s_max / intervals as f64;
    let mut acc = integrand(0.0)? + integrand(s_max)?;
    for k in 1..intervals {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += integrand(k as f64 * h)? * weight;
    }
    Ok((acc * (2.0 * h / 3.0)).hermitian_part())
}

/// [`sld_integral`] with the default truncation `s_max = 50 / α⁺_min` and
/// enough panels to resolve the fastest decaying term.
pub fn sld_integral_auto(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(rho.matrix())?;
    let positive = eig.values().iter().copied().filter(|&a| a > KERNEL_SUM_TOL);
    let alpha_min = positive.clone().fold(f64::INFINITY, f64::min);
    let alpha_max = positive.fold(0.0, f64::max);
    let s_max = DEFAULT_TAIL_EFOLDS / alpha_min;
    let resolve = (NODES_PER_DECAY * s_max * alpha_max).ceil() as usize;
    sld_integral(rho, drho, s_max, DEFAULT_PANELS.max(resolve))
}

/// `2 Σ |⟨ψₙ|∂ρ|ψₘ⟩|² / (αₙ + αₘ)` over pairs with nonzero eigenvalue sum.
pub fn qfi_eigenbasis_sum(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let frame = Eigenframe::new(rho, drho)?;
    let dim = frame.eig.dim();
    let mut h = 0.0;
    for m in 0..dim {
        for n in 0..dim {
            let sum = frame.eigenvalue_sum(m, n);
            if sum >= KERNEL_SUM_TOL {
                h += 2.0 * frame.drho[(m, n)].norm_sqr() / sum;
            }
        }
    }
    Ok(h)
}

/// Quantum Fisher information.
///
/// Computed from the eigenbasis sum and cross-checked against `Tr[ρL²]` and
/// `Tr[(∂ρ)L]`; disagreement beyond `1e-9` is reported as `InconsistentQfi`.
pub fn qfi(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let h = qfi_eigenbasis_sum(rho, drho)?;
    let l = sld_spectral(rho, drho)?;
    let trace_rho_l2 = (*rho.matrix() * l * l).trace().re;
    let trace_drho_l = (*drho * l).trace().re;
    let tol = QFI_CONSISTENCY_TOL * h.abs().max(1.0);
    if (trace_rho_l2 - h).abs() > tol || (trace_drho_l - h).abs() > tol {
        return Err(Error::InconsistentQfi {
            trace_rho_l2,
            trace_drho_l,
        });
    }
    Ok(h)
}
