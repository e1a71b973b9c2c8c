use super::{cramer_rao_bound, fisher_information, qfi, sld_spectral, DensityMatrix, Povm};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Central-difference step used when no analytic derivative is registered.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

type StateFn = dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync;
type DerivativeFn = dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync;

/// One-parameter family of states `λ ↦ ρ_λ`, optionally with an analytic `∂_λρ_λ`.
pub struct StateFamily {
    state: Box<StateFn>,
    derivative: Option<Box<DerivativeFn>>,
    fd_step: f64,
    domain: (f64, f64),
}

impl StateFamily {
    pub fn new<F>(state: F) -> Self
    where
        F: Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
    {
        Self {
            state: Box::new(state),
            derivative: None,
            fd_step: DEFAULT_FD_STEP,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        self.derivative = Some(Box::new(derivative));
        self
    }

    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn state_at(&self, lambda: f64) -> Result<DensityMatrix> {
        (self.state)(lambda)
    }

    /// Analytic derivative if registered, otherwise a central difference.
    pub fn derivative_at(&self, lambda: f64) -> Result<ComplexMatrix> {
        match &self.derivative {
            Some(d) => d(lambda),
            None => finite_difference_derivative(self, lambda),
        }
    }

    /// Full estimation report at `lambda`.
    pub fn estimate(&self, lambda: f64, povms: &[(&str, &Povm)], measurement_count: u64) -> Result<EstimationReport> {
        let rho = self.state_at(lambda)?;
        let drho = self.derivative_at(lambda)?;
        estimate(lambda, &rho, &drho, povms, measurement_count)
    }
}

impl std::fmt::Debug for StateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StateFamily")
            .field("analytic_derivative", &self.derivative.is_some())
            .field("fd_step", &self.fd_step)
            .field("domain", &self.domain)
            .finish()
    }
}

/// `(ρ(λ + h) − ρ(λ − h)) / 2h`, always using the family's own step.
pub fn finite_difference_derivative(family: &StateFamily, lambda: f64) -> Result<ComplexMatrix> {
    let h = family.fd_step;
    let (lo, hi) = family.domain;
    if lambda - h < lo || lambda + h > hi {
        return Err(Error::DomainEdge {
            value: lambda,
            step: h,
            lo,
            hi,
        });
    }
    let plus = family.state_at(lambda + h)?;
    let minus = family.state_at(lambda - h)?;
    Ok((*plus.matrix() - *minus.matrix()) * (0.5 / h))
}

/// Fisher information and Cramér–Rao bound of one named POVM.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmFisher {
    pub label: String,
    pub fi: f64,
    /// `None` when the measurement carries no information (`fi = 0`).
    pub cramer_rao: Option<f64>,
}

/// Estimation quantities at a single parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub parameter: f64,
    pub qfi: f64,
    pub sld: ComplexMatrix,
    pub per_povm: Vec<PovmFisher>,
    pub measurement_count: u64,
    /// Quantum Cramér–Rao bound `1 / (M H)`.
    pub cramer_rao: f64,
}

impl EstimationReport {
    pub fn fi(&self, label: &str) -> Option<f64> {
        self.per_povm.iter().find(|p| p.label == label).map(|p| p.fi)
    }
}

/// Builds an [`EstimationReport`] for explicit `ρ` and `∂ρ`.
pub fn estimate(
    parameter: f64,
    rho: &DensityMatrix,
    drho: &ComplexMatrix,
    povms: &[(&str, &Povm)],
    measurement_count: u64,
) -> Result<EstimationReport> {
    let h = qfi(rho, drho)?;
    let sld = sld_spectral(rho, drho)?;
    let cramer_rao = cramer_rao_bound(h, measurement_count)?;
    let per_povm = povms
        .iter()
        .map(|(label, povm)| {
            let fi = fisher_information(rho, &sld, povm)?;
            let bound = if fi > 0.0 {
                Some(cramer_rao_bound(fi, measurement_count)?)
            } else {
                None
            };
            Ok(PovmFisher {
                label: label.to_string(),
                fi,
                cramer_rao: bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimationReport {
        parameter,
        qfi: h,
        sld,
        per_povm,
        measurement_count,
        cramer_rao,
    })
}
