//! Dimensionless evaluation points (`δ = 1`, `τ = δt`, `λ/δ`).

use std::f64::consts::FRAC_PI_2;

use nuqet::entanglement::{embed_occupation, log_negativity, scaled_entanglement_entropy, ModeBasis};
use nuqet::linalg::ComplexMatrix;
use nuqet::neutrino::{decoherence_derivative, decoherence_state, flavor_povm, mass_povm};
use nuqet::qet::{fisher_information, outcome_probabilities, qfi, sld_spectral};
use nuqet::{DensityMatrix, Povm};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    PlaneWave,
    Decoherence,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::PlaneWave => "plane-wave",
            Self::Decoherence => "decoherence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Mass,
    Flavor,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mass => "mass",
            Self::Flavor => "flavor",
        }
    }

    pub fn mode_basis(self, theta: f64) -> ModeBasis {
        match self {
            Self::Mass => ModeBasis::Mass,
            Self::Flavor => ModeBasis::Flavor { theta },
        }
    }
}

/// θ must lie strictly inside `(0, π/2)`; at the endpoints the state is
/// stationary and the estimation problem degenerates.
pub fn validate_theta(theta: f64) -> CliResult<()> {
    if theta.is_finite() && theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "theta must lie in (0, pi/2), got {theta}"
        )))
    }
}

pub fn validate_tau(tau: f64) -> CliResult<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "tau must be finite and nonnegative, got {tau}"
        )))
    }
}

pub fn validate_lambda_ratio(ratio: f64) -> CliResult<()> {
    if ratio.is_finite() && ratio >= 0.0 {
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "lambda-ratio must be finite and nonnegative, got {ratio}"
        )))
    }
}

/// Resolves the effective decoherence ratio for a model choice.
pub fn effective_lambda(model: Option<Model>, lambda_ratio: Option<f64>) -> CliResult<(Model, f64)> {
    match (model, lambda_ratio) {
        (Some(Model::PlaneWave), Some(r)) if r != 0.0 => Err(CliError::validation(
            "plane-wave model has no decoherence; drop --lambda-ratio or use --model decoherence",
        )),
        (Some(Model::PlaneWave), _) => Ok((Model::PlaneWave, 0.0)),
        (Some(Model::Decoherence), r) => {
            let r = r.unwrap_or(1.0);
            validate_lambda_ratio(r)?;
            Ok((Model::Decoherence, r))
        }
        (None, Some(r)) => {
            validate_lambda_ratio(r)?;
            Ok((if r == 0.0 { Model::PlaneWave } else { Model::Decoherence }, r))
        }
        (None, None) => Ok((Model::PlaneWave, 0.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub theta: f64,
    pub tau: f64,
    pub lambda_ratio: f64,
}

impl Point {
    pub fn validate(&self) -> CliResult<()> {
        validate_theta(self.theta)?;
        validate_tau(self.tau)?;
        validate_lambda_ratio(self.lambda_ratio)
    }
}

/// State, derivative and SLD at one point.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub point: Point,
    pub rho: DensityMatrix,
    pub drho: ComplexMatrix,
    pub sld: ComplexMatrix,
}

impl Evaluated {
    pub fn new(point: Point) -> CliResult<Self> {
        point.validate()?;
        let Point {
            theta,
            tau,
            lambda_ratio,
        } = point;
        let rho = decoherence_state(theta, 1.0, lambda_ratio, tau)?;
        let drho = decoherence_derivative(theta, 1.0, lambda_ratio, tau)?;
        let sld = sld_spectral(&rho, &drho)?;
        Ok(Self { point, rho, drho, sld })
    }

    pub fn qfi(&self) -> CliResult<f64> {
        Ok(qfi(&self.rho, &self.drho)?)
    }

    pub fn fi(&self, povm: &Povm) -> CliResult<f64> {
        Ok(fisher_information(&self.rho, &self.sld, povm)?)
    }

    pub fn fi_flavor(&self) -> CliResult<f64> {
        self.fi(&flavor_povm(self.point.theta))
    }

    pub fn fi_mass(&self) -> CliResult<f64> {
        self.fi(&mass_povm())
    }

    pub fn entropy_scaled(&self, basis: Basis) -> CliResult<f64> {
        Ok(scaled_entanglement_entropy(
            &self.rho,
            basis.mode_basis(self.point.theta),
        )?)
    }

    pub fn log_negativity(&self, basis: Basis) -> CliResult<f64> {
        let rho4 = embed_occupation(&self.rho, basis.mode_basis(self.point.theta))?;
        Ok(log_negativity(&rho4)?)
    }

    pub fn purity(&self) -> f64 {
        self.rho.purity()
    }

    pub fn survival_probability(&self) -> CliResult<f64> {
        Ok(outcome_probabilities(&self.rho, &flavor_povm(self.point.theta))?[0])
    }
}
