//! Two-flavor neutrino oscillations in the mass basis.
//!
//! Two models are provided. The plane-wave model is the pure state
//! `ρ = [[cos²θ, ½ sin 2θ e^{iφ}], [½ sin 2θ e^{−iφ}, sin²θ]]` with `φ = δt`.
//! The decoherence model adds the Lindblad operator `A = √λ |ν₁⟩⟨ν₁|`, which
//! damps the mass-basis coherence by `e^{−λt/2}`.
//!
//! Time is usually measured in units of `1/δ`, so callers pass `delta = 1`
//! and `t = τ`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, ComplexMatrix, HermitianEigensystem};
use crate::qet::{DensityMatrix, Povm, StateFamily};

/// Angles this close to 0 or π/2 make `tan θ` or `cot θ` diverge.
const DEGENERATE_ANGLE_TOL: f64 = 1e-12;
/// Largest tolerated trace drift of the RK4 integrator.
const TRACE_DRIFT_TOL: f64 = 1e-10;

/// Oscillation model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationConfig {
    /// Mixing angle θ (radians).
    pub theta: f64,
    /// Phase rate δ = (m₂² − m₁²) / 2E.
    pub delta: f64,
    /// Decoherence rate λ.
    pub lambda_dec: f64,
}

impl OscillationConfig {
    pub fn new(theta: f64, delta: f64, lambda_dec: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidConfig(format!("theta = {theta}")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidConfig(format!("delta must be positive (got {delta})")));
        }
        if !(lambda_dec.is_finite() && lambda_dec >= 0.0) {
            return Err(Error::NegativeRate(lambda_dec));
        }
        Ok(Self {
            theta,
            delta,
            lambda_dec,
        })
    }

    /// Time measured in units of `1/δ`: `δ = 1`, `λ = lambda_ratio`.
    pub fn dimensionless(theta: f64, lambda_ratio: f64) -> Result<Self> {
        Self::new(theta, 1.0, lambda_ratio)
    }

    /// Derives `δ = (m₂² − m₁²) / 2E` from masses and energy (natural units).
    pub fn from_masses(theta: f64, m1: f64, m2: f64, energy: f64, lambda_dec: f64) -> Result<Self> {
        if m1.is_nan() || m2.is_nan() || m2 <= m1 || m1 < 0.0 {
            return Err(Error::InvalidConfig(format!("need 0 ≤ m1 < m2 (got {m1}, {m2})")));
        }
        if energy.is_nan() || energy <= 0.0 {
            return Err(Error::InvalidConfig(format!("energy must be positive (got {energy})")));
        }
        Self::new(theta, (m2 * m2 - m1 * m1) / (2.0 * energy), lambda_dec)
    }

    /// Fails unless θ lies strictly inside `(0, π/2)`.
    pub fn ensure_estimable(&self) -> Result<()> {
        if self.theta <= 0.0 || self.theta >= FRAC_PI_2 {
            return Err(Error::InvalidConfig(format!(
                "theta must lie in (0, π/2) for estimation (got {})",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn model(&self) -> ModelKind {
        if self.lambda_dec == 0.0 {
            ModelKind::PlaneWave
        } else {
            ModelKind::Decoherence
        }
    }

    /// `ℋ = diag(0, δ)` in the mass basis.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&[0.0, self.delta]).expect("dim 2")
    }

    /// Jump operator `A = √λ |ν₁⟩⟨ν₁|`.
    pub fn jump_operator(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&[self.lambda_dec.sqrt(), 0.0]).expect("dim 2")
    }

    pub fn state(&self, t: f64) -> Result<DensityMatrix> {
        decoherence_state(self.theta, self.delta, self.lambda_dec, t)
    }

    pub fn derivative(&self, t: f64) -> Result<ComplexMatrix> {
        decoherence_derivative(self.theta, self.delta, self.lambda_dec, t)
    }

    /// The state at time `t` as a family in θ, with the analytic θ-derivative.
    pub fn theta_family(&self, t: f64) -> Result<StateFamily> {
        check_time(t)?;
        let Self { delta, lambda_dec, .. } = *self;
        Ok(
            StateFamily::new(move |theta| decoherence_state(theta, delta, lambda_dec, t))
                .with_derivative(move |theta| decoherence_derivative(theta, delta, lambda_dec, t)),
        )
    }
}

/// The plane-wave model is the decoherence model at `λ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    PlaneWave,
    Decoherence,
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Flavor kets in terms of mass kets: `(ν_e, ν_μ)ᵀ = U (ν₁, ν₂)ᵀ`.
pub fn mixing_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, s], &[-s, c]]).expect("dim 2")
}

/// Mass-basis state with coherence `½ sin 2θ · damping · e^{iφ}`.
fn mass_basis_state(theta: f64, phase: f64, damping: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let coherence = Complex64::from_polar(0.5 * (2.0 * theta).sin() * damping, phase);
    ComplexMatrix::from_rows(&[&[real(c * c), coherence], &[coherence.conj(), real(s * s)]]).expect("dim 2")
}

fn mass_basis_derivative(theta: f64, phase: f64, damping: f64) -> ComplexMatrix {
    let s2 = (2.0 * theta).sin();
    let coherence = Complex64::from_polar((2.0 * theta).cos() * damping, phase);
    ComplexMatrix::from_rows(&[&[real(-s2), coherence], &[coherence.conj(), real(s2)]]).expect("dim 2")
}

/// Plane-wave state of a neutrino born as `ν_e`, at oscillation phase `φ = δt`.
pub fn plane_wave_state(theta: f64, phi: f64) -> DensityMatrix {
    DensityMatrix::new_unchecked(mass_basis_state(theta, phi, 1.0))
}

/// `∂_θ` of [`plane_wave_state`].
pub fn plane_wave_derivative(theta: f64, phi: f64) -> ComplexMatrix {
    mass_basis_derivative(theta, phi, 1.0)
}

/// Closed-form solution of the Lindblad equation: coherence
/// `½ sin 2θ e^{(iδ − λ/2)t}`.
pub fn decoherence_state(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<DensityMatrix> {
    check_time(t)?;
    if lambda_dec < 0.0 {
        return Err(Error::NegativeRate(lambda_dec));
    }
    let damping = (-0.5 * lambda_dec * t).exp();
    Ok(DensityMatrix::new_unchecked(mass_basis_state(
        theta,
        delta * t,
        damping,
    )))
}

/// `∂_θ` of [`decoherence_state`].
pub fn decoherence_derivative(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<ComplexMatrix> {
    check_time(t)?;
    if lambda_dec < 0.0 {
        return Err(Error::NegativeRate(lambda_dec));
    }
    let damping = (-0.5 * lambda_dec * t).exp();
    Ok(mass_basis_derivative(theta, delta * t, damping))
}

/// Eigenvalues `β± = ½(1 ± √(cos²2θ + e^{−λt} sin²2θ))`.
pub fn decoherence_eigenvalues(theta: f64, lambda_dec: f64, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let root = ((2.0 * theta).cos().powi(2) + (-lambda_dec * t).exp() * (2.0 * theta).sin().powi(2)).sqrt();
    Ok((0.5 * (1.0 + root), 0.5 * (1.0 - root)))
}

/// The kets `|β±⟩` exactly as given by the closed form with
/// `α = tan 2θ · e^{−λt/2}`:
///
/// `|β±⟩ = (α / [√(1+α²) ∓ 1]^{½}, ± e^{−iδt} [√(1+α²) ∓ 1]^{½}) / (√2 (1+α²)^{¼})`.
///
/// For θ < π/4 these are the eigenvectors of `β±`; for θ > π/4 the labels
/// are exchanged. Unreliable within ~1e-3 of θ = π/4, where α diverges.
pub fn decoherence_kets(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_time(t)?;
    let alpha = (2.0 * theta).tan() * (-0.5 * lambda_dec * t).exp();
    let r = alpha.hypot(1.0);
    // √(r − 1) = |α| / √(r + 1) avoids cancellation for small α
    let sqrt_rm1 = alpha.abs() / (r + 1.0).sqrt();
    let sqrt_rp1 = (r + 1.0).sqrt();
    let sign = if alpha < 0.0 { -1.0 } else { 1.0 };
    let norm = 1.0 / (std::f64::consts::SQRT_2 * r.sqrt());
    let phase = Complex64::from_polar(1.0, -delta * t);
    let plus = vec![real(sign * sqrt_rp1 * norm), phase * (sqrt_rm1 * norm)];
    let minus = vec![real(alpha / sqrt_rp1 * norm), -phase * (sqrt_rp1 * norm)];
    Ok((plus, minus))
}

/// Closed-form eigensystem of [`decoherence_state`], ascending.
pub fn state_eigensystem_decoherence(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<HermitianEigensystem> {
    let (beta_plus, beta_minus) = decoherence_eigenvalues(theta, lambda_dec, t)?;
    let (ket_plus, ket_minus) = decoherence_kets(theta, delta, lambda_dec, t)?;
    let pairs = if (2.0 * theta).cos() >= 0.0 {
        vec![(beta_minus, ket_minus), (beta_plus, ket_plus)]
    } else {
        vec![(beta_minus, ket_plus), (beta_plus, ket_minus)]
    };
    HermitianEigensystem::from_pairs(pairs)
}

/// Closed-form matrix elements of `∂_θρ` between the kets of
/// [`decoherence_kets`]: `(⟨β+|∂ρ|β+⟩, ⟨β−|∂ρ|β−⟩, ⟨β−|∂ρ|β+⟩)`.
pub fn decoherence_derivative_elements(theta: f64, lambda_dec: f64, t: f64) -> Result<(f64, f64, f64)> {
    check_time(t)?;
    let decay = (-lambda_dec * t).exp();
    let tan2 = (2.0 * theta).tan();
    let denom = (1.0 + tan2 * tan2 * decay).sqrt();
    let diag = (2.0 * theta).sin() * (1.0 - decay) / denom;
    let off = -(tan2 * (-0.5 * lambda_dec * t).exp()).abs() / ((2.0 * theta).sin() * denom);
    Ok((-diag, diag, off))
}

/// Lindblad generator `−i[ℋ, ρ] + AρA† − ½{ρ, A†A}`.
pub fn lindblad_rhs(rho: &ComplexMatrix, hamiltonian: &ComplexMatrix, jump: &ComplexMatrix) -> Result<ComplexMatrix> {
    let unitary = commutator(hamiltonian, rho)? * Complex64::new(0.0, -1.0);
    let jump_dag = jump.adjoint();
    let dissipator = jump.matmul(rho)? * jump_dag - anticommutator(rho, &(jump_dag * *jump))? * 0.5;
    Ok(unitary + dissipator)
}

/// Integrates the Lindblad equation with fixed-step classical RK4.
///
/// The state is not renormalized; a trace drift above `1e-10` is an error.
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    config: &OscillationConfig,
    t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    check_time(t)?;
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if t == 0.0 {
        return Ok(*rho0);
    }
    let ham = config.hamiltonian();
    let jump = config.jump_operator();
    let rhs = |r: &ComplexMatrix| lindblad_rhs(r, &ham, &jump);
    let h = t / steps as f64;
    let mut rho = *rho0.matrix();
    for _ in 0..steps {
        let k1 = rhs(&rho)?;
        let k2 = rhs(&(rho + k1 * (0.5 * h)))?;
        let k3 = rhs(&(rho + k2 * (0.5 * h)))?;
        let k4 = rhs(&(rho + k3 * h))?;
        rho += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    let drift = (rho.trace().re - 1.0).abs();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::TraceDrift(drift));
    }
    DensityMatrix::new(rho)
}

/// Projectors onto `|ν_e⟩` and `|ν_μ⟩` in the mass basis.
pub fn flavor_povm(theta: f64) -> Povm {
    let u = mixing_matrix(theta);
    let electron = ComplexMatrix::projector(&u.row(0)).expect("dim 2");
    let muon = ComplexMatrix::projector(&u.row(1)).expect("dim 2");
    Povm::new(vec![electron, muon], vec!["nu_e", "nu_mu"]).expect("flavor projectors are complete")
}

/// Projectors onto `|ν₁⟩` and `|ν₂⟩`.
pub fn mass_povm() -> Povm {
    Povm::new(
        vec![
            ComplexMatrix::from_diag(&[1.0, 0.0]).expect("dim 2"),
            ComplexMatrix::from_diag(&[0.0, 1.0]).expect("dim 2"),
        ],
        vec!["nu_1", "nu_2"],
    )
    .expect("mass projectors are complete")
}

/// Eigenprojectors `|±2⟩⟨±2|` of the plane-wave SLD:
/// `½ [[1 ∓ sin 2θ, ±cos 2θ e^{iφ}], [±cos 2θ e^{−iφ}, 1 ± sin 2θ]]`.
pub fn optimal_povm_plane_wave(theta: f64, phi: f64) -> Povm {
    let s2 = (2.0 * theta).sin();
    let off = Complex64::from_polar(0.5 * (2.0 * theta).cos(), phi);
    let plus = ComplexMatrix::from_rows(&[&[real(0.5 * (1.0 - s2)), off], &[off.conj(), real(0.5 * (1.0 + s2))]])
        .expect("dim 2");
    let minus = ComplexMatrix::from_rows(&[&[real(0.5 * (1.0 + s2)), -off], &[-off.conj(), real(0.5 * (1.0 - s2))]])
        .expect("dim 2");
    Povm::new(vec![plus, minus], vec!["sld_plus2", "sld_minus2"]).expect("SLD projectors are complete")
}

/// `L = 2 [[−sin 2θ, cos 2θ e^{iφ}], [cos 2θ e^{−iφ}, sin 2θ]]`.
pub fn sld_plane_wave_closed(theta: f64, phi: f64) -> ComplexMatrix {
    mass_basis_derivative(theta, phi, 1.0) * 2.0
}

/// `L = 2 diag(−tan θ, cot θ)`, independent of `λt`.
pub fn sld_decoherence_closed(theta: f64) -> Result<ComplexMatrix> {
    let (s, c) = theta.sin_cos();
    if s.abs() < DEGENERATE_ANGLE_TOL || c.abs() < DEGENERATE_ANGLE_TOL {
        return Err(Error::DegenerateAngle(theta));
    }
    ComplexMatrix::from_diag(&[-2.0 * s / c, 2.0 * c / s])
}

/// Flavor-measurement FI of the plane-wave model:
/// `4 cos²2θ sin²(φ/2) / (1 − sin²2θ sin²(φ/2))`.
pub fn flavor_fi_plane_wave_closed(theta: f64, phi: f64) -> Result<f64> {
    let c2 = (2.0 * theta).cos().powi(2);
    let half = (0.5 * phi).sin().powi(2);
    let numerator = 4.0 * c2 * half;
    // 1 − sin²2θ sin²(φ/2) rewritten without cancellation
    let denominator = (0.5 * phi).cos().powi(2) + c2 * half;
    flavor_fi_ratio(numerator, denominator)
}

/// Flavor-measurement FI of the decoherence model:
/// `4 cos²2θ B / (2 − sin²2θ B)` with `B = 1 − e^{−λt/2} cos δt`.
pub fn flavor_fi_decoherence_closed(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let c2 = (2.0 * theta).cos().powi(2);
    let bracket = 1.0 - (-0.5 * lambda_dec * t).exp() * (delta * t).cos();
    let numerator = 4.0 * c2 * bracket;
    // 2 − sin²2θ B = (2 − B) + cos²2θ B
    let denominator = (2.0 - bracket) + c2 * bracket;
    flavor_fi_ratio(numerator, denominator)
}

fn flavor_fi_ratio(numerator: f64, denominator: f64) -> Result<f64> {
    const FLOOR: f64 = 1e-14;
    if denominator <= FLOOR {
        // both vanish only at θ = π/4, φ = π where the limit is 0
        if numerator <= FLOOR {
            return Ok(0.0);
        }
        return Err(Error::SingularOutcome {
            index: 0,
            sensitivity: numerator,
        });
    }
    Ok(numerator / denominator)
}

/// Large-time limit of the decoherence flavor FI: `4 cos²2θ / (1 + cos²2θ)`.
pub fn residual_fi(theta: f64) -> f64 {
    let c2 = (2.0 * theta).cos().powi(2);
    4.0 * c2 / (1.0 + c2)
}

/// Probability that a neutrino born as `ν_e` is detected as `ν_e`.
pub fn survival_probability(theta: f64, delta: f64, lambda_dec: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let bracket = 1.0 - (-0.5 * lambda_dec * t).exp() * (delta * t).cos();
    Ok(1.0 - 0.5 * (2.0 * theta).sin().powi(2) * bracket)
}
