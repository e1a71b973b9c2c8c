//! Mode entanglement of a single neutrino under the occupation-number
//! embedding `|mode 1⟩ ↦ |10⟩`, `|mode 2⟩ ↦ |01⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, matrix_log, partial_transpose, ComplexMatrix, LogZero, Subsystem};
use crate::neutrino::mixing_matrix;
use crate::qet::DensityMatrix;

/// Largest tolerated weight outside the single-excitation sector.
pub const SECTOR_TOL: f64 = 1e-10;
/// Purity below `1 − PURE_TOL` is treated as mixed.
pub const PURE_TOL: f64 = 1e-8;
/// Maps the 1-bit maximum of the entropy onto the QFI maximum of 4.
pub const ENTROPY_SCALE: f64 = 4.0;

// two-qubit indices with index = 2·q₁ + q₂
const FIRST_OCCUPIED: usize = 2;
const SECOND_OCCUPIED: usize = 1;

/// Which pair of modes defines the bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeBasis {
    /// Mass eigenstates `ν₁`, `ν₂`.
    Mass,
    /// Flavor eigenstates `ν_e`, `ν_μ` at mixing angle `theta`.
    Flavor { theta: f64 },
}

/// A two-qubit density matrix supported on `span{|01⟩, |10⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState(DensityMatrix);

impl TwoQubitState {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::UnsupportedDim(rho.dim()));
        }
        let m = rho.matrix();
        let outside = m[(0, 0)].re.abs() + m[(3, 3)].re.abs();
        if outside > SECTOR_TOL {
            return Err(Error::InvalidDensity(format!(
                "weight {outside:e} outside the single-excitation sector"
            )));
        }
        Ok(Self(rho))
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn purity(&self) -> f64 {
        self.0.purity()
    }
}

/// Embeds a single-particle state into the two-mode occupation space.
///
/// In the flavor basis the state is first rotated to `U ρ Uᵀ`.
pub fn embed_occupation(rho: &DensityMatrix, basis: ModeBasis) -> Result<TwoQubitState> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDim(rho.dim()));
    }
    let single = match basis {
        ModeBasis::Mass => *rho.matrix(),
        ModeBasis::Flavor { theta } => {
            let u = mixing_matrix(theta);
            u * *rho.matrix() * u.transpose()
        }
    };
    let slot = [FIRST_OCCUPIED, SECOND_OCCUPIED];
    let mut m = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            m[(slot[i], slot[j])] = single[(i, j)];
        }
    }
    Ok(TwoQubitState(DensityMatrix::new_unchecked(m.hermitian_part())))
}

/// Partial trace keeping qubit `keep`, in the basis order `{|0⟩, |1⟩}`.
pub fn reduced_state(rho4: &TwoQubitState, keep: Subsystem) -> DensityMatrix {
    let m = rho4.matrix();
    let mut r = ComplexMatrix::zeros(2).expect("dim 2");
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                let (i, j) = match keep {
                    Subsystem::First => (2 * a + k, 2 * b + k),
                    Subsystem::Second => (2 * k + a, 2 * k + b),
                };
                acc += m[(i, j)];
            }
            r[(a, b)] = acc;
        }
    }
    DensityMatrix::new_unchecked(r)
}

/// `S = −Tr[ρ log₂ ρ]` with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let log = matrix_log(rho.matrix(), LogZero::EntropyConvention)?;
    let nats = -(*rho.matrix() * log).trace().re;
    let max = (rho.dim() as f64).log2();
    Ok((nats / std::f64::consts::LN_2).clamp(0.0, max))
}

/// `4 S(ρ_A)` for the first mode of the embedded state; pure states only.
pub fn scaled_entanglement_entropy(rho: &DensityMatrix, basis: ModeBasis) -> Result<f64> {
    let rho4 = embed_occupation(rho, basis)?;
    let purity = rho4.purity();
    if purity < 1.0 - PURE_TOL {
        return Err(Error::MixedStateUnsupported(purity));
    }
    Ok(ENTROPY_SCALE * von_neumann_entropy(&reduced_state(&rho4, Subsystem::First))?)
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T₁}`.
pub fn negativity(rho4: &TwoQubitState) -> Result<f64> {
    negativity_of(rho4.matrix(), Subsystem::First)
}

/// [`negativity`] with the partial transpose taken over `subsystem`.
pub fn negativity_wrt(rho4: &TwoQubitState, subsystem: Subsystem) -> Result<f64> {
    negativity_of(rho4.matrix(), subsystem)
}

fn negativity_of(m: &ComplexMatrix, subsystem: Subsystem) -> Result<f64> {
    let pt = partial_transpose(m, subsystem)?;
    let eig = hermitian_eigen(&pt)?;
    Ok(eig.values().iter().filter(|v| **v < 0.0).map(|v| -v).sum())
}

/// `E_N = log₂(2N + 1)`.
pub fn log_negativity(rho4: &TwoQubitState) -> Result<f64> {
    Ok((2.0 * negativity(rho4)? + 1.0).log2())
}
