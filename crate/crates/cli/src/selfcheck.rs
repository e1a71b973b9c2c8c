//! Oracle-equivalence checks between numerical routines and closed forms.
//!
//! `perturb` shifts θ on the numerical side only, so a nonzero value must make
//! the θ-sensitive checks fail.

use std::f64::consts::{FRAC_PI_4, PI};

use nuqet::linalg::hermitian_eigen;
use nuqet::neutrino::{
    decoherence_derivative, decoherence_derivative_elements, decoherence_eigenvalues, decoherence_kets,
    decoherence_state, flavor_fi_decoherence_closed, flavor_povm, lindblad_evolve, plane_wave_state,
    sld_decoherence_closed, sld_plane_wave_closed, state_eigensystem_decoherence, OscillationConfig,
};
use nuqet::qet::{fisher_information, qfi, random_projective_povm, sld_integral_auto, sld_spectral};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;

pub const DEFAULT_SEED: u64 = 20_240_901;
const THETAS: [f64; 5] = [0.1, 0.4, 0.7, 1.0, 1.4];
const RATIOS: [f64; 4] = [0.0, 0.1, 1.0, 10.0];
const TAUS: [f64; 5] = [0.0, 1.0, PI, 7.5, 20.0];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfcheckOptions {
    pub perturb: f64,
    pub seed: u64,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        Self {
            perturb: 0.0,
            seed: DEFAULT_SEED,
        }
    }
}

fn grid() -> impl Iterator<Item = (f64, f64, f64)> {
    THETAS.into_iter().flat_map(|th| {
        RATIOS
            .into_iter()
            .flat_map(move |l| TAUS.into_iter().map(move |t| (th, l, t)))
    })
}

fn max_over<I: Iterator<Item = CliResult<f64>>>(mut errors: I) -> CliResult<f64> {
    errors.try_fold(0.0f64, |acc, e| Ok(acc.max(e?)))
}

pub fn run_selfcheck(opts: SelfcheckOptions) -> CliResult<Vec<CheckResult>> {
    let p = opts.perturb;
    let mut results = Vec::new();

    results.push(CheckResult {
        name: "qfi_equals_4",
        max_error: max_over(grid().map(|(th, l, t)| {
            let rho = decoherence_state(th + p, 1.0, l, t)?;
            let drho = decoherence_derivative(th + p, 1.0, l, t)?;
            Ok((qfi(&rho, &drho)? - 4.0).abs())
        }))?,
        tolerance: 1e-9,
    });

    results.push(CheckResult {
        name: "sld_plane_wave_closed",
        max_error: max_over(THETAS.into_iter().flat_map(|th| TAUS.map(|t| (th, t))).map(|(th, t)| {
            let l = sld_spectral(
                &plane_wave_state(th + p, t),
                &decoherence_derivative(th + p, 1.0, 0.0, t)?,
            )?;
            Ok((l - sld_plane_wave_closed(th, t)).max_abs())
        }))?,
        tolerance: 1e-9,
    });

    results.push(CheckResult {
        name: "sld_decoherence_closed",
        max_error: max_over(grid().filter(|(_, l, t)| l * t > 0.0).map(|(th, l, t)| {
            let rho = decoherence_state(th + p, 1.0, l, t)?;
            let drho = decoherence_derivative(th + p, 1.0, l, t)?;
            let closed = sld_decoherence_closed(th)?;
            Ok((sld_spectral(&rho, &drho)? - closed).max_abs() / closed.max_abs().max(1.0))
        }))?,
        tolerance: 1e-8,
    });

    results.push(CheckResult {
        name: "sld_spectral_vs_integral",
        max_error: max_over(
            [
                (0.4, 0.0, 1.0),
                (1.0, 0.0, 2.5),
                (0.7, 1.0, 0.8),
                (0.4, 0.1, 5.0),
                (1.4, 10.0, 0.3),
            ]
            .into_iter()
            .map(|(th, l, t)| {
                let rho = decoherence_state(th + p, 1.0, l, t)?;
                let drho = decoherence_derivative(th + p, 1.0, l, t)?;
                let spectral = sld_spectral(&rho, &drho)?;
                let reference = sld_integral_auto(
                    &decoherence_state(th, 1.0, l, t)?,
                    &decoherence_derivative(th, 1.0, l, t)?,
                )?;
                Ok((spectral - reference).frobenius_norm())
            }),
        )?,
        tolerance: 1e-6,
    });

    results.push(CheckResult {
        name: "flavor_fi_closed_form",
        max_error: max_over(grid().map(|(th, l, t)| {
            let rho = decoherence_state(th + p, 1.0, l, t)?;
            let drho = decoherence_derivative(th + p, 1.0, l, t)?;
            let fi = fisher_information(&rho, &sld_spectral(&rho, &drho)?, &flavor_povm(th + p))?;
            Ok((fi - flavor_fi_decoherence_closed(th, 1.0, l, t)?).abs())
        }))?,
        tolerance: 1e-9,
    });

    results.push(CheckResult {
        name: "rk4_vs_closed_form",
        max_error: max_over(RATIOS.into_iter().map(|l| {
            let cfg = OscillationConfig::dimensionless(THETAS[2] + p, l)?;
            let evolved = lindblad_evolve(&plane_wave_state(THETAS[2] + p, 0.0), &cfg, 20.0, 10_000)?;
            let exact = decoherence_state(THETAS[2], 1.0, l, 20.0)?;
            Ok((*evolved.matrix() - *exact.matrix()).frobenius_norm())
        }))?,
        tolerance: 1e-8,
    });

    let eigen_grid = || {
        THETAS
            .into_iter()
            .filter(|th| (th - FRAC_PI_4).abs() >= 1e-3)
            .flat_map(|th| [(0.1, 1.0), (1.0, 1.0), (10.0, 0.4)].map(|(l, t)| (th, l, t)))
    };

    results.push(CheckResult {
        name: "eigensystem_closed_form",
        max_error: max_over(eigen_grid().map(|(th, l, t)| {
            let numeric = hermitian_eigen(decoherence_state(th + p, 1.0, l, t)?.matrix())?;
            let closed = state_eigensystem_decoherence(th, 1.0, l, t)?;
            let (bp, bm) = decoherence_eigenvalues(th, l, t)?;
            let mut err = (numeric.values()[0] - bm).abs().max((numeric.values()[1] - bp).abs());
            for k in 0..2 {
                let overlap: num_complex::Complex64 = numeric
                    .vector(k)
                    .iter()
                    .zip(closed.vector(k))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                err = err.max((overlap.norm() - 1.0).abs());
            }
            Ok(err)
        }))?,
        tolerance: 1e-9,
    });

    results.push(CheckResult {
        name: "derivative_elements_closed_form",
        max_error: max_over(eigen_grid().map(|(th, l, t)| {
            let drho = decoherence_derivative(th + p, 1.0, l, t)?;
            let (plus, minus) = decoherence_kets(th, 1.0, l, t)?;
            let (pp, mm, mp) = decoherence_derivative_elements(th, l, t)?;
            let e1 = (drho.sandwich(&plus, &plus)? - pp).norm();
            let e2 = (drho.sandwich(&minus, &minus)? - mm).norm();
            let e3 = (drho.sandwich(&minus, &plus)?.norm() - mp.abs()).abs();
            Ok(e1.max(e2).max(e3))
        }))?,
        tolerance: 1e-9,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut excess = 0.0f64;
    for (th, l, t) in grid().step_by(5) {
        let rho = decoherence_state(th + p, 1.0, l, t)?;
        let drho = decoherence_derivative(th + p, 1.0, l, t)?;
        let h = qfi(&rho, &drho)?;
        let sld = sld_spectral(&rho, &drho)?;
        for _ in 0..100 {
            let povm = random_projective_povm(&mut rng, 2)?;
            excess = excess.max(fisher_information(&rho, &sld, &povm)? - h);
        }
    }
    results.push(CheckResult {
        name: "fi_bounded_by_qfi",
        max_error: excess.max(0.0),
        tolerance: 1e-8,
    });

    Ok(results)
}

pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = format!("{:<34} {:>12} {:>10}  status\n", "check", "max_error", "tolerance");
    for r in results {
        out.push_str(&format!(
            "{:<34} {:>12.3e} {:>10.0e}  {}\n",
            r.name,
            r.max_error,
            r.tolerance,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}
