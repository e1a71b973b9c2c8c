//! Figure data: Fisher information and entanglement curves against `τ = δt`.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::model::{validate_lambda_ratio, validate_theta, Basis, Evaluated, Point};
use crate::sweep::{SweepSpec, Variable};
use crate::table::Table;

/// Decoherence ratios `λ/δ` compared in [`Figure::Fig3`].
pub const FIG3_RATIOS: [(&str, f64); 4] = [("0", 0.0), ("0.1", 0.1), ("1", 1.0), ("10", 10.0)];
pub const DEFAULT_TAU_MAX: f64 = 4.0 * PI;
pub const DEFAULT_POINTS: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Flavor FI of the plane wave for one or more mixing angles.
    Fig1,
    /// Plane-wave flavor FI against the scaled entanglement entropy.
    Fig2,
    /// Flavor FI for several decoherence ratios.
    Fig3,
    /// Decoherent flavor FI against the logarithmic negativity.
    Fig4,
}

impl FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            _ => Err(CliError::validation(format!("unknown figure `{s}` (fig1..fig4)"))),
        }
    }
}

/// A mixing angle with the column suffix it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTheta {
    pub name: String,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    /// Fig1 emits one FI column per entry; the others use the first.
    pub thetas: Vec<NamedTheta>,
    pub lambda_ratio: f64,
    pub basis: Basis,
    pub tau_max: f64,
    pub points: usize,
}

impl FigureOptions {
    pub fn new(thetas: Vec<NamedTheta>) -> Self {
        Self {
            thetas,
            lambda_ratio: 1.0,
            basis: Basis::Flavor,
            tau_max: DEFAULT_TAU_MAX,
            points: DEFAULT_POINTS,
        }
    }

    fn validate(&self) -> CliResult<()> {
        if self.thetas.is_empty() {
            return Err(CliError::validation("no mixing angle given"));
        }
        for t in &self.thetas {
            validate_theta(t.theta)?;
        }
        validate_lambda_ratio(self.lambda_ratio)
    }

    fn tau_grid(&self) -> CliResult<Vec<f64>> {
        Ok(SweepSpec::new(Variable::Tau, 0.0, self.tau_max, self.points)?.grid())
    }
}

pub fn render_figure(figure: Figure, opts: &FigureOptions) -> CliResult<Table> {
    opts.validate()?;
    let grid = opts.tau_grid()?;
    let theta = opts.thetas[0].theta;
    let angles: Vec<String> = opts
        .thetas
        .iter()
        .map(|t| format!("theta_{} = {}", t.name, t.theta))
        .collect();

    let (columns, description): (Vec<String>, String) = match figure {
        Figure::Fig1 => {
            let mut c = vec!["tau".to_string()];
            c.extend(opts.thetas.iter().map(|t| format!("fi_{}", t.name)));
            c.push("qfi".into());
            (c, "plane-wave flavor-measurement Fisher information and QFI".into())
        }
        Figure::Fig2 => (
            cols(&["tau", "fi_flavor", "entropy_scaled"]),
            format!(
                "plane-wave flavor FI and 4x von Neumann entropy (bits), {} basis",
                opts.basis.name()
            ),
        ),
        Figure::Fig3 => {
            let mut c = vec!["tau".to_string()];
            c.extend(FIG3_RATIOS.iter().map(|(name, _)| format!("fi_lambda_{name}")));
            c.push("qfi".into());
            (c, "flavor FI for lambda/delta in {0, 0.1, 1, 10} and QFI".into())
        }
        Figure::Fig4 => (
            cols(&["tau", "fi_flavor", "log_negativity", "log_negativity_scaled"]),
            format!(
                "decoherent flavor FI, log negativity E_N and 4 E_N, lambda/delta = {}, {} basis",
                opts.lambda_ratio,
                opts.basis.name()
            ),
        ),
    };

    let rows = grid
        .par_iter()
        .map(|&tau| figure_row(figure, opts, theta, tau))
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(columns.clone()).comment(description).comment(format!(
        "tau = delta*t in [0, {}], {} points",
        opts.tau_max, opts.points
    ));
    for a in angles
        .iter()
        .take(if figure == Figure::Fig1 { angles.len() } else { 1 })
    {
        table = table.comment(a.clone());
    }
    table = table.comment(format!("columns: {}", columns.join(", ")));
    table.rows = rows;
    Ok(table)
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn figure_row(figure: Figure, opts: &FigureOptions, theta: f64, tau: f64) -> CliResult<Vec<f64>> {
    let at = |theta, lambda_ratio| {
        Evaluated::new(Point {
            theta,
            tau,
            lambda_ratio,
        })
    };
    let mut row = vec![tau];
    match figure {
        Figure::Fig1 => {
            for t in &opts.thetas {
                row.push(at(t.theta, 0.0)?.fi_flavor()?);
            }
            row.push(at(theta, 0.0)?.qfi()?);
        }
        Figure::Fig2 => {
            let e = at(theta, 0.0)?;
            row.push(e.fi_flavor()?);
            row.push(e.entropy_scaled(opts.basis)?);
        }
        Figure::Fig3 => {
            let mut qfi = 0.0;
            for (_, ratio) in FIG3_RATIOS {
                let e = at(theta, ratio)?;
                row.push(e.fi_flavor()?);
                qfi = e.qfi()?;
            }
            row.push(qfi);
        }
        Figure::Fig4 => {
            let e = at(theta, opts.lambda_ratio)?;
            let en = e.log_negativity(opts.basis)?;
            row.push(e.fi_flavor()?);
            row.push(en);
            row.push(4.0 * en);
        }
    }
    Ok(row)
}
