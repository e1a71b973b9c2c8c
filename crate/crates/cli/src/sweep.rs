//! One-dimensional parameter sweeps evaluated in parallel.

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::model::{Basis, Evaluated, Point};
use crate::table::Table;

pub const MAX_POINTS: usize = 1_000_000;
/// Slack allowed when checking `fi ≤ qfi`.
pub const FI_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Tau,
    Theta,
    LambdaRatio,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Self::Tau => "tau",
            Self::Theta => "theta",
            Self::LambdaRatio => "lambda_ratio",
        }
    }
}

impl FromStr for Variable {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "tau" => Ok(Self::Tau),
            "theta" => Ok(Self::Theta),
            "lambda_ratio" | "lambda-ratio" => Ok(Self::LambdaRatio),
            _ => Err(CliError::validation(format!("unknown sweep variable `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Qfi,
    FiFlavor,
    FiMass,
    EntropyScaled,
    LogNegativity,
    Purity,
    SurvivalProbability,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Self::Qfi,
        Self::FiFlavor,
        Self::FiMass,
        Self::EntropyScaled,
        Self::LogNegativity,
        Self::Purity,
        Self::SurvivalProbability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Qfi => "qfi",
            Self::FiFlavor => "fi_flavor",
            Self::FiMass => "fi_mass",
            Self::EntropyScaled => "entropy_scaled",
            Self::LogNegativity => "log_negativity",
            Self::Purity => "purity",
            Self::SurvivalProbability => "survival_probability",
        }
    }

    fn evaluate(self, e: &Evaluated, basis: Basis) -> CliResult<f64> {
        match self {
            Self::Qfi => e.qfi(),
            Self::FiFlavor => e.fi_flavor(),
            Self::FiMass => e.fi_mass(),
            Self::EntropyScaled => e.entropy_scaled(basis),
            Self::LogNegativity => e.log_negativity(basis),
            Self::Purity => Ok(e.purity()),
            Self::SurvivalProbability => e.survival_probability(),
        }
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| CliError::validation(format!("unknown quantity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn new(variable: Variable, start: f64, stop: f64, points: usize) -> CliResult<Self> {
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(CliError::validation(format!(
                "sweep needs start < stop, got [{start}, {stop}]"
            )));
        }
        if !(2..=MAX_POINTS).contains(&points) {
            return Err(CliError::validation(format!(
                "points must lie in 2..={MAX_POINTS}, got {points}"
            )));
        }
        let in_range = match variable {
            Variable::Theta => start > 0.0 && stop < FRAC_PI_2,
            Variable::Tau | Variable::LambdaRatio => start >= 0.0,
        };
        if !in_range {
            return Err(CliError::validation(format!(
                "sweep range [{start}, {stop}] outside the domain of {}",
                variable.name()
            )));
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
        })
    }

    /// Evenly spaced grid; the last point is exactly `stop`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Evaluates `quantities` at every grid point, starting from `base`.
///
/// Rows come back in grid order regardless of worker scheduling.
pub fn run_sweep(spec: &SweepSpec, base: Point, basis: Basis, quantities: &[Quantity]) -> CliResult<Table> {
    if quantities.is_empty() {
        return Err(CliError::validation("no quantities requested"));
    }
    let rows = spec
        .grid()
        .par_iter()
        .map(|&x| {
            let point = match spec.variable {
                Variable::Tau => Point { tau: x, ..base },
                Variable::Theta => Point { theta: x, ..base },
                Variable::LambdaRatio => Point {
                    lambda_ratio: x,
                    ..base
                },
            };
            let e = Evaluated::new(point)?;
            let mut row = Vec::with_capacity(quantities.len() + 1);
            row.push(x);
            for q in quantities {
                row.push(q.evaluate(&e, basis)?);
            }
            check_record(&e, quantities, &row[1..])?;
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut columns = vec![spec.variable.name().to_string()];
    columns.extend(quantities.iter().map(|q| q.name().to_string()));
    let mut table = Table::new(columns)
        .comment(format!(
            "sweep over {} in [{}, {}], {} points",
            spec.variable.name(),
            spec.start,
            spec.stop,
            spec.points
        ))
        .comment(format!(
            "theta = {}, tau = {}, lambda_ratio = {}, basis = {}",
            base.theta,
            base.tau,
            base.lambda_ratio,
            basis.name()
        ));
    table.rows = rows;
    Ok(table)
}

fn check_record(e: &Evaluated, quantities: &[Quantity], values: &[f64]) -> CliResult<()> {
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Library(nuqet::Error::DomainError(*bad)));
    }
    let qfi = match quantities.iter().position(|q| *q == Quantity::Qfi) {
        Some(k) => values[k],
        None if quantities
            .iter()
            .any(|q| matches!(q, Quantity::FiFlavor | Quantity::FiMass)) =>
        {
            e.qfi()?
        }
        None => return Ok(()),
    };
    for (q, v) in quantities.iter().zip(values) {
        if matches!(q, Quantity::FiFlavor | Quantity::FiMass) && *v > qfi + FI_SLACK {
            return Err(CliError::ChecksFailed { failed: 1 });
        }
    }
    Ok(())
}
