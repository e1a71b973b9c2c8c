//! Single-point estimation report.

use nuqet::neutrino::{flavor_povm, mass_povm};
use nuqet::qet::{eigenprojector_povm, estimate, EstimationReport};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::model::{Evaluated, Model, Point};
use crate::table::format_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementView {
    pub name: String,
    pub fi: f64,
    /// Absent when the measurement carries no information.
    pub cramer_rao: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportView {
    pub model: &'static str,
    pub theta: f64,
    pub tau: f64,
    pub lambda_ratio: f64,
    pub measurements_count: u64,
    pub qfi: f64,
    pub quantum_cramer_rao: f64,
    /// Row-major `[re, im]` pairs of the SLD in the mass basis.
    pub sld: Vec<Vec<[f64; 2]>>,
    pub measurements: Vec<MeasurementView>,
}

impl ReportView {
    fn from_report(model: Model, point: Point, report: &EstimationReport) -> Self {
        let dim = report.sld.dim();
        let sld = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| [report.sld[(i, j)].re, report.sld[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            model: model.name(),
            theta: point.theta,
            tau: point.tau,
            lambda_ratio: point.lambda_ratio,
            measurements_count: report.measurement_count,
            qfi: report.qfi,
            quantum_cramer_rao: report.cramer_rao,
            sld,
            measurements: report
                .per_povm
                .iter()
                .map(|p| MeasurementView {
                    name: p.label.clone(),
                    fi: p.fi,
                    cramer_rao: p.cramer_rao,
                })
                .collect(),
        }
    }

    pub fn fi(&self, name: &str) -> Option<f64> {
        self.measurements.iter().find(|m| m.name == name).map(|m| m.fi)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            ReportFormat::Csv => {
                let mut out = String::from("quantity,value\n");
                let mut line = |k: &str, v: f64| out.push_str(&format!("{k},{}\n", format_number(v)));
                line("theta", self.theta);
                line("tau", self.tau);
                line("lambda_ratio", self.lambda_ratio);
                line("qfi", self.qfi);
                line("quantum_cramer_rao", self.quantum_cramer_rao);
                for m in &self.measurements {
                    line(&format!("fi_{}", m.name), m.fi);
                    line(&format!("cramer_rao_{}", m.name), m.cramer_rao.unwrap_or(f64::INFINITY));
                }
                out
            }
            ReportFormat::Text => {
                let mut out = format!(
                    "model        {}\ntheta        {}\ntau          {}\nlambda/delta {}\nmeasurements {}\n\n",
                    self.model, self.theta, self.tau, self.lambda_ratio, self.measurements_count
                );
                out.push_str(&format!("QFI                 {:.12}\n", self.qfi));
                out.push_str(&format!(
                    "quantum CR bound    {:.12e}\n\nSLD\n",
                    self.quantum_cramer_rao
                ));
                for row in &self.sld {
                    let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:+.9} {im:+.9}i")).collect();
                    out.push_str(&format!("  [{}]\n", cells.join(", ")));
                }
                out.push_str("\nmeasurement   FI                CR bound\n");
                for m in &self.measurements {
                    let bound = m.cramer_rao.map_or("inf".to_string(), |b| format!("{b:.12e}"));
                    out.push_str(&format!("{:<13} {:<17.12} {}\n", m.name, m.fi, bound));
                }
                out
            }
        }
    }
}

/// FI of the flavor, mass and SLD-eigenbasis measurements with their bounds.
pub fn build_report(model: Model, point: Point, measurements: u64) -> CliResult<ReportView> {
    if measurements == 0 {
        return Err(CliError::validation("measurements must be at least 1"));
    }
    let e = Evaluated::new(point)?;
    let flavor = flavor_povm(point.theta);
    let mass = mass_povm();
    let optimal = eigenprojector_povm(&e.sld)?;
    let report = estimate(
        point.theta,
        &e.rho,
        &e.drho,
        &[("flavor", &flavor), ("mass", &mass), ("optimal", &optimal)],
        measurements,
    )?;
    Ok(ReportView::from_report(model, point, &report))
}
