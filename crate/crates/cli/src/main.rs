use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nuqet_cli::angle::parse_angle;
use nuqet_cli::config::{Config, Preset};
use nuqet_cli::figure::{render_figure, Figure, FigureOptions, NamedTheta, DEFAULT_POINTS, DEFAULT_TAU_MAX};
use nuqet_cli::model::{effective_lambda, validate_tau, Basis, Model, Point};
use nuqet_cli::report::{build_report, ReportFormat};
use nuqet_cli::selfcheck::{render_table, run_selfcheck, SelfcheckOptions, DEFAULT_SEED};
use nuqet_cli::sweep::{run_sweep, Quantity, SweepSpec, Variable};
use nuqet_cli::table::{emit, Format};
use nuqet_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "nuqet", version, about = "Quantum estimation of the neutrino mixing angle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// QFI, SLD, Fisher information and Cramér–Rao bounds at one point.
    Report {
        #[command(flatten)]
        common: Common,
        /// Number of repeated measurements M.
        #[arg(long, default_value_t = 1)]
        measurements: u64,
        #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
        format: ReportFormatArg,
    },
    /// Regenerate figure data as CSV.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
        #[command(flatten)]
        common: Common,
        /// Largest τ of the grid.
        #[arg(long, default_value_t = DEFAULT_TAU_MAX)]
        tau_max: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Evaluate quantities along a one-dimensional grid.
    Sweep {
        #[arg(long, value_enum)]
        var: VariableArg,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, allow_hyphen_values = true)]
        stop: String,
        #[arg(long)]
        points: usize,
        /// Comma-separated subset of: qfi, fi_flavor, fi_mass, entropy_scaled,
        /// log_negativity, purity, survival_probability.
        #[arg(long, default_value = "qfi,fi_flavor,fi_mass")]
        quantities: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Compare numerical routines against closed forms.
    Selfcheck {
        /// Shift θ on the numerical side by this amount.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb: f64,
        /// Seed for the random-measurement check.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Mixing angle in radians or as an expression such as `pi/8`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// key = value file defining `theta_experimental_rad`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// τ = δt.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// λ/δ.
    #[arg(long, allow_hyphen_values = true)]
    lambda_ratio: Option<f64>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum, default_value_t = BasisArg::Flavor)]
    basis: BasisArg,
    /// Output path; `-` or absent for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Pi8,
    Experimental,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    PlaneWave,
    Decoherence,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Mass,
    Flavor,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariableArg {
    Tau,
    Theta,
    #[value(name = "lambda_ratio", alias = "lambda-ratio")]
    LambdaRatio,
}

impl Common {
    fn config(&self) -> CliResult<Option<Config>> {
        self.config.as_deref().map(Config::load).transpose()
    }

    fn preset(&self) -> Option<Preset> {
        self.preset.map(|p| match p {
            PresetArg::Pi8 => Preset::Pi8,
            PresetArg::Experimental => Preset::Experimental,
        })
    }

    /// Explicit `--theta` wins over `--preset`; the default is π/8.
    fn theta(&self) -> CliResult<NamedTheta> {
        if self.theta.is_some() && self.preset.is_some() {
            return Err(CliError::validation("give either --theta or --preset, not both"));
        }
        match (&self.theta, self.preset()) {
            (Some(text), _) => Ok(NamedTheta {
                name: "theta".into(),
                theta: parse_angle(text)?,
            }),
            (None, preset) => {
                let preset = preset.unwrap_or(Preset::Pi8);
                Ok(NamedTheta {
                    name: preset.name().into(),
                    theta: preset.resolve(self.config()?.as_ref())?,
                })
            }
        }
    }

    fn model(&self) -> Option<Model> {
        self.model.map(|m| match m {
            ModelArg::PlaneWave => Model::PlaneWave,
            ModelArg::Decoherence => Model::Decoherence,
        })
    }

    fn basis(&self) -> Basis {
        match self.basis {
            BasisArg::Mass => Basis::Mass,
            BasisArg::Flavor => Basis::Flavor,
        }
    }

    fn tau(&self) -> CliResult<f64> {
        let tau = self.tau.unwrap_or(0.0);
        validate_tau(tau)?;
        Ok(tau)
    }
}

fn format(f: FormatArg) -> Format {
    match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Report {
            common,
            measurements,
            format,
        } => {
            let (model, lambda_ratio) = effective_lambda(common.model(), common.lambda_ratio)?;
            let point = Point {
                theta: common.theta()?.theta,
                tau: common.tau()?,
                lambda_ratio,
            };
            let view = build_report(model, point, measurements)?;
            let format = match format {
                ReportFormatArg::Text => ReportFormat::Text,
                ReportFormatArg::Csv => ReportFormat::Csv,
                ReportFormatArg::Json => ReportFormat::Json,
            };
            emit(&view.render(format), common.out.as_deref())
        }
        Command::Figure {
            which,
            common,
            tau_max,
            points,
            format: fmt,
        } => {
            let figure = match which {
                FigureArg::Fig1 => Figure::Fig1,
                FigureArg::Fig2 => Figure::Fig2,
                FigureArg::Fig3 => Figure::Fig3,
                FigureArg::Fig4 => Figure::Fig4,
            };
            if common.tau.is_some() {
                return Err(CliError::validation(
                    "figures sweep tau; use --tau-max instead of --tau",
                ));
            }
            let thetas = figure_thetas(figure, &common)?;
            let lambda_ratio = match figure {
                Figure::Fig4 => effective_lambda(Some(Model::Decoherence), common.lambda_ratio)?.1,
                _ if common.lambda_ratio.is_some() => {
                    return Err(CliError::validation("--lambda-ratio only applies to fig4"))
                }
                _ => 0.0,
            };
            let opts = FigureOptions {
                lambda_ratio,
                basis: common.basis(),
                tau_max,
                points,
                ..FigureOptions::new(thetas)
            };
            let table = render_figure(figure, &opts)?;
            emit(&table.render(format(fmt)), common.out.as_deref())
        }
        Command::Sweep {
            var,
            start,
            stop,
            points,
            quantities,
            common,
            format: fmt,
        } => {
            let variable = match var {
                VariableArg::Tau => Variable::Tau,
                VariableArg::Theta => Variable::Theta,
                VariableArg::LambdaRatio => Variable::LambdaRatio,
            };
            let spec = SweepSpec::new(variable, parse_angle(&start)?, parse_angle(&stop)?, points)?;
            let quantities = quantities
                .split(',')
                .map(|q| q.trim().parse::<Quantity>())
                .collect::<CliResult<Vec<_>>>()?;
            let (_, lambda_ratio) = match variable {
                Variable::LambdaRatio => (Model::Decoherence, 0.0),
                _ => effective_lambda(common.model(), common.lambda_ratio)?,
            };
            let theta = match variable {
                // any in-range placeholder; every grid point overrides it
                Variable::Theta if common.theta.is_none() && common.preset.is_none() => 0.5,
                _ => common.theta()?.theta,
            };
            let base = Point {
                theta,
                tau: common.tau()?,
                lambda_ratio,
            };
            let table = run_sweep(&spec, base, common.basis(), &quantities)?;
            emit(&table.render(format(fmt)), common.out.as_deref())
        }
        Command::Selfcheck { perturb, seed } => {
            if !perturb.is_finite() {
                return Err(CliError::validation("perturb must be finite"));
            }
            let results = run_selfcheck(SelfcheckOptions { perturb, seed })?;
            print!("{}", render_table(&results));
            let failed = results.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed { failed });
            }
            Ok(())
        }
    }
}

/// Fig1 without `--theta`/`--preset` plots π/8 and, if configured, the
/// experimental angle side by side.
fn figure_thetas(figure: Figure, common: &Common) -> CliResult<Vec<NamedTheta>> {
    let config = common.config()?;
    if figure == Figure::Fig1 && common.theta.is_none() && common.preset.is_none() {
        let mut thetas = vec![NamedTheta {
            name: Preset::Pi8.name().into(),
            theta: Preset::Pi8.resolve(None)?,
        }];
        if let Some(theta) = config.and_then(|c| c.theta_experimental) {
            thetas.push(NamedTheta {
                name: Preset::Experimental.name().into(),
                theta,
            });
        }
        return Ok(thetas);
    }
    Ok(vec![common.theta()?])
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
