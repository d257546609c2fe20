//! `circuflow` command-line tool.
//!
//! Exit codes: 0 success (including warnings), 2 validation failure,
//! 3 computation error, 4 I/O or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circuflow::account::DEFAULT_BALANCE_TOLERANCE;
use circuflow::document::{parse_account_with_default_tolerance, parse_economy, parse_scenario};
use circuflow::report::{
    metric_notes, render_attribution, render_comparison, render_metrics, render_validation, svg,
    Baseline, RenderFormat, RenderSpec,
};
use circuflow::{
    apply_scenario, attribute_value, metric_suite, EconomicAccount, Error, ErrorKind,
    MaterialFlowAccount, ValidationStatus,
};

const TOLERANCE_ENV: &str = "CIRCUFLOW_TOLERANCE";

#[derive(Parser)]
#[command(
    name = "circuflow",
    version,
    about = "Material flow circularity and GDP attribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an account's category sums and mass balance.
    Validate { account: PathBuf },
    /// Print the circularity metric family for an account.
    Metrics {
        account: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Attribute GDP to flow categories and legacy stocks.
    Valuemap {
        account: PathBuf,
        economy: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Compare baseline and scenario metrics and attribution.
    Scenario {
        account: PathBuf,
        economy: PathBuf,
        scenario: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
}

#[derive(Args)]
struct RenderArgs {
    /// Output format: plain, markdown, kv or svg.
    #[arg(long, default_value = "plain")]
    format: String,
    /// Decimal places for percentages.
    #[arg(long = "round", default_value_t = 1)]
    round: u32,
    /// Also write an SVG chart to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Leave out provenance footnotes.
    #[arg(long)]
    no_footnotes: bool,
}

impl RenderArgs {
    fn spec(&self) -> Result<RenderSpec, Failure> {
        Ok(RenderSpec {
            format: self.format.parse::<RenderFormat>()?,
            rounding: self.round,
            include_provenance_footnotes: !self.no_footnotes,
        })
    }
}

/// A failed command with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Validation => 2,
            ErrorKind::Computation => 3,
            ErrorKind::Parse => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 4,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn with_path(path: &Path, f: Failure) -> Failure {
    Failure {
        message: format!("{}: {}", path.display(), f.message),
        ..f
    }
}

fn default_tolerance() -> Result<f64, Failure> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && (0.0..=1.0).contains(t))
            .ok_or_else(|| Failure {
                code: 4,
                message: format!("{TOLERANCE_ENV}: expected a fraction in [0, 1], got `{raw}`"),
            }),
        Err(_) => Ok(DEFAULT_BALANCE_TOLERANCE),
    }
}

fn load_account(path: &Path) -> Result<MaterialFlowAccount, Failure> {
    let src = read(path)?;
    parse_account_with_default_tolerance(&src, default_tolerance()?)
        .map_err(|e| with_path(path, e.into()))
}

fn load_economy(path: &Path) -> Result<EconomicAccount, Failure> {
    let src = read(path)?;
    parse_economy(&src).map_err(|e| with_path(path, e.into()))
}

/// Validates and reports failures; warnings go to stderr.
fn require_valid(account: &MaterialFlowAccount) -> Result<(), Failure> {
    let outcome = account.validate();
    match outcome.status {
        ValidationStatus::Fail => Err(Failure {
            code: 2,
            message: render_validation(&outcome, account),
        }),
        ValidationStatus::PassWithWarning => {
            eprintln!(
                "warning: mass residual {:.1} Gt ({:.1}% of input) within tolerance",
                outcome.residual,
                outcome.residual_fraction * 100.0
            );
            Ok(())
        }
        ValidationStatus::Pass => Ok(()),
    }
}

fn write_svg(path: &Option<PathBuf>, content: impl FnOnce() -> String) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, content()).map_err(|e| io_failure(p, e))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Validate { account } => {
            let acct = load_account(&account)?;
            let outcome = acct.validate();
            let text = render_validation(&outcome, &acct);
            match outcome.status {
                ValidationStatus::Fail => {
                    print!("{text}");
                    Err(Failure {
                        code: 2,
                        message: format!("{}: account fails validation", account.display()),
                    })
                }
                ValidationStatus::PassWithWarning => {
                    eprintln!("warning: mass residual is non-zero but within tolerance");
                    Ok(text)
                }
                ValidationStatus::Pass => Ok(text),
            }
        }
        Command::Metrics { account, render } => {
            let spec = render.spec()?;
            let acct = load_account(&account)?;
            require_valid(&acct)?;
            let report = metric_suite(&acct)?;
            write_svg(&render.svg, || {
                svg::waterfall(&report, spec.rounding, &metric_notes(&spec))
            })?;
            Ok(render_metrics(&report, &spec))
        }
        Command::Valuemap {
            account,
            economy,
            render,
        } => {
            let spec = render.spec()?;
            let acct = load_account(&account)?;
            require_valid(&acct)?;
            let econ = load_economy(&economy)?;
            let attribution = attribute_value(&econ)?;
            write_svg(&render.svg, || {
                render_attribution(&attribution, &econ, &spec.with_format(RenderFormat::Svg))
            })?;
            Ok(render_attribution(&attribution, &econ, &spec))
        }
        Command::Scenario {
            account,
            economy,
            scenario,
            render,
        } => {
            let spec = render.spec()?;
            let acct = load_account(&account)?;
            require_valid(&acct)?;
            let econ = load_economy(&economy)?;
            let scen =
                parse_scenario(&read(&scenario)?).map_err(|e| with_path(&scenario, e.into()))?;
            let report = metric_suite(&acct)?;
            let attribution = attribute_value(&econ)?;
            let outcome = apply_scenario(&acct, &econ, &scen)?;
            write_svg(&render.svg, || {
                svg::waterfall(&outcome.report, spec.rounding, &outcome.notes)
            })?;
            if spec.format == RenderFormat::Svg {
                return Ok(svg::waterfall(
                    &outcome.report,
                    spec.rounding,
                    &outcome.notes,
                ));
            }
            let baseline = Baseline {
                account: &acct,
                report: &report,
                attribution: &attribution,
            };
            Ok(render_comparison(&scen.name, &baseline, &outcome, &spec))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}
