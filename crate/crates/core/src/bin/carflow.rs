use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use carflow::config::{parse_config, CheckName, Experiment};
use carflow::lattice::{kernel_basis, Point};
use carflow::report::{emit_report, to_sorted_json, Format, Report};
use carflow::suite::{run_suite, SuiteOptions};
use carflow::Error;

#[derive(Parser)]
#[command(
    name = "carflow",
    version,
    about = "CAR flows of lattice shift modules: checks and reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a configuration.
    Validate(Common),
    /// Print the kernel basis of V_x on the window.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Cone element, comma separated, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        shift: Vec<i64>,
    },
    /// Symmetry classification and, when witnessed, the ψ residual.
    Symmetry(Common),
    /// Run the checks listed in the configuration.
    Suite(Common),
    /// Re-emit a saved JSON report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time per check (reports are then no longer byte-reproducible).
    #[arg(long)]
    timings: bool,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("carflow: {msg}");
    ExitCode::from(code)
}

fn load(common: &Common) -> Result<Experiment, Error> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Error::Config(format!("{}: {e}", common.config.display())))?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(tol) = common.tolerance {
        config.tolerance = tol;
    }
    config.build()
}

fn write(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), ExitCode> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| fail(2, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{}", String::from_utf8_lossy(bytes));
            Ok(())
        }
    }
}

fn emit(report: &Report, format: Format, out: &Option<PathBuf>) -> ExitCode {
    if let Err(code) = write(out, &emit_report(report, format)) {
        return code;
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate(common) => match load(&common) {
            Ok(exp) => {
                let bytes = match common.format {
                    Format::Json => to_sorted_json(&exp.config).into_bytes(),
                    Format::Text => format!(
                        "valid: {} (d = {}, {} checks)\n",
                        exp.config.name,
                        exp.cone.dim(),
                        exp.config.suite.len()
                    )
                    .into_bytes(),
                };
                match write(&common.out, &bytes) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(code) => code,
                }
            }
            Err(e) => fail(2, e),
        },
        Command::Kernel { common, shift } => {
            let exp = match load(&common) {
                Ok(exp) => exp,
                Err(e) => return fail(2, e),
            };
            let x = Point::new(shift);
            if x.dim() != exp.cone.dim() || !exp.cone.contains(&x) {
                return fail(2, format!("shift {x} is not in the cone"));
            }
            let basis = kernel_basis(&exp.module, &x, &exp.window);
            let bytes = match common.format {
                Format::Json => to_sorted_json(&json!({
                    "shift": x,
                    "window": exp.window,
                    "dimension": basis.len(),
                    "kernel": basis,
                }))
                .into_bytes(),
                Format::Text => {
                    let mut s = format!("kernel of V_{x} on the window: {} points\n", basis.len());
                    for p in &basis {
                        s.push_str(&format!("  {p}\n"));
                    }
                    s.into_bytes()
                }
            };
            match write(&common.out, &bytes) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => code,
            }
        }
        Command::Symmetry(common) => match load(&common) {
            Ok(mut exp) => {
                exp.config.suite = vec![
                    CheckName::SymmetryClassification,
                    CheckName::SymmetryWitness,
                ];
                let report = run_suite(
                    &exp,
                    SuiteOptions {
                        timings: common.timings,
                    },
                );
                emit(&report, common.format, &common.out)
            }
            Err(e) => fail(2, e),
        },
        Command::Suite(common) => match load(&common) {
            Ok(exp) => {
                let report = run_suite(
                    &exp,
                    SuiteOptions {
                        timings: common.timings,
                    },
                );
                emit(&report, common.format, &common.out)
            }
            Err(e) => fail(2, e),
        },
        Command::Report { input, format, out } => {
            let text = match fs::read_to_string(&input) {
                Ok(t) => t,
                Err(e) => return fail(2, format!("{}: {e}", input.display())),
            };
            match Report::from_json(&text) {
                Ok(report) => emit(&report, format, &out),
                Err(e) => fail(2, e),
            }
        }
    }
}
