//! `spinfactor`: command-line access to the spin factor library.
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 input parse failure.

mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use spinfactor::basis::{verify_spin_grid, verify_tcar, SpinGrid4, VerificationReport};
use spinfactor::checks::run_checks;
use spinfactor::geometry::{flow, sample_section_d1, sample_section_dual, FlowConfig};
use spinfactor::lorentz::{exp_generator, induced_spacetime_transform, LorentzGenerator, RepTag};
use spinfactor::tripotent::{classify, singular_decomposition};
use spinfactor::{SpinError, SpinVector, Tolerance};

#[derive(Parser)]
#[command(name = "spinfactor", version, about = "Spin factor computations")]
struct Cli {
    /// Absolute comparison tolerance.
    #[arg(long, global = true, default_value_t = spinfactor::config::DEFAULT_EPS)]
    tol: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, env = "SPINFACTOR_SEED", default_value_t = 0)]
    seed: u64,
    /// Trial count override for `check`.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output format; sections default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Speed of light used by the spacetime embedding.
    #[arg(long = "c", global = true, default_value_t = spinfactor::lorentz::DEFAULT_LIGHT_SPEED)]
    c: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Singular decomposition of a vector given as JSON (`-` reads stdin).
    Decompose { vector: String },
    /// Tripotent class of a vector: minimal, maximal or not-tripotent.
    Classify { vector: String },
    /// Verify a TCAR basis or a spin grid read from a JSON file (`-` for stdin).
    Verify { kind: VerifyKind, file: PathBuf },
    /// Matrix of exp(φ X) for a generator X of a Lorentz representation.
    Lorentz {
        rep: String,
        generator: String,
        #[arg(allow_negative_numbers = true)]
        phi: f64,
        /// Emit the induced 4x4 transform of (ct, x, y, z) instead.
        #[arg(long)]
        spacetime: bool,
    },
    /// Sample a three-dimensional section of a unit ball.
    Section { kind: SectionArg, resolution: usize },
    /// Endpoint of the flow of ξ_a started at z after time τ.
    Flow {
        a: String,
        z: String,
        #[arg(allow_negative_numbers = true)]
        tau: f64,
    },
    /// Run the seeded property suites, or one of them by name.
    Check { suite: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Tcar,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionArg {
    D1,
    Dual,
}

enum Failure {
    Parse(String),
    Domain(String),
}

impl From<SpinError> for Failure {
    fn from(e: SpinError) -> Self {
        match e {
            SpinError::Parse(m) => Failure::Parse(m),
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// Output and whether the command's verdict was a pass.
struct Outcome {
    text: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let tol = Tolerance::new(cli.tol)
        .ok_or_else(|| Failure::Parse(format!("--tol must be positive, got {}", cli.tol)))?;
    if !(cli.c.is_finite() && cli.c > 0.0) {
        return Err(Failure::Parse(format!(
            "--c must be positive, got {}",
            cli.c
        )));
    }
    let format = cli.format;
    let json_only = |name: &str| {
        if format == Some(Format::Csv) {
            Err(Failure::Parse(format!("{name} has no csv output")))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::Decompose { vector } => {
            json_only("decompose")?;
            let a: SpinVector = parse_json(&read_arg(vector)?)?;
            ok_json(&singular_decomposition(&a, tol)?)
        }
        Command::Classify { vector } => {
            json_only("classify")?;
            let a: SpinVector = parse_json(&read_arg(vector)?)?;
            let class = classify(&a, tol)?;
            ok_json(&serde_json::json!({ "class": class.name() }))
        }
        Command::Verify { kind, file } => {
            json_only("verify")?;
            let text = read_path(file)?;
            let report: VerificationReport = match kind {
                VerifyKind::Tcar => {
                    let vectors: Vec<SpinVector> = parse_json(&text)?;
                    verify_tcar(&vectors, tol)?
                }
                VerifyKind::Grid => verify_spin_grid(&parse_json::<SpinGrid4>(&text)?, tol),
            };
            Ok(Outcome {
                pass: report.pass,
                text: render(&report)?,
            })
        }
        Command::Lorentz {
            rep,
            generator,
            phi,
            spacetime,
        } => {
            let rep = RepTag::parse(rep)
                .ok_or_else(|| Failure::Parse(format!("unknown representation '{rep}'")))?;
            let g = LorentzGenerator::parse(generator)
                .ok_or_else(|| Failure::Parse(format!("unknown generator '{generator}'")))?;
            if !phi.is_finite() {
                return Err(Failure::Parse("φ must be finite".into()));
            }
            let t = exp_generator(rep, g, *phi);
            if !spacetime {
                json_only("lorentz")?;
                return ok_json(&t.to_json());
            }
            if rep != RepTag::Spin1 {
                return Err(Failure::Domain(
                    "--spacetime needs the spin1 representation".into(),
                ));
            }
            let m = induced_spacetime_transform(&t, cli.c, tol)?;
            let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
            if format == Some(Format::Csv) {
                let lines: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| format!("{x:.16e}"))
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                return Ok(Outcome {
                    text: lines.join("\n") + "\n",
                    pass: true,
                });
            }
            ok_json(&rows)
        }
        Command::Section { kind, resolution } => {
            let section = match kind {
                SectionArg::D1 => sample_section_d1(*resolution)?,
                SectionArg::Dual => sample_section_dual(*resolution)?,
            };
            match format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(Outcome {
                    text: section.to_csv()?,
                    pass: true,
                }),
                Format::Json => ok_json(&section),
            }
        }
        Command::Flow { a, z, tau } => {
            json_only("flow")?;
            let a: SpinVector = parse_json(&read_arg(a)?)?;
            let z: SpinVector = parse_json(&read_arg(z)?)?;
            let cfg = FlowConfig {
                tolerance: tol,
                ..FlowConfig::default()
            };
            ok_json(&flow(&a, &z, *tau, &cfg)?)
        }
        Command::Check { suite } => {
            json_only("check")?;
            let report = run_checks(suite.as_deref(), cli.seed, cli.trials, tol)?;
            Ok(Outcome {
                pass: report.pass,
                text: render(&report)?,
            })
        }
    }
}

fn render<T: Serialize>(value: &T) -> Result<String, Failure> {
    output::to_json(value).map_err(|e| Failure::Domain(format!("serialization failed: {e}")))
}

fn ok_json<T: Serialize>(value: &T) -> Result<Outcome, Failure> {
    Ok(Outcome {
        text: render(value)?,
        pass: true,
    })
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("invalid input: {e}")))
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Parse(format!("reading stdin: {e}")))?;
    Ok(s)
}

/// Inline JSON, or stdin for `-`.
fn read_arg(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        read_stdin()
    } else {
        Ok(arg.to_string())
    }
}

fn read_path(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        return read_stdin();
    }
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("reading {}: {e}", path.display())))
}
