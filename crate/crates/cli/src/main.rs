use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pbox_core::report::{self, Options};
use pbox_core::{BoxParams, Error, ExpectationError};

/// Spectral analysis of polynomial states in a one-dimensional box.
#[derive(Parser, Debug)]
#[command(name = "pbox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Domain report, every ⟨H⟩ and ⟨H²⟩ path, ΔH and the paradox verdict.
    Analyze {
        state: String,
        #[command(flatten)]
        common: Common,
        /// Spectral bracket width above which a warning is printed.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Also show the variance radicand built from the naive ⟨ψ, H²ψ⟩.
        #[arg(long)]
        force_naive: bool,
    },
    /// Sine-mode coefficients c_N.
    Coeffs {
        state: String,
        #[command(flatten)]
        common: Common,
    },
    /// Partial sums of Σ E_N^k c_N² with certified brackets.
    Converge {
        state: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Largest truncation; defaults to --modes.
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, default_value_t = 1)]
        step: u64,
    },
    /// Naive vs first-form ⟨H²⟩ and the endpoint term between them.
    Paradox {
        state: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 1000)]
    modes: u64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

const USAGE: u8 = 1;
const DOMAIN: u8 = 2;

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Expectation(ExpectationError::DomainViolation(_)) => DOMAIN,
            _ => USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn params(c: &Common) -> Result<BoxParams, Failure> {
    BoxParams::new(c.hbar, c.mass, c.length).map_err(|e| Failure(USAGE, e.to_string()))
}

fn no_csv(c: &Common, command: &str) -> Result<(), Failure> {
    if c.format == Format::Csv {
        return Err(Failure(USAGE, format!("--format csv is only available for converge and coeffs, not {command}")));
    }
    Ok(())
}

/// Prints the document; the returned code is nonzero when the state is outside D(H).
fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { state, common, tol, force_naive } => {
            no_csv(&common, "analyze")?;
            let opts = Options { modes: common.modes, tol, force_naive };
            let r = report::analyze(&state, params(&common)?, &opts)?;
            match common.format {
                Format::Json => println!("{}", report::to_json(&r)),
                _ => print!("{}", r.to_text()),
            }
            Ok(if r.domain.in_domain_h { 0 } else { DOMAIN })
        }
        Command::Coeffs { state, common } => {
            let r = report::coeffs(&state, params(&common)?, common.modes)?;
            match common.format {
                Format::Json => println!("{}", report::to_json(&r)),
                Format::Csv => print!("{}", r.to_csv()),
                Format::Text => print!("{}", r.to_text()),
            }
            Ok(0)
        }
        Command::Converge { state, common, k, max, step } => {
            let t = report::converge(&state, params(&common)?, k, max.unwrap_or(common.modes), step)?;
            match common.format {
                Format::Json => println!("{}", report::to_json(&t)),
                Format::Csv => print!("{}", t.to_csv()),
                Format::Text => print!("{}", t.to_text()),
            }
            Ok(if t.in_domain_h { 0 } else { DOMAIN })
        }
        Command::Paradox { state, common } => {
            no_csv(&common, "paradox")?;
            let d = report::paradox(&state, params(&common)?, common.modes)?;
            match common.format {
                Format::Json => println!("{}", report::to_json(&d)),
                _ => print!("{}", d.to_text()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
