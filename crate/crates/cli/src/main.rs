use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::Value;
use toepkern_cli::commands::{self, CliError, FrostmanArgs, Mode, Options};
use toepkern_cli::expr::{parse_complex, parse_complex_list};

/// Kernels of Toeplitz operators with rational symbols.
#[derive(Parser, Debug)]
#[command(name = "toepkern", version)]
struct Cli {
    /// Relative rank tolerance used by the truncation oracle.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Circle samples for Gram and isometry checks.
    #[arg(long, global = true, default_value_t = 2048)]
    samples: usize,
    /// Emit compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the probe points that pin unimodular constants.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel of T_g: dimension, representation, containing model space.
    Kernel {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Minimal model space containing ker T_g.
    Minmodel {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Certified maximal function of ker T_g.
    Maxfunc {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Comma-separated zeros the maximal function must vanish at.
        #[arg(long, allow_hyphen_values = true)]
        vanish: Option<String>,
    },
    /// ker T_{conj(theta) B} as a multiplier times a model space.
    Represent {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Comma-separated zeros of B.
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "isometric")]
        mode: Mode,
    },
    /// Kernel of T_{conj(theta) - h} and its shifted representations.
    Frostman {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long = "C", allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Re-check a stored result against the truncated Toeplitz oracle.
    Verify {
        file: PathBuf,
        /// Truncation size; chosen from the symbol's decay when omitted.
        #[arg(long = "oracle-size")]
        oracle_size: Option<usize>,
    },
}

fn complex(arg: &'static str, s: &str) -> Result<Complex64, CliError> {
    parse_complex(s).map_err(|error| CliError::Parse { arg, error })
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let opts = Options { tol: cli.tol, samples: cli.samples, seed: cli.seed };
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Input("--tol must lie in (0, 1)".into()));
    }
    if cli.samples < 16 {
        return Err(CliError::Input("--samples must be at least 16".into()));
    }
    match &cli.command {
        Command::Kernel { expr } => commands::kernel(expr, &opts),
        Command::Minmodel { expr } => commands::minmodel(expr, &opts),
        Command::Maxfunc { expr, vanish } => {
            let lams = match vanish {
                Some(v) => parse_complex_list(v).map_err(|error| CliError::Parse { arg: "vanish", error })?,
                None => Vec::new(),
            };
            commands::maxfunc(expr, &lams, &opts)
        }
        Command::Represent { theta, b, mode } => {
            let lams = parse_complex_list(b).map_err(|error| CliError::Parse { arg: "B", error })?;
            commands::represent(theta, &lams, *mode, &opts)
        }
        Command::Frostman { theta, h, c, p, alpha } => {
            let args = FrostmanArgs {
                theta,
                h: h.as_deref(),
                c: c.as_deref().map(|s| complex("C", s)).transpose()?,
                p: p.as_deref().map(|s| complex("p", s)).transpose()?,
                alpha: alpha.as_deref(),
            };
            commands::frostman(&args, &opts)
        }
        Command::Verify { file, oracle_size } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{} is not JSON: {e}", file.display())))?;
            if oracle_size.is_some_and(|m| !(4..=2048).contains(&m)) {
                return Err(CliError::Input("--oracle-size must lie in 4..=2048".into()));
            }
            commands::verify(&doc, *oracle_size, &opts)
        }
    }
}

fn emit(v: &Value, compact: bool, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = if compact { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) }.expect("serializable");
    match out {
        Some(path) => std::fs::write(path, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (value, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(e) => {
            eprintln!("toepkern: {e}");
            (e.to_json(), e.exit_code())
        }
    };
    if let Err(e) = emit(&value, cli.json, cli.out.as_ref()) {
        eprintln!("toepkern: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
