//! `authcode`: linear-code multi-receiver authentication at the command
//! line: code queries, the four protocol phases over plain-text files, a
//! coalition attack simulator, per-receiver security reports, and a
//! self-checking reproduction of the bundled worked example.
//!
//! Exit codes: 0 success/accept, 1 semantic failure (verification
//! rejected, self-check mismatch), 2 input error, 3 enumeration cap
//! exceeded. The default cap is 2^20 and can be overridden with `--cap`
//! or the `AUTHCODE_CAP` environment variable.

mod commands;
mod example;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use authcode::adversary::AdversaryError;
use authcode::analysis::AnalysisError;
use authcode::code::CodeError;
use authcode::matrix::MatrixError;
use authcode::scheme::SchemeError;
use authcode::DEFAULT_CAP;

#[derive(Parser)]
#[command(
    name = "authcode",
    version,
    about = "Multi-receiver message authentication over linear codes",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a code file: parameters, dual code, minimal dual codewords.
    Code {
        #[command(subcommand)]
        sub: CodeCommand,
    },
    /// Run the protocol phases over key files.
    Scheme {
        #[command(subcommand)]
        sub: SchemeCommand,
    },
    /// Simulate a coalition attack and report what the coalition learns.
    Attack(AttackArgs),
    /// Per-receiver thresholds and the bound audit for a code.
    Report {
        /// Code file.
        #[arg(long)]
        code: PathBuf,
        /// Enumeration cap (default 2^20, or AUTHCODE_CAP).
        #[arg(long)]
        cap: Option<u64>,
        /// Emit the machine-readable key=value summary only.
        #[arg(long)]
        kv: bool,
        /// Sample this many subsets per coalition size instead of the
        /// exhaustive scan (confidence, not certainty).
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for --sample.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the bundled worked example and diff it against the
    /// embedded tables. Exits 1 on any mismatch (the known-erroneous
    /// claimed-safe table is reported as a warning, not a failure).
    PaperExample,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Print q, V, k, the minimum distance and the dual minimum distance.
    Info {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Print a generator of the dual code, in code file format.
    Dual {
        #[arg(long)]
        code: PathBuf,
    },
    /// Print the dual codewords minimal with respect to a coordinate,
    /// sorted lexicographically.
    Minimal {
        #[arg(long)]
        code: PathBuf,
        /// 1-based coordinate.
        #[arg(long)]
        coord: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
}

#[derive(Subcommand)]
enum SchemeCommand {
    /// Sample a key matrix from a seed and write it as a key file.
    Keygen {
        #[arg(long)]
        code: PathBuf,
        /// Message budget M.
        #[arg(long)]
        messages: usize,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Compute B = A*G; optionally write B and per-receiver key files.
    Distribute {
        #[arg(long)]
        code: PathBuf,
        /// Key matrix file (A).
        #[arg(long)]
        keys: PathBuf,
        /// Where to write B; stdout when absent.
        #[arg(long)]
        out_b: Option<PathBuf>,
        /// Directory for per-receiver key files (receiver_<i>.key).
        #[arg(long)]
        out_keys: Option<PathBuf>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Tag a message: prints `s t_1 ... t_k`.
    Tag {
        /// Key matrix file (A).
        #[arg(long)]
        keys: PathBuf,
        /// Message (an element of F_q).
        #[arg(long)]
        message: u64,
    },
    /// Verify a tagged message; prints accept/reject per receiver and
    /// exits 0 only if every checked receiver accepts.
    Verify {
        #[arg(long)]
        code: PathBuf,
        /// Distributed key file (B); verifies at every receiver.
        #[arg(long)]
        keys: Option<PathBuf>,
        /// Single per-receiver key file.
        #[arg(long)]
        receiver_key: Option<PathBuf>,
        /// The tagged message line `s t_1 ... t_k`.
        #[arg(long)]
        tagged: String,
    },
}

#[derive(Args)]
struct AttackArgs {
    /// Scenario file (`key = value` lines); flags below override nothing
    /// and are ignored when this is given.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    code: Option<PathBuf>,
    /// Message budget M.
    #[arg(long)]
    messages: Option<usize>,
    /// Seed for the trusted authority's key matrix.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coalition member indices, comma-separated (1-based).
    #[arg(long)]
    coalition: Option<String>,
    /// Target receiver (1-based, not in the coalition).
    #[arg(long)]
    target: Option<usize>,
    /// Observed message values, comma-separated; may be empty.
    #[arg(long)]
    observed: Option<String>,
    /// The fresh message to forge.
    #[arg(long)]
    fresh: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
}

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable, or dimensionally inconsistent input (exit 2).
    Input(String),
    /// An enumeration would exceed the cap (exit 3).
    Cap(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) => m,
        }
    }
}

fn is_cap(e: &MatrixError) -> bool {
    matches!(e, MatrixError::CapExceeded { .. })
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        if is_cap(&e) {
            CliError::Cap(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Matrix(m) if is_cap(&m) => CliError::Cap(m.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::Matrix(m) if is_cap(&m) => CliError::Cap(m.to_string()),
            SchemeError::Code(c) => CliError::from(c),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AdversaryError> for CliError {
    fn from(e: AdversaryError) -> Self {
        match e {
            AdversaryError::Matrix(m) if is_cap(&m) => CliError::Cap(m.to_string()),
            AdversaryError::Scheme(s) => CliError::from(s),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            AnalysisError::Matrix(m) if is_cap(&m) => CliError::Cap(m.to_string()),
            AnalysisError::Code(c) => CliError::from(c),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<io::ParseError> for CliError {
    fn from(e: io::ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// `--cap` flag, then `AUTHCODE_CAP` env var, then the default.
fn resolve_cap(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("AUTHCODE_CAP") {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| CliError::Input(format!("AUTHCODE_CAP must be an integer, found `{raw}`"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn main() -> ExitCode {
    // exit quietly when stdout is a closed pipe (`authcode ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Code { sub } => match sub {
            CodeCommand::Info { code, cap } => {
                commands::code_info(&read_file(&code)?, resolve_cap(cap)?)
            }
            CodeCommand::Dual { code } => commands::code_dual(&read_file(&code)?),
            CodeCommand::Minimal { code, coord, cap } => {
                commands::code_minimal(&read_file(&code)?, coord, resolve_cap(cap)?)
            }
        },
        Command::Scheme { sub } => match sub {
            SchemeCommand::Keygen { code, messages, seed, out, cap } => {
                commands::scheme_keygen(&read_file(&code)?, messages, seed, out, resolve_cap(cap)?)
            }
            SchemeCommand::Distribute { code, keys, out_b, out_keys, cap } => commands::scheme_distribute(
                &read_file(&code)?,
                &read_file(&keys)?,
                out_b,
                out_keys,
                resolve_cap(cap)?,
            ),
            SchemeCommand::Tag { keys, message } => {
                commands::scheme_tag(&read_file(&keys)?, message)
            }
            SchemeCommand::Verify { code, keys, receiver_key, tagged } => {
                let keys_content = keys.as_ref().map(read_file).transpose()?;
                let receiver_content = receiver_key.as_ref().map(read_file).transpose()?;
                commands::scheme_verify(
                    &read_file(&code)?,
                    keys_content.as_deref(),
                    receiver_content.as_deref(),
                    &tagged,
                )
            }
        },
        Command::Attack(args) => {
            let cap = resolve_cap(args.cap)?;
            let scenario = if let Some(path) = &args.scenario {
                io::parse_scenario(&read_file(path)?)?
            } else {
                let code = args
                    .code
                    .clone()
                    .ok_or_else(|| CliError::Input("either --scenario or --code is required".into()))?;
                let messages = args
                    .messages
                    .ok_or_else(|| CliError::Input("--messages is required without --scenario".into()))?;
                let coalition = io::parse_index_list(
                    args.coalition
                        .as_deref()
                        .ok_or_else(|| CliError::Input("--coalition is required without --scenario".into()))?,
                )
                .map_err(CliError::Input)?;
                let target = args
                    .target
                    .ok_or_else(|| CliError::Input("--target is required without --scenario".into()))?;
                let observed = io::parse_value_list(args.observed.as_deref().unwrap_or(""))
                    .map_err(CliError::Input)?;
                let fresh = args
                    .fresh
                    .ok_or_else(|| CliError::Input("--fresh is required without --scenario".into()))?;
                io::Scenario { code, messages, seed: args.seed, coalition, target, observed, fresh }
            };
            let code_content = read_file(&scenario.code)?;
            commands::attack(&code_content, &scenario, cap)
        }
        Command::Report { code, cap, kv, sample, seed } => {
            commands::report(&read_file(&code)?, resolve_cap(cap)?, kv, sample, seed)
        }
        Command::PaperExample => example::run(),
    }
}
