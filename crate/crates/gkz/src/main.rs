use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gkz::cli::{self, Command, Format, Options};
use gkz::error::GkzError;
use gkz::rational::{self, Q};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Triangulate,
    Cone,
    Volume,
    Exponents,
    Series,
    Verify,
    Nilsson,
    Gevrey,
    Repro,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Series solutions of A-hypergeometric systems.
///
/// Exit codes: 0 ok, 1 a check failed, 2 invalid input.
/// GKZ_THREADS sets the worker thread count.
#[derive(Parser, Debug)]
#[command(name = "gkz", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Problem file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Truncate series at weight W (a rational such as 12 or 7/2).
    #[arg(long, value_parser = parse_rational)]
    window: Option<Q>,
    /// Box radius for the toric binomials checked by `verify`.
    #[arg(long)]
    support_bound: Option<u64>,
    /// Directory of golden files for `repro`.
    #[arg(long)]
    golden_dir: Option<PathBuf>,
    /// With `repro`: overwrite the golden files in --golden-dir.
    #[arg(long)]
    bless: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
}

fn parse_rational(s: &str) -> Result<Q, String> {
    rational::parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

fn configure_threads() -> Result<(), GkzError> {
    let Ok(raw) = std::env::var("GKZ_THREADS") else {
        return Ok(());
    };
    let bad = |message: String| GkzError::Input { field: "GKZ_THREADS".into(), message };
    let n: usize = raw.trim().parse().map_err(|_| bad(format!("not a positive integer: {raw:?}")))?;
    if n == 0 {
        return Err(bad("must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| bad(e.to_string()))
}

fn execute(args: &Args) -> Result<cli::Outcome, GkzError> {
    configure_threads()?;
    let command = match args.command {
        Cmd::Triangulate => Command::Triangulate,
        Cmd::Cone => Command::Cone,
        Cmd::Volume => Command::Volume,
        Cmd::Exponents => Command::Exponents,
        Cmd::Series => Command::Series,
        Cmd::Verify => Command::Verify,
        Cmd::Nilsson => Command::Nilsson,
        Cmd::Gevrey => Command::Gevrey,
        Cmd::Repro => Command::Repro,
    };
    let problem = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GkzError::Input { field: "--input".into(), message: format!("{}: {e}", path.display()) })?;
            Some(cli::parse_problem(&text)?)
        }
        None => None,
    };
    let opts = Options {
        window: args.window.clone(),
        support_bound: args.support_bound,
        golden_dir: args.golden_dir.clone(),
        bless: args.bless,
    };
    cli::run(command, problem.as_ref(), &opts)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        Fmt::Json => Format::Json,
        Fmt::Text => Format::Text,
    };
    match execute(&args) {
        Ok(out) => {
            print!("{}", cli::render(&out.report, format));
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(err) => {
            eprint!("{}", cli::render(&cli::error_report(&err), format));
            ExitCode::from(cli::exit_code(&err) as u8)
        }
    }
}
