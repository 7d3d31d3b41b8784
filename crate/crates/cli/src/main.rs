use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodge_cli::{commands, load, CliError, Options, Outcome, Probe, Suite};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "hodge", version, about = "Hodge-theoretic invariants of degenerations, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    fixture: PathBuf,
    /// Write a JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hodge diamonds of V and of the induced H, with m.
    Diamond(Common),
    /// Deligne bigrading with exact bases.
    Split(Common),
    /// Induced fixture on H, as JSON.
    Induce(Common),
    /// m, lambda and the marker vectors of the adapted basis.
    Markers(Common),
    /// Subalgebra dimensions and the hermitian and smoothness verdicts.
    Lie(Common),
    /// Evaluate h~ and the orbit frame at a point.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Coordinates such as 0.1+0.05i, one per variable.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        t: Vec<Complex64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        branch: Vec<i64>,
    },
    /// Run check suites; all applicable ones when none is named.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        /// Branch shift vector for the monodromy suite.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        shift: Vec<i64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        t: Vec<Complex64>,
        #[arg(long, value_delimiter = ',')]
        dirs: Vec<usize>,
    },
    /// Run one numerical probe.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        probe: Probe,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        t: Vec<Complex64>,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        exponents: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        dirs: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long)]
        generator: Option<usize>,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.parse::<Complex64>().map_err(|_| format!("not a complex number: {s:?}"))
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let mut opts = Options::default();
    let (common, outcome): (&Common, fn(&hodge_cli::Fixture, &Options) -> hodge_cli::CliResult<Outcome>) = match &cli.command {
        Command::Diamond(c) => (c, |f, _| commands::diamond(f)),
        Command::Split(c) => (c, |f, _| commands::split(f)),
        Command::Induce(c) => (c, |f, _| commands::induce(f)),
        Command::Markers(c) => (c, |f, _| commands::markers(f)),
        Command::Lie(c) => (c, |f, _| commands::lie(f)),
        Command::Eval { common, t, branch } => {
            opts.t = t.clone();
            opts.branch = branch.clone();
            (common, commands::eval)
        }
        Command::Check { common, suite, shift, tol, samples, seed, t, dirs } => {
            opts.suites = suite.clone();
            opts.shift = shift.clone();
            opts.tol = *tol;
            opts.samples = *samples;
            opts.seed = *seed;
            opts.t = t.clone();
            opts.dirs = dirs.clone();
            (common, commands::check)
        }
        Command::Probe { common, probe, tol, seed, t, set, exponents, dirs, y, generator } => {
            opts.tol = *tol;
            opts.seed = *seed;
            opts.t = t.clone();
            opts.set = set.clone();
            opts.exponents = exponents.clone();
            opts.dirs = dirs.clone();
            opts.y = y.clone();
            opts.generator = *generator;
            let fx = load(&common.fixture)?;
            return Ok((commands::probe(&fx, *probe, &opts)?, common.report.clone()));
        }
    };
    let fx = load(&common.fixture)?;
    Ok((outcome(&fx, &opts)?, common.report.clone()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((outcome, report_path)) => {
            print!("{}", outcome.text);
            if let Some(path) = report_path {
                if let Err(e) = std::fs::write(&path, outcome.report.render()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            match outcome.report.first_failure() {
                None => ExitCode::SUCCESS,
                Some(c) => {
                    eprintln!("check failed: {} ({})", c.id, c.detail);
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
