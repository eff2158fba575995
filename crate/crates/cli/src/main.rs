//! `qint`: command-line front end for the quantum integral engine.
//!
//! Exit codes: 0 on success, 1 when a computation fails (or `verify` finds an
//! unexpected outcome), 2 when the job itself is malformed.

mod job;
mod output;
mod run;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quantum_integral::{FnSpec, QMeasure, QuadratureConfig};

use job::{parse_job, CoinOptions, Command, Format, FtcOptions, JobSpec, SpecError};
use run::RunError;

#[derive(Parser)]
#[command(
    name = "qint",
    version,
    about = "Quantum (non-additive) integrals on [0, 1] and coin spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Integrate a function against a measure.
    Integrate(IntegrateArgs),
    /// Tabulate the coin-model expectations a_n and 2a_n/n.
    Coin(CoinArgs),
    /// Run the closed-form catalog and property checks.
    Verify(Shared),
    /// Compare half the second difference of G(b) = int_0^b f with f(b).
    Ftc(FtcArgs),
    /// Replay a job document (as echoed under "job" in JSON output).
    Run {
        /// Path to the job JSON, or `-` for stdin.
        #[arg(long)]
        job: PathBuf,
    },
}

#[derive(Args)]
struct Shared {
    /// Absolute tolerance of the quadrature.
    #[arg(long, env = "QINT_TOL", allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    /// lebesgue2 | lebesgue | destructive:<d> | coin:<n> | squared:<w1,w2,...> | JSON
    #[arg(long, default_value = "lebesgue2")]
    measure: String,
    /// Function shorthand (x^2, exp, poly:1,0,-1, ...) or JSON descriptor.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center: f64,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct CoinArgs {
    #[arg(long, default_value_t = 20)]
    n_max: u32,
    #[arg(long, default_value_t = 10)]
    digits: u32,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct FtcArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.8")]
    at: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[command(flatten)]
    shared: Shared,
}

fn base_job(command: Command, shared: &Shared, default_format: Format) -> JobSpec {
    let mut job = JobSpec::new(command, shared.format.unwrap_or(default_format));
    if let Some(tol) = shared.tol {
        job.quadrature = QuadratureConfig::with_abs_tol(tol);
    }
    job.out = shared.out.clone();
    job
}

fn parse_fn(text: &str) -> Result<FnSpec, SpecError> {
    FnSpec::parse(text).map_err(|e| SpecError::new("fn", e))
}

fn build_job(command: Sub) -> Result<JobSpec, SpecError> {
    Ok(match command {
        Sub::Integrate(a) => JobSpec {
            measure: Some(QMeasure::parse(&a.measure).map_err(|e| SpecError::new("measure", e))?),
            function: Some(parse_fn(&a.function)?),
            from: a.from,
            to: a.to,
            center: a.center,
            ..base_job(Command::Integrate, &a.shared, Format::Json)
        },
        Sub::Coin(a) => JobSpec {
            coin: Some(CoinOptions {
                n_max: a.n_max,
                digits: a.digits,
            }),
            ..base_job(Command::Coin, &a.shared, Format::Csv)
        },
        Sub::Verify(shared) => base_job(Command::Verify, &shared, Format::Json),
        Sub::Ftc(a) => JobSpec {
            function: Some(parse_fn(&a.function)?),
            ftc: Some(FtcOptions {
                at: a.at,
                step: a.step,
            }),
            ..base_job(Command::Ftc, &a.shared, Format::Json)
        },
        Sub::Run { job } => {
            let mut text = String::new();
            let read = if job.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text).map(|_| ())
            } else {
                std::fs::read_to_string(&job).map(|t| text = t)
            };
            read.map_err(|e| SpecError::new("job", format!("cannot read {}: {e}", job.display())))?;
            parse_job(&text)?
        }
    })
}

fn emit(job: &JobSpec, document: &str) -> std::io::Result<()> {
    match &job.out {
        Some(path) => std::fs::write(path, document),
        None => std::io::stdout().lock().write_all(document.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match build_job(cli.command) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("qint: {e}");
            return ExitCode::from(2);
        }
    };
    let payload = match run::execute(&job) {
        Ok(p) => p,
        Err(RunError::Spec(e)) => {
            eprintln!("qint: {e}");
            return ExitCode::from(2);
        }
        Err(RunError::Compute(e)) => {
            eprintln!("qint: computation failed: {e}");
            return ExitCode::from(1);
        }
    };
    let rendered = output::render(&job, &payload);
    if let Err(e) = emit(&job, &rendered.document) {
        eprintln!("qint: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if let Some(summary) = rendered.summary {
        eprint!("{summary}");
    }
    if payload.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
