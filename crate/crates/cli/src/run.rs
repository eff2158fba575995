use quantum_integral::coin::{ratio_table, RatioRow};
use quantum_integral::integrator::{integrate_restricted_detailed, layer_cake};
use quantum_integral::reference::{
    closed_form_catalog, ftc_double_integral, ftc_second_derivative, verification_suite,
    CheckReport,
};
use quantum_integral::{integrate_simple, Domain, Error, IntervalSet, SetFunction};
use serde::Serialize;

use crate::job::{Command, JobSpec, SpecError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub measure: String,
    #[serde(rename = "fn")]
    pub function: String,
    pub from: f64,
    pub to: f64,
    pub center: f64,
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FtcRow {
    pub b: f64,
    pub half_second_difference: f64,
    pub f_b: f64,
    pub difference: f64,
    pub quantum: f64,
    pub double_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coverage {
    pub covered: usize,
    pub catalog: usize,
}

pub enum Payload {
    Integral(IntegralResult),
    Coin(Vec<RatioRow>),
    Verify {
        reports: Vec<CheckReport>,
        coverage: Coverage,
    },
    Ftc(Vec<FtcRow>),
}

impl Payload {
    /// Whether the run should exit 0. Only `verify` can produce a
    /// document and still report failure.
    pub fn success(&self) -> bool {
        match self {
            Payload::Verify { reports, coverage } => {
                reports.iter().all(CheckReport::as_expected) && coverage.covered == coverage.catalog
            }
            _ => true,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Spec(SpecError),
    Compute(Error),
}

impl From<SpecError> for RunError {
    fn from(e: SpecError) -> Self {
        RunError::Spec(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute(e)
    }
}

pub fn execute(job: &JobSpec) -> Result<Payload, RunError> {
    job.validate()?;
    match job.command {
        Command::Integrate => integrate(job).map(Payload::Integral),
        Command::Coin => {
            let opts = job.coin.expect("validated");
            Ok(Payload::Coin(ratio_table(opts.n_max, opts.digits)))
        }
        Command::Verify => Ok(verify(job)),
        Command::Ftc => ftc(job).map(Payload::Ftc),
    }
}

fn integrate(job: &JobSpec) -> Result<IntegralResult, RunError> {
    let mu = job.measure.as_ref().expect("validated");
    let spec = job.function.as_ref().expect("validated");
    let cfg = &job.quadrature;
    let (value, error_bound, evaluations) = match mu.domain() {
        Domain::Finite(size) => {
            let f = spec.to_simple(Domain::Finite(size))?;
            (integrate_simple(&f, mu, job.center)?, 0.0, 0)
        }
        Domain::UnitInterval => {
            let f = spec.to_function()?;
            let est = if job.from == 0.0 && job.to == 1.0 {
                layer_cake(&f, mu, None, &[], job.center, cfg)?
            } else {
                let support = IntervalSet::interval(job.from, job.to)?;
                integrate_restricted_detailed(&f, &support, mu, job.center, cfg)?
            };
            (est.value, est.error, est.evaluations)
        }
    };
    Ok(IntegralResult {
        measure: mu.label(),
        function: spec.to_string(),
        from: job.from,
        to: job.to,
        center: job.center,
        value,
        error_bound,
        evaluations,
    })
}

fn verify(job: &JobSpec) -> Payload {
    let reports = verification_suite(&job.quadrature);
    let catalog = closed_form_catalog();
    let covered = catalog
        .iter()
        .filter(|c| reports.iter().any(|r| r.id == c.id))
        .count();
    Payload::Verify {
        reports,
        coverage: Coverage {
            covered,
            catalog: catalog.len(),
        },
    }
}

fn ftc(job: &JobSpec) -> Result<Vec<FtcRow>, RunError> {
    let f = job.function.as_ref().expect("validated").to_function()?;
    let opts = job.ftc.as_ref().expect("validated");
    opts.at
        .iter()
        .map(|&b| {
            let half = ftc_second_derivative(&f, b, opts.step, &job.quadrature)?;
            let both = ftc_double_integral(&f, b, &job.quadrature)?;
            let f_b = f.eval(b);
            Ok(FtcRow {
                b,
                half_second_difference: half,
                f_b,
                difference: half - f_b,
                quantum: both.quantum,
                double_integral: both.double,
            })
        })
        .collect()
}
