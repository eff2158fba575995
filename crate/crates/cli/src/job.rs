use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use quantum_integral::{Domain, FnSpec, QMeasure, QuadratureConfig, SetFunction};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Integrate,
    Coin,
    Verify,
    Ftc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinOptions {
    pub n_max: u32,
    pub digits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtcOptions {
    pub at: Vec<f64>,
    pub step: f64,
}

/// Everything one invocation does. The JSON form is echoed in every JSON
/// document and can be replayed with `qint run --job`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<QMeasure>,
    #[serde(default, rename = "fn", skip_serializing_if = "Option::is_none")]
    pub function: Option<FnSpec>,
    #[serde(default)]
    pub from: f64,
    #[serde(default = "one")]
    pub to: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin: Option<CoinOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ftc: Option<FtcOptions>,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

pub const MAX_COIN_ROWS: u32 = 100_000;
pub const MAX_DIGITS: u32 = 4096;

/// A malformed job; `field` is the flag or JSON key at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub field: String,
    pub message: String,
}

impl SpecError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for SpecError {}

impl JobSpec {
    pub fn new(command: Command, format: Format) -> Self {
        Self {
            command,
            measure: None,
            function: None,
            from: 0.0,
            to: 1.0,
            center: 0.0,
            quadrature: QuadratureConfig::default(),
            coin: None,
            ftc: None,
            format,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        self.quadrature
            .validate()
            .map_err(|e| SpecError::new("tol", e.to_string()))?;
        match self.command {
            Command::Integrate => self.validate_integrate(),
            Command::Coin => {
                let opts = self
                    .coin
                    .ok_or_else(|| SpecError::new("coin", "missing coin options"))?;
                if !(1..=MAX_COIN_ROWS).contains(&opts.n_max) {
                    return Err(SpecError::new(
                        "n-max",
                        format!("must be in 1..={MAX_COIN_ROWS}, got {}", opts.n_max),
                    ));
                }
                if opts.digits > MAX_DIGITS {
                    return Err(SpecError::new(
                        "digits",
                        format!("must be at most {MAX_DIGITS}"),
                    ));
                }
                Ok(())
            }
            Command::Verify => Ok(()),
            Command::Ftc => self.validate_ftc(),
        }
    }

    fn function(&self) -> Result<&FnSpec, SpecError> {
        self.function
            .as_ref()
            .ok_or_else(|| SpecError::new("fn", "a function is required"))
    }

    fn validate_integrate(&self) -> Result<(), SpecError> {
        let mu = self
            .measure
            .as_ref()
            .ok_or_else(|| SpecError::new("measure", "a measure is required"))?;
        let f = self.function()?;
        if !self.center.is_finite() {
            return Err(SpecError::new("center", "must be finite"));
        }
        match mu.domain() {
            Domain::UnitInterval => {
                check_unit("from", self.from)?;
                check_unit("to", self.to)?;
                if self.from >= self.to {
                    return Err(SpecError::new(
                        "to",
                        format!("must exceed from ({} >= {})", self.from, self.to),
                    ));
                }
                f.to_function()
                    .map_err(|e| SpecError::new("fn", e.to_string()))?;
            }
            Domain::Finite(size) => {
                if self.from != 0.0 || self.to != 1.0 {
                    let field = if self.from != 0.0 { "from" } else { "to" };
                    return Err(SpecError::new(
                        field,
                        "bounds apply only to measures on [0, 1]",
                    ));
                }
                f.to_simple(Domain::Finite(size))
                    .map_err(|e| SpecError::new("fn", e.to_string()))?;
            }
        }
        Ok(())
    }

    fn validate_ftc(&self) -> Result<(), SpecError> {
        let f = self.function()?;
        f.to_function()
            .map_err(|e| SpecError::new("fn", e.to_string()))?;
        let opts = self
            .ftc
            .as_ref()
            .ok_or_else(|| SpecError::new("ftc", "missing ftc options"))?;
        if !(opts.step > 0.0 && opts.step < 0.25) {
            return Err(SpecError::new(
                "step",
                format!("must be in (0, 0.25), got {}", opts.step),
            ));
        }
        if opts.at.is_empty() {
            return Err(SpecError::new("at", "needs at least one point"));
        }
        for &b in &opts.at {
            if !(b - 2.0 * opts.step > 0.0 && b + 2.0 * opts.step < 1.0) {
                return Err(SpecError::new(
                    "at",
                    format!(
                        "point {b} needs 0 < b - 2*step and b + 2*step < 1 (step {})",
                        opts.step
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn check_unit(field: &str, x: f64) -> Result<(), SpecError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(SpecError::new(
            field,
            format!("must lie in [0, 1], got {x}"),
        ))
    }
}

/// Parses a job document, naming the offending key on failure.
pub fn parse_job(text: &str) -> Result<JobSpec, SpecError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let job: JobSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "job".to_string() } else { path };
        SpecError::new(field, e.into_inner().to_string())
    })?;
    job.validate()?;
    Ok(job)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_job() -> JobSpec {
        JobSpec {
            measure: Some(QMeasure::destructive_pairs(0.75).unwrap()),
            function: Some(FnSpec::Monomial { n: 2 }),
            from: 0.25,
            center: 0.1,
            ..JobSpec::new(Command::Integrate, Format::Json)
        }
    }

    #[test]
    fn json_round_trip() {
        let job = integrate_job();
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(parse_job(&text).unwrap(), job);
    }

    #[test]
    fn errors_name_the_field() {
        let mut job = integrate_job();
        job.to = 1.5;
        assert_eq!(job.validate().unwrap_err().field, "to");
        job.to = 0.2;
        assert_eq!(job.validate().unwrap_err().field, "to");
        let mut job = integrate_job();
        job.function = Some(FnSpec::Heads);
        assert_eq!(job.validate().unwrap_err().field, "fn");
        let mut job = integrate_job();
        job.quadrature.abs_tol = 0.0;
        assert_eq!(job.validate().unwrap_err().field, "tol");

        let err = parse_job(r#"{"command":"integrate","format":"json","from":"x"}"#).unwrap_err();
        assert_eq!(err.field, "from");
        let err = parse_job(r#"{"command":"integrate","format":"json","extra":1}"#).unwrap_err();
        assert_eq!(err.field, "extra");
        let err = parse_job(r#"{"command":"integrate","format":"json","measure":{"kind":"destructive","offset":0.1}}"#)
            .unwrap_err();
        assert_eq!(err.field, "measure");
    }

    #[test]
    fn finite_measures_reject_bounds() {
        let job = JobSpec {
            measure: Some(QMeasure::squared_counting(3).unwrap()),
            function: Some(FnSpec::Heads),
            to: 0.5,
            ..JobSpec::new(Command::Integrate, Format::Text)
        };
        assert_eq!(job.validate().unwrap_err().field, "to");
    }

    #[test]
    fn ftc_points_must_fit_the_stencil() {
        let job = JobSpec {
            function: Some(FnSpec::Exp),
            ftc: Some(FtcOptions {
                at: vec![0.5, 0.99],
                step: 0.01,
            }),
            ..JobSpec::new(Command::Ftc, Format::Csv)
        };
        assert_eq!(job.validate().unwrap_err().field, "at");
    }
}
