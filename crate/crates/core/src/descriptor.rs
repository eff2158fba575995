//! Function descriptors: the JSON / shorthand vocabulary for integrands.
//!
//! ```text
//! {"kind":"monomial","n":2}        x^n
//! {"kind":"exp"}                   e^x
//! {"kind":"poly","coeffs":[c0,c1]} c0 + c1 x + …   (ascending powers)
//! {"kind":"tent"}                  2x on [0,1/2], 2−2x on [1/2,1]
//! {"kind":"cos"} {"kind":"sin"} {"kind":"cosh_sqrt2"}
//! {"kind":"simple","pieces":[[α, set], …]}
//! {"kind":"heads"}                 number of heads, on a coin space
//! {"kind":"sum","terms":[…]}       pointwise sum
//! ```

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FiniteSubset;
use crate::function::{from_pieces, sum_pieces, Eval, Piece, PiecewiseMonotoneFn, Segment, Trend};
use crate::measure::{Domain, MeasurableSet};
use crate::simple::SimpleFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FnSpec {
    Monomial { n: u32 },
    Exp,
    Poly { coeffs: Vec<f64> },
    Tent,
    Cos,
    Sin,
    CoshSqrt2,
    Simple { pieces: Vec<(f64, MeasurableSet)> },
    Heads,
    Sum { terms: Vec<FnSpec> },
}

impl FnSpec {
    /// Parses either a JSON object or a shorthand such as `x`, `x^3`,
    /// `monomial:2`, `poly:0,1,-1`, `exp`, `tent`, `cos`, `sin`,
    /// `cosh_sqrt2`, `heads`.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| format!("invalid function JSON: {e}"));
        }
        if text == "x" {
            return Ok(FnSpec::Monomial { n: 1 });
        }
        if let Some(n) = text.strip_prefix("x^") {
            let n = n
                .parse::<u32>()
                .map_err(|e| format!("bad monomial degree: {e}"))?;
            return Ok(FnSpec::Monomial { n });
        }
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let no_arg = |spec: FnSpec| match arg {
            None => Ok(spec),
            Some(_) => Err(format!("`{head}` takes no argument")),
        };
        match head {
            "monomial" => {
                let n = arg
                    .ok_or("monomial needs a degree, e.g. monomial:2")?
                    .parse::<u32>()
                    .map_err(|e| format!("bad monomial degree: {e}"))?;
                Ok(FnSpec::Monomial { n })
            }
            "poly" => {
                let coeffs = arg
                    .ok_or("poly needs coefficients, e.g. poly:0,1,-1")?
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| format!("bad polynomial coefficient: {e}"))?;
                Ok(FnSpec::Poly { coeffs })
            }
            "exp" => no_arg(FnSpec::Exp),
            "tent" => no_arg(FnSpec::Tent),
            "cos" => no_arg(FnSpec::Cos),
            "sin" => no_arg(FnSpec::Sin),
            "cosh_sqrt2" => no_arg(FnSpec::CoshSqrt2),
            "heads" => no_arg(FnSpec::Heads),
            other => Err(format!("unknown function `{other}`")),
        }
    }

    /// Plain pointwise formula, with no segment structure. Used by the
    /// brute-force oracle.
    pub fn pointwise(&self) -> Result<Eval> {
        Ok(match self {
            FnSpec::Monomial { n } => {
                let n = *n as i32;
                Arc::new(move |x: f64| x.powi(n))
            }
            FnSpec::Exp => Arc::new(f64::exp),
            FnSpec::Poly { coeffs } => {
                let c = coeffs.clone();
                Arc::new(move |x| horner(&c, x))
            }
            FnSpec::Tent => Arc::new(|x: f64| if x <= 0.5 { 2.0 * x } else { 2.0 - 2.0 * x }),
            FnSpec::Cos => Arc::new(f64::cos),
            FnSpec::Sin => Arc::new(f64::sin),
            FnSpec::CoshSqrt2 => Arc::new(|x: f64| (SQRT_2 * x).cosh()),
            FnSpec::Simple { .. } => {
                let f = self.to_simple(Domain::UnitInterval)?;
                Arc::new(move |x| f.value_at(x.min(1.0 - f64::EPSILON)).unwrap_or(0.0))
            }
            FnSpec::Heads => return Err(self.finite_only()),
            FnSpec::Sum { terms } => {
                let parts = terms
                    .iter()
                    .map(|t| t.pointwise())
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(move |x| parts.iter().map(|p| p(x)).sum())
            }
        })
    }

    fn finite_only(&self) -> Error {
        Error::InvalidFunction(format!("`{self}` is only defined on a coin space"))
    }

    fn pieces(&self) -> Result<Vec<Piece>> {
        let whole = |value: Eval, slope: Eval| vec![Piece::new(0.0, 1.0, value, slope)];
        Ok(match self {
            FnSpec::Monomial { n } => {
                let n = *n as i32;
                whole(
                    Arc::new(move |x: f64| x.powi(n)),
                    Arc::new(move |x: f64| {
                        if n == 0 {
                            0.0
                        } else {
                            n as f64 * x.powi(n - 1)
                        }
                    }),
                )
            }
            FnSpec::Exp => whole(Arc::new(f64::exp), Arc::new(f64::exp)),
            FnSpec::Poly { coeffs } => {
                let c = coeffs.clone();
                let d: Vec<f64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, ck)| k as f64 * ck)
                    .collect();
                whole(
                    Arc::new(move |x| horner(&c, x)),
                    Arc::new(move |x| horner(&d, x)),
                )
            }
            FnSpec::Tent => vec![
                Piece::new(0.0, 0.5, Arc::new(|x| 2.0 * x), Arc::new(|_| 2.0)),
                Piece::new(0.5, 1.0, Arc::new(|x| 2.0 - 2.0 * x), Arc::new(|_| -2.0)),
            ],
            FnSpec::Cos => whole(Arc::new(f64::cos), Arc::new(|x: f64| -x.sin())),
            FnSpec::Sin => whole(Arc::new(f64::sin), Arc::new(f64::cos)),
            FnSpec::CoshSqrt2 => whole(
                Arc::new(|x: f64| (SQRT_2 * x).cosh()),
                Arc::new(|x: f64| SQRT_2 * (SQRT_2 * x).sinh()),
            ),
            FnSpec::Simple { .. } => {
                let g = self.to_simple(Domain::UnitInterval)?.to_piecewise()?;
                g.segments()
                    .iter()
                    .map(|s| Piece::constant(s.lo, s.hi, s.eval(s.lo)))
                    .collect()
            }
            FnSpec::Heads => return Err(self.finite_only()),
            FnSpec::Sum { terms } => {
                let mut acc: Option<Vec<Piece>> = None;
                for t in terms {
                    let p = t.pieces()?;
                    acc = Some(match acc {
                        None => p,
                        Some(a) => sum_pieces(&a, &p),
                    });
                }
                acc.ok_or_else(|| Error::InvalidFunction("empty sum".into()))?
            }
        })
    }

    /// Builds the piecewise-monotone integrand on `[0, 1]`.
    pub fn to_function(&self) -> Result<PiecewiseMonotoneFn> {
        let name = self.to_string();
        match self {
            FnSpec::Monomial { n } => {
                let n = *n as i32;
                let trend = if n == 0 {
                    Trend::Constant
                } else {
                    Trend::Increasing
                };
                PiecewiseMonotoneFn::monotone(name, trend, Arc::new(move |x: f64| x.powi(n)))
            }
            FnSpec::Exp => {
                PiecewiseMonotoneFn::monotone(name, Trend::Increasing, Arc::new(f64::exp))
            }
            FnSpec::Cos => {
                PiecewiseMonotoneFn::monotone(name, Trend::Decreasing, Arc::new(f64::cos))
            }
            FnSpec::Sin => {
                PiecewiseMonotoneFn::monotone(name, Trend::Increasing, Arc::new(f64::sin))
            }
            FnSpec::CoshSqrt2 => PiecewiseMonotoneFn::monotone(
                name,
                Trend::Increasing,
                Arc::new(|x: f64| (SQRT_2 * x).cosh()),
            ),
            FnSpec::Tent => PiecewiseMonotoneFn::new(
                name,
                vec![
                    Segment::new(0.0, 0.5, Trend::Increasing, Arc::new(|x| 2.0 * x)),
                    Segment::new(0.5, 1.0, Trend::Decreasing, Arc::new(|x| 2.0 - 2.0 * x)),
                ],
            ),
            FnSpec::Simple { .. } => self.to_simple(Domain::UnitInterval)?.to_piecewise(),
            FnSpec::Heads => Err(self.finite_only()),
            FnSpec::Poly { .. } | FnSpec::Sum { .. } => from_pieces(name, self.pieces()?),
        }
    }

    /// Builds a simple function on `domain`. Only `simple` and `heads` qualify.
    pub fn to_simple(&self, domain: Domain) -> Result<SimpleFunction> {
        match (self, domain) {
            (FnSpec::Simple { pieces }, _) => {
                let f = SimpleFunction::new(pieces.clone())?;
                if f.domain() != domain {
                    return Err(Error::DomainMismatch {
                        expected: domain.to_string(),
                        found: f.domain().to_string(),
                    });
                }
                Ok(f)
            }
            (FnSpec::Heads, Domain::Finite(size)) if size.is_power_of_two() => {
                head_count(size.trailing_zeros())
            }
            _ => Err(Error::InvalidFunction(format!(
                "`{self}` is not a simple function on {domain}"
            ))),
        }
    }
}

/// Head count on the `2^n` outcomes of `n` flips; outcome `i` has
/// `popcount(i)` heads.
pub fn head_count(n: u32) -> Result<SimpleFunction> {
    let size = 1usize << n;
    let mut by_heads: Vec<Vec<usize>> = vec![Vec::new(); n as usize + 1];
    for outcome in 0..size {
        by_heads[outcome.count_ones() as usize].push(outcome);
    }
    let pieces = by_heads
        .into_iter()
        .enumerate()
        .map(|(k, members)| Ok((k as f64, FiniteSubset::new(size, members)?.into())))
        .collect::<Result<Vec<_>>>()?;
    SimpleFunction::new(pieces)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Monomial { n } => write!(f, "monomial:{n}"),
            FnSpec::Exp => write!(f, "exp"),
            FnSpec::Poly { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            FnSpec::Tent => write!(f, "tent"),
            FnSpec::Cos => write!(f, "cos"),
            FnSpec::Sin => write!(f, "sin"),
            FnSpec::CoshSqrt2 => write!(f, "cosh_sqrt2"),
            FnSpec::Simple { pieces } => write!(f, "simple[{}]", pieces.len()),
            FnSpec::Heads => write!(f, "heads"),
            FnSpec::Sum { terms } => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
        }
    }
}
