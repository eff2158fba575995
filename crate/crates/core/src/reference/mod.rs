//! Closed-form oracles for worked integrals and a runner that checks the
//! numerical engine against them.

pub mod formulas;
mod ftc;

pub use ftc::{
    additivity_check, decomposition_check, derivative_at_zero, ftc_double_integral,
    ftc_second_derivative, ftc_second_order_check, DoubleIntegral,
};

use serde::{Deserialize, Serialize};

use crate::descriptor::FnSpec;
use crate::error::{Error, Result};
use crate::function::PiecewiseMonotoneFn;
use crate::integrator::{
    integrate, integrate_power, integrate_restricted, integrate_via_g, Transform,
};
use crate::interval::IntervalSet;
use crate::measure::QMeasure;
use crate::quadrature::QuadratureConfig;

/// Tolerance for engine vs closed form.
pub const CHECK_TOL: f64 = 1e-7;

/// Parameters of a catalog entry. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub n: u32,
    pub center: f64,
}

impl Params {
    pub fn ab(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            ..Self::default()
        }
    }

    pub fn b(b: f64) -> Self {
        Self {
            b,
            ..Self::default()
        }
    }

    pub fn nb(n: u32, b: f64) -> Self {
        Self {
            n,
            b,
            ..Self::default()
        }
    }
}

/// Whether a check is expected to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    /// A witness that must fail, such as a non-additivity example.
    Fail,
    /// A stated value that the engine is known to contradict.
    Erratum,
}

impl Expectation {
    pub fn expects_pass(self) -> bool {
        self == Expectation::Pass
    }
}

/// Outcome of comparing an engine value to a reference value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Params,
    pub engine: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub expectation: Expectation,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl CheckReport {
    pub fn new(
        id: impl Into<String>,
        params: Params,
        engine: f64,
        closed_form: f64,
        tolerance: f64,
    ) -> Self {
        let abs_diff = (engine - closed_form).abs();
        Self {
            id: id.into(),
            params,
            engine,
            closed_form,
            abs_diff,
            tolerance,
            pass: abs_diff <= tolerance,
            expectation: Expectation::Pass,
            note: String::new(),
        }
    }

    /// A report for a computation that did not produce a value.
    pub fn failed(
        id: impl Into<String>,
        params: Params,
        closed_form: f64,
        tolerance: f64,
        err: &Error,
    ) -> Self {
        let mut r = Self::new(id, params, f64::NAN, closed_form, tolerance);
        r.note = err.to_string();
        r
    }

    pub fn expecting(mut self, expectation: Expectation) -> Self {
        self.expectation = expectation;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// True when the outcome matches the expectation.
    pub fn as_expected(&self) -> bool {
        self.pass == self.expectation.expects_pass()
    }
}

type Formula = fn(&Params) -> f64;
type Engine = fn(&Params, &QuadratureConfig) -> Result<f64>;

/// A worked integral with its closed form and the engine computation that
/// should reproduce it.
#[derive(Clone)]
pub struct ClosedForm {
    pub id: &'static str,
    pub description: &'static str,
    pub expectation: Expectation,
    pub default_params: Params,
    valid: fn(&Params) -> bool,
    formula: Formula,
    engine: Engine,
    samples: fn() -> Vec<Params>,
}

impl std::fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForm").field("id", &self.id).finish()
    }
}

impl ClosedForm {
    pub fn is_valid(&self, p: &Params) -> bool {
        (self.valid)(p)
    }

    pub fn evaluate(&self, p: &Params) -> Result<f64> {
        if !self.is_valid(p) {
            return Err(Error::OutsideValidity(format!("{}: {p:?}", self.id)));
        }
        Ok((self.formula)(p))
    }

    pub fn engine_value(&self, p: &Params, cfg: &QuadratureConfig) -> Result<f64> {
        if !self.is_valid(p) {
            return Err(Error::OutsideValidity(format!("{}: {p:?}", self.id)));
        }
        (self.engine)(p, cfg)
    }

    /// 25 parameter points inside the validity region.
    pub fn sample_params(&self) -> Vec<Params> {
        (self.samples)()
    }

    pub fn check(&self, p: &Params, cfg: &QuadratureConfig) -> Result<CheckReport> {
        let closed = self.evaluate(p)?;
        let report = match (self.engine)(p, cfg) {
            Ok(v) => CheckReport::new(self.id, *p, v, closed, CHECK_TOL),
            Err(e) => CheckReport::failed(self.id, *p, closed, CHECK_TOL, &e),
        };
        Ok(report.expecting(self.expectation))
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

fn b_samples(lo: f64, hi: f64) -> Vec<Params> {
    linspace(lo, hi, 25).into_iter().map(Params::b).collect()
}

fn nb_samples(lo: f64, hi: f64) -> Vec<Params> {
    (1..=5)
        .flat_map(|n| {
            linspace(lo, hi, 5)
                .into_iter()
                .map(move |b| Params::nb(n, b))
        })
        .collect()
}

/// 25 pairs `a < b` in `[0, 1]` with `min_gap ≤ b − a ≤ max_gap`.
fn ab_samples(min_gap: f64, max_gap: f64) -> Vec<Params> {
    let mut out = Vec::with_capacity(25);
    for a in linspace(0.0, 0.9 - min_gap, 5) {
        let top = (a + max_gap).min(1.0);
        for b in linspace(a + min_gap, top, 5) {
            out.push(Params::ab(a, b));
        }
    }
    out
}

fn nab_samples() -> Vec<Params> {
    ab_samples(0.05, 1.0)
        .into_iter()
        .enumerate()
        .map(|(k, p)| Params {
            n: 1 + (k % 5) as u32,
            ..p
        })
        .collect()
}

fn lebesgue2() -> QMeasure {
    QMeasure::LebesgueSquared
}

fn destructive(offset: f64) -> QMeasure {
    QMeasure::DestructivePairs { offset }
}

fn spec(s: FnSpec) -> Result<PiecewiseMonotoneFn> {
    s.to_function()
}

fn monomial(n: u32) -> Result<PiecewiseMonotoneFn> {
    spec(FnSpec::Monomial { n })
}

/// `∫_{[a,b]} f dμ` with center 0.
fn over(
    f: &PiecewiseMonotoneFn,
    a: f64,
    b: f64,
    mu: &QMeasure,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_restricted(f, &IntervalSet::interval(a, b)?, mu, 0.0, cfg)
}

/// Classical `∫_a^b f dx` through the same engine with Lebesgue measure.
fn classical(f: &PiecewiseMonotoneFn, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    over(f, a, b, &QMeasure::PlainLebesgue, cfg)
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn pair(p: &Params) -> bool {
    unit(p.a) && unit(p.b) && p.a < p.b
}

/// Every worked integral, in a fixed order.
pub fn closed_form_catalog() -> Vec<ClosedForm> {
    vec![
        ClosedForm {
            id: "destr34_x",
            description: "destructive pairs d=3/4: int_0^b x dmu, both branches",
            expectation: Expectation::Pass,
            default_params: Params::b(0.75),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::destr34_x(p.b),
            engine: |p, cfg| over(&monomial(1)?, 0.0, p.b, &destructive(0.75), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "destr34_xn",
            description: "destructive pairs d=3/4: int_0^b x^n dmu, both branches",
            expectation: Expectation::Pass,
            default_params: Params::nb(2, 1.0),
            valid: |p| unit(p.b) && p.b > 0.0 && p.n >= 1,
            formula: |p| formulas::destr34_xn(p.n, p.b),
            engine: |p, cfg| over(&monomial(p.n)?, 0.0, p.b, &destructive(0.75), cfg),
            samples: || nb_samples(0.1, 1.0),
        },
        ClosedForm {
            id: "destr34_xn_deviation",
            description: "destructive pairs d=3/4: int x^n dx - int x^n dmu = 2(b-3/4)^(n+1)/(n+1)",
            expectation: Expectation::Pass,
            default_params: Params::nb(1, 1.0),
            valid: |p| p.b >= 0.75 && p.b <= 1.0 && p.n >= 1,
            formula: |p| formulas::destr34_xn_deviation(p.n, p.b),
            engine: |p, cfg| {
                let f = monomial(p.n)?;
                Ok(classical(&f, 0.0, p.b, cfg)? - over(&f, 0.0, p.b, &destructive(0.75), cfg)?)
            },
            samples: || nb_samples(0.75, 1.0),
        },
        ClosedForm {
            id: "destr12_x",
            description: "destructive pairs d=1/2: int_a^b x dmu, both branches of b-a",
            expectation: Expectation::Pass,
            default_params: Params::ab(0.0, 0.75),
            valid: pair,
            formula: |p| formulas::destr12_x(p.a, p.b),
            engine: |p, cfg| over(&monomial(1)?, p.a, p.b, &destructive(0.5), cfg),
            samples: || ab_samples(0.05, 1.0),
        },
        ClosedForm {
            id: "destr12_deviation",
            description:
                "destructive pairs d=1/2: int x dx - int x dmu = b^2 - a^2 - b + 1/4 for b-a >= 1/2",
            expectation: Expectation::Pass,
            default_params: Params::ab(0.1, 0.9),
            valid: |p| pair(p) && p.b - p.a >= 0.5 - 1e-12,
            formula: |p| formulas::destr12_deviation(p.a, p.b),
            engine: |p, cfg| {
                let f = monomial(1)?;
                Ok(classical(&f, p.a, p.b, cfg)? - over(&f, p.a, p.b, &destructive(0.5), cfg)?)
            },
            samples: || ab_samples(0.5, 1.0),
        },
        ClosedForm {
            id: "leb2_xn_centered",
            description: "(Lebesgue)^2: 2/((n+1)(n+2)) - a^n(1 - 2na/(n+1) + 2na^2/(n+2)), which is int_0^1 x^n dmu_c at c = a^n",
            expectation: Expectation::Pass,
            default_params: Params {
                n: 1,
                center: 0.5,
                ..Params::default()
            },
            valid: |p| unit(p.center) && p.n >= 1,
            formula: |p| formulas::leb2_xn_centered(p.n, p.center),
            engine: |p, cfg| integrate(&monomial(p.n)?, &lebesgue2(), p.center.powi(p.n as i32), cfg),
            samples: || {
                (1..=5)
                    .flat_map(|n| {
                        linspace(0.0, 1.0, 5).into_iter().map(move |c| Params {
                            n,
                            center: c,
                            ..Params::default()
                        })
                    })
                    .collect()
            },
        },
        ClosedForm {
            id: "leb2_xn_centered_at",
            description: "(Lebesgue)^2: int_0^1 x^n dmu_a for a center a in [0,1]",
            expectation: Expectation::Pass,
            default_params: Params {
                n: 2,
                center: 0.25,
                ..Params::default()
            },
            valid: |p| unit(p.center) && p.n >= 1,
            formula: |p| formulas::leb2_xn_centered_at(p.n, p.center),
            engine: |p, cfg| integrate(&monomial(p.n)?, &lebesgue2(), p.center, cfg),
            samples: || {
                (1..=5)
                    .flat_map(|n| {
                        linspace(0.0, 1.0, 5).into_iter().map(move |c| Params {
                            n,
                            center: c,
                            ..Params::default()
                        })
                    })
                    .collect()
            },
        },
        ClosedForm {
            id: "leb2_xn_interval",
            description: "(Lebesgue)^2: int_a^b x^n dmu",
            expectation: Expectation::Pass,
            default_params: Params {
                n: 2,
                a: 0.3,
                b: 0.9,
                center: 0.0,
            },
            valid: |p| pair(p) && p.n >= 1,
            formula: |p| formulas::leb2_xn_interval(p.n, p.a, p.b),
            engine: |p, cfg| over(&monomial(p.n)?, p.a, p.b, &lebesgue2(), cfg),
            samples: nab_samples,
        },
        ClosedForm {
            id: "leb2_exp",
            description: "(Lebesgue)^2: int_a^b e^x dmu = 2[e^b - e^a - e^a(b-a)]",
            expectation: Expectation::Pass,
            default_params: Params::ab(0.0, 1.0),
            valid: pair,
            formula: |p| formulas::leb2_exp(p.a, p.b),
            engine: |p, cfg| over(&spec(FnSpec::Exp)?, p.a, p.b, &lebesgue2(), cfg),
            samples: || ab_samples(0.05, 1.0),
        },
        ClosedForm {
            id: "leb2_exp_via_g",
            description: "(Lebesgue)^2: int_a^b e^x dmu through the change of variable g = exp",
            expectation: Expectation::Pass,
            default_params: Params::ab(0.2, 0.7),
            valid: pair,
            formula: |p| formulas::leb2_exp(p.a, p.b),
            engine: |p, cfg| {
                let s = IntervalSet::interval(p.a, p.b)?;
                integrate_via_g(
                    &monomial(1)?,
                    &Transform::exp(),
                    &lebesgue2(),
                    Some(&s),
                    0.0,
                    cfg,
                )
            },
            samples: || ab_samples(0.05, 1.0),
        },
        ClosedForm {
            id: "leb2_xn_power",
            description: "(Lebesgue)^2: int_a^b x^n dmu through the power rule",
            expectation: Expectation::Pass,
            default_params: Params {
                n: 3,
                a: 0.0,
                b: 1.0,
                center: 0.0,
            },
            valid: |p| pair(p) && p.n >= 1,
            formula: |p| formulas::leb2_xn_interval(p.n, p.a, p.b),
            engine: |p, cfg| {
                let s = IntervalSet::interval(p.a, p.b)?;
                integrate_power(&monomial(1)?, p.n, &lebesgue2(), Some(&s), cfg)
            },
            samples: nab_samples,
        },
        ClosedForm {
            id: "leb2_sum_xx2",
            description: "(Lebesgue)^2: int_0^b (x + x^2) dmu = b^3/3 + b^4/6",
            expectation: Expectation::Pass,
            default_params: Params::b(0.8),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_sum_xx2(p.b),
            engine: |p, cfg| {
                over(
                    &spec(FnSpec::Poly {
                        coeffs: vec![0.0, 1.0, 1.0],
                    })?,
                    0.0,
                    p.b,
                    &lebesgue2(),
                    cfg,
                )
            },
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_x_minus_x2",
            description: "(Lebesgue)^2: int_0^b (x - x^2) dmu, both sides of the turning point",
            expectation: Expectation::Pass,
            default_params: Params::b(1.0),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_x_minus_x2(p.b),
            engine: |p, cfg| {
                over(
                    &spec(FnSpec::Poly {
                        coeffs: vec![0.0, 1.0, -1.0],
                    })?,
                    0.0,
                    p.b,
                    &lebesgue2(),
                    cfg,
                )
            },
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_tent",
            description: "(Lebesgue)^2: int_0^b tent dmu, both sides of the peak",
            expectation: Expectation::Pass,
            default_params: Params::b(0.75),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_tent(p.b),
            engine: |p, cfg| over(&spec(FnSpec::Tent)?, 0.0, p.b, &lebesgue2(), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_cos",
            description: "(Lebesgue)^2: int_0^b cos dmu in the stated form 2(1 - cos b)",
            expectation: Expectation::Erratum,
            default_params: Params::b(0.5),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_cos_double_integral(p.b),
            engine: |p, cfg| over(&spec(FnSpec::Cos)?, 0.0, p.b, &lebesgue2(), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_cos_decreasing",
            description: "(Lebesgue)^2: int_0^b cos dmu = 2(b sin b + cos b - 1)",
            expectation: Expectation::Pass,
            default_params: Params::b(0.5),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_cos(p.b),
            engine: |p, cfg| over(&spec(FnSpec::Cos)?, 0.0, p.b, &lebesgue2(), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_sin",
            description: "(Lebesgue)^2: int_0^b sin dmu = 2(b - sin b)",
            expectation: Expectation::Pass,
            default_params: Params::b(0.5),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_sin(p.b),
            engine: |p, cfg| over(&spec(FnSpec::Sin)?, 0.0, p.b, &lebesgue2(), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_cosh_sqrt2",
            description: "(Lebesgue)^2: int_0^b cosh(sqrt2 x) dmu = cosh(sqrt2 b) - 1",
            expectation: Expectation::Pass,
            default_params: Params::b(0.5),
            valid: |p| unit(p.b) && p.b > 0.0,
            formula: |p| formulas::leb2_cosh_sqrt2(p.b),
            engine: |p, cfg| over(&spec(FnSpec::CoshSqrt2)?, 0.0, p.b, &lebesgue2(), cfg),
            samples: || b_samples(0.04, 1.0),
        },
        ClosedForm {
            id: "leb2_one",
            description: "(Lebesgue)^2: int_a^b 1 dmu = (b-a)^2",
            expectation: Expectation::Pass,
            default_params: Params::ab(0.2, 0.7),
            valid: pair,
            formula: |p| formulas::leb2_one(p.a, p.b),
            engine: |p, cfg| {
                over(
                    &PiecewiseMonotoneFn::constant(1.0)?,
                    p.a,
                    p.b,
                    &lebesgue2(),
                    cfg,
                )
            },
            samples: || ab_samples(0.05, 1.0),
        },
    ]
}

/// Looks up `id` in the catalog and checks the engine against it.
pub fn verify_case(id: &str, params: &Params, cfg: &QuadratureConfig) -> Result<CheckReport> {
    closed_form_catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))?
        .check(params, cfg)
}

/// The full verification suite: every catalog entry at its default
/// parameters, followed by the identity checks and the failure witnesses.
/// Reports come back in a fixed order.
pub fn verification_suite(cfg: &QuadratureConfig) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = closed_form_catalog()
        .iter()
        .map(|c| {
            c.check(&c.default_params, cfg)
                .expect("default parameters lie in the validity region")
        })
        .collect();
    reports.extend(ftc::suite(cfg));
    reports
}
