//! Fundamental-theorem-of-calculus identities for `(Lebesgue)²` and the
//! checks built on them.

use std::sync::Arc;

use super::{formulas, CheckReport, Expectation, Params, CHECK_TOL};
use crate::descriptor::FnSpec;
use crate::error::{Error, Result};
use crate::finite::FiniteSubset;
use crate::function::{PiecewiseMonotoneFn, Trend};
use crate::integrator::{integrate_restricted, integrate_simple};
use crate::interval::IntervalSet;
use crate::measure::{MeasurableSet, QMeasure, SetFunction};
use crate::quadrature::{integrate_fn, QuadratureConfig};
use crate::simple::SimpleFunction;

/// Tolerance for the second-difference checks.
pub const FTC_TOL: f64 = 1e-3;
/// Tolerance for the double-integral identity.
pub const DOUBLE_TOL: f64 = 1e-6;
/// Step used by the second-difference checks.
pub const FTC_STEP: f64 = 1e-2;

/// `G(b) = ∫₀^b f dμ` for `(Lebesgue)²`.
fn running_integral(f: &PiecewiseMonotoneFn, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if b <= 0.0 {
        return Ok(0.0);
    }
    integrate_restricted(
        f,
        &IntervalSet::interval(0.0, b)?,
        &QMeasure::LebesgueSquared,
        0.0,
        cfg,
    )
}

fn classical(f: &PiecewiseMonotoneFn, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    integrate_restricted(
        f,
        &IntervalSet::interval(a, b)?,
        &QMeasure::PlainLebesgue,
        0.0,
        cfg,
    )
}

/// `½ (G(b+h) − 2G(b) + G(b−h)) / h²`, an estimate of `½ G″(b)`.
pub fn ftc_second_derivative(
    f: &PiecewiseMonotoneFn,
    b: f64,
    h: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(h > 0.0 && b - 2.0 * h > 0.0 && b + 2.0 * h < 1.0) {
        return Err(Error::OutsideValidity(format!(
            "second difference needs 0 < b-2h and b+2h < 1 (b = {b}, h = {h})"
        )));
    }
    let g_minus = running_integral(f, b - h, cfg)?;
    let g_mid = running_integral(f, b, cfg)?;
    let g_plus = running_integral(f, b + h, cfg)?;
    Ok(0.5 * (g_plus - 2.0 * g_mid + g_minus) / (h * h))
}

/// Both sides of `∫₀^b f dμ = 2∫₀^b∫₀^t f(x) dx dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleIntegral {
    pub quantum: f64,
    pub double: f64,
}

/// Evaluates the quantum integral and the nested classical double integral.
pub fn ftc_double_integral(
    f: &PiecewiseMonotoneFn,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<DoubleIntegral> {
    let quantum = running_integral(f, b, cfg)?;
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        ..*cfg
    };
    let inner = |t: f64| integrate_fn(|x| f.eval(x), 0.0, t, &inner_cfg).unwrap_or(f64::NAN);
    let double = 2.0 * integrate_fn(inner, 0.0, b, cfg)?;
    if !double.is_finite() {
        return Err(Error::Quadrature {
            estimate: double,
            error_bound: f64::INFINITY,
        });
    }
    Ok(DoubleIntegral { quantum, double })
}

/// `∫₀^b ½ f″ dμ = f(b) − f(0) − f′(0) b`, for `f″` monotone.
///
/// `f_second` is `f″` as a piecewise-monotone function, `f` and `f_prime_0`
/// give the right-hand side.
pub fn ftc_second_order_check(
    f: &dyn Fn(f64) -> f64,
    f_prime_0: f64,
    f_second: &PiecewiseMonotoneFn,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    let half = f_second.scaled(0.5)?;
    let lhs = running_integral(&half, b, cfg)?;
    let rhs = f(b) - f(0.0) - f_prime_0 * b;
    Ok(CheckReport::new(
        format!("ftc_second_order:{}", f_second.name()),
        Params::b(b),
        lhs,
        rhs,
        DOUBLE_TOL,
    ))
}

/// `∫_a^b f dμ` against `∫₀^b f dμ − ∫₀^a f dμ − 2(b−a)∫₀^a f(t) dt`.
pub fn decomposition_check(
    f: &PiecewiseMonotoneFn,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::OutsideValidity(format!(
            "need 0 <= a < b <= 1, got a = {a}, b = {b}"
        )));
    }
    let direct = integrate_restricted(
        f,
        &IntervalSet::interval(a, b)?,
        &QMeasure::LebesgueSquared,
        0.0,
        cfg,
    )?;
    let split = running_integral(f, b, cfg)?
        - running_integral(f, a, cfg)?
        - 2.0 * (b - a) * classical(f, 0.0, a, cfg)?;
    Ok(CheckReport::new(
        format!("decomposition:{}", f.name()),
        Params::ab(a, b),
        direct,
        split,
        CHECK_TOL,
    ))
}

/// Forward-difference estimate of `G′(0)` with step `h`.
pub fn derivative_at_zero(f: &PiecewiseMonotoneFn, h: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::OutsideValidity(format!(
            "step must be in (0, 1], got {h}"
        )));
    }
    Ok((running_integral(f, h, cfg)? - running_integral(f, 0.0, cfg)?) / h)
}

/// `∫₀^b (f+g) dμ` against `∫₀^b f dμ + ∫₀^b g dμ`.
pub fn additivity_check(
    f: &FnSpec,
    g: &FnSpec,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    let sum = FnSpec::Sum {
        terms: vec![f.clone(), g.clone()],
    }
    .to_function()?;
    let joint = running_integral(&sum, b, cfg)?;
    let separate =
        running_integral(&f.to_function()?, b, cfg)? + running_integral(&g.to_function()?, b, cfg)?;
    Ok(CheckReport::new(
        format!("additivity:{f}+{g}"),
        Params::b(b),
        joint,
        separate,
        CHECK_TOL,
    ))
}

fn sinh_fn() -> Result<PiecewiseMonotoneFn> {
    PiecewiseMonotoneFn::monotone("sinh", Trend::Increasing, Arc::new(f64::sinh))
}

/// Runs `compute` and turns an error into a failed report.
fn report(
    id: String,
    params: Params,
    expectation: Expectation,
    tolerance: f64,
    compute: impl FnOnce() -> Result<(f64, f64)>,
) -> CheckReport {
    match compute() {
        Ok((engine, reference)) => CheckReport::new(id, params, engine, reference, tolerance),
        Err(e) => CheckReport::failed(id, params, f64::NAN, tolerance, &e),
    }
    .expecting(expectation)
}

fn from_check(
    expectation: Expectation,
    compute: impl FnOnce() -> Result<CheckReport>,
    id: &str,
) -> CheckReport {
    match compute() {
        Ok(r) => r.expecting(expectation),
        Err(e) => CheckReport::failed(id, Params::default(), f64::NAN, CHECK_TOL, &e)
            .expecting(expectation),
    }
}

/// A simple function on three weighted points whose integral differs from
/// the linear combination `a·μ(A) + b·μ(B)`.
fn nonlinearity_witness() -> Result<(f64, f64)> {
    let mu = QMeasure::squared_measure(vec![0.2, 0.3, 0.5])?;
    let set = |m: usize| -> Result<MeasurableSet> { Ok(FiniteSubset::new(3, [m])?.into()) };
    let (alpha, beta) = (1.5, 4.0);
    let f = SimpleFunction::new(vec![(alpha, set(0)?), (beta, set(1)?), (0.0, set(2)?)])?;
    let quantum = integrate_simple(&f, &mu, 0.0)?;
    let linear = alpha * mu.measure(&set(0)?)? + beta * mu.measure(&set(1)?)?;
    Ok((quantum, linear))
}

/// The identity checks and failure witnesses run by `verify`.
pub(super) fn suite(cfg: &QuadratureConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let points = [0.3, 0.5, 0.8];

    let monotone = [
        (FnSpec::Monomial { n: 1 }, Expectation::Pass),
        (FnSpec::Monomial { n: 2 }, Expectation::Pass),
        (FnSpec::Monomial { n: 3 }, Expectation::Pass),
        (FnSpec::Exp, Expectation::Pass),
        (FnSpec::Sin, Expectation::Pass),
        (FnSpec::Cos, Expectation::Erratum),
    ];
    for (spec, expectation) in &monotone {
        for &b in &points {
            out.push(report(
                format!("ftc_second_derivative:{spec}"),
                Params::b(b),
                *expectation,
                FTC_TOL,
                || {
                    let f = spec.to_function()?;
                    Ok((ftc_second_derivative(&f, b, FTC_STEP, cfg)?, f.eval(b)))
                },
            ));
        }
    }

    let tent_b = 0.75;
    out.push(report(
        "ftc_tent_second_derivative".into(),
        Params::b(tent_b),
        Expectation::Pass,
        FTC_TOL,
        || {
            let f = FnSpec::Tent.to_function()?;
            Ok((
                ftc_second_derivative(&f, tent_b, FTC_STEP, cfg)?,
                4.0 - 6.0 * tent_b,
            ))
        },
    ));
    out.push(report(
        "witness_tent_ftc".into(),
        Params::b(tent_b),
        Expectation::Fail,
        FTC_TOL,
        || {
            let f = FnSpec::Tent.to_function()?;
            Ok((
                ftc_second_derivative(&f, tent_b, FTC_STEP, cfg)?,
                f.eval(tent_b),
            ))
        },
    ));

    let doubles = [
        (FnSpec::Cos, Expectation::Erratum),
        (FnSpec::Sin, Expectation::Pass),
        (FnSpec::CoshSqrt2, Expectation::Pass),
    ];
    for (spec, expectation) in &doubles {
        for &b in &points {
            out.push(report(
                format!("ftc_double_integral:{spec}"),
                Params::b(b),
                *expectation,
                DOUBLE_TOL,
                || {
                    let d = ftc_double_integral(&spec.to_function()?, b, cfg)?;
                    Ok((d.quantum, d.double))
                },
            ));
        }
    }
    out.push(report(
        "ftc_double_integral_closed:cosh_sqrt2".into(),
        Params::b(0.5),
        Expectation::Pass,
        DOUBLE_TOL,
        || {
            let d = ftc_double_integral(&FnSpec::CoshSqrt2.to_function()?, 0.5, cfg)?;
            Ok((d.quantum, formulas::leb2_cosh_sqrt2(0.5)))
        },
    ));

    out.push(from_check(
        Expectation::Pass,
        || ftc_second_order_check(&f64::sinh, 1.0, &sinh_fn()?, 0.7, cfg),
        "ftc_second_order:sinh",
    ));

    for n in 1..=4 {
        out.push(from_check(
            Expectation::Pass,
            || decomposition_check(&FnSpec::Monomial { n }.to_function()?, 0.3, 0.9, cfg),
            "decomposition",
        ));
    }
    out.push(from_check(
        Expectation::Pass,
        || decomposition_check(&FnSpec::Exp.to_function()?, 0.2, 0.7, cfg),
        "decomposition:exp",
    ));

    let h = 1e-3;
    for spec in [FnSpec::Monomial { n: 1 }, FnSpec::Exp, FnSpec::Cos] {
        out.push(report(
            format!("derivative_at_zero:{spec}"),
            Params::b(h),
            Expectation::Pass,
            10.0 * h,
            || Ok((derivative_at_zero(&spec.to_function()?, h, cfg)?, 0.0)),
        ));
    }

    let x = FnSpec::Monomial { n: 1 };
    out.push(from_check(
        Expectation::Pass,
        || additivity_check(&x, &FnSpec::Monomial { n: 2 }, 1.0, cfg),
        "additivity",
    ));
    out.push(from_check(
        Expectation::Pass,
        || additivity_check(&x, &x, 0.7, cfg),
        "additivity",
    ));
    out.push(
        from_check(
            Expectation::Fail,
            || {
                additivity_check(
                    &x,
                    &FnSpec::Poly {
                        coeffs: vec![0.0, 0.0, -1.0],
                    },
                    1.0,
                    cfg,
                )
            },
            "additivity",
        )
        .with_note("x and -x^2: the sum is not monotone"),
    );
    out.push(report(
        "witness_nonlinearity".into(),
        Params::default(),
        Expectation::Fail,
        CHECK_TOL,
        nonlinearity_witness,
    ));
    out
}
