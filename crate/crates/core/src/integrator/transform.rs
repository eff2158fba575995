//! Change of variable: `∫ g∘f dμ_a` as an integral over `t` with weight `g′(t)`.

use std::fmt;
use std::sync::Arc;

use super::{lambda_breaks, require_unit_interval, sub_level_set, super_level_set, within};
use crate::error::{Error, Result};
use crate::function::{Eval, PiecewiseMonotoneFn};
use crate::interval::IntervalSet;
use crate::measure::SetFunction;
use crate::quadrature::{integrate_panels, QuadratureConfig};

const MONOTONE_SAMPLES: usize = 64;

/// A strictly increasing, differentiable `g` with its derivative.
#[derive(Clone)]
pub struct Transform {
    pub name: String,
    pub g: Eval,
    pub derivative: Eval,
    /// `g⁻¹`, if known in closed form; bisection is used otherwise.
    pub inverse: Option<Eval>,
    /// Interval of `t` on which `g` is increasing.
    pub domain: (f64, f64),
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transform")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            name: "t".into(),
            g: Arc::new(|t| t),
            derivative: Arc::new(|_| 1.0),
            inverse: Some(Arc::new(|t| t)),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn exp() -> Self {
        Self {
            name: "exp".into(),
            g: Arc::new(f64::exp),
            derivative: Arc::new(f64::exp),
            inverse: Some(Arc::new(f64::ln)),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `t ↦ tⁿ`, increasing on `[0, ∞)` (on all of ℝ for odd `n`).
    pub fn power(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonIncreasingTransform("t^0 is constant".into()));
        }
        let k = n as i32;
        let odd = n % 2 == 1;
        let root = move |y: f64| {
            if y < 0.0 {
                -(-y).powf(1.0 / k as f64)
            } else {
                y.powf(1.0 / k as f64)
            }
        };
        Ok(Self {
            name: format!("t^{n}"),
            g: Arc::new(move |t| t.powi(k)),
            derivative: Arc::new(move |t| k as f64 * t.powi(k - 1)),
            inverse: Some(Arc::new(root)),
            domain: (if odd { f64::NEG_INFINITY } else { 0.0 }, f64::INFINITY),
        })
    }

    /// Samples `g` on `[lo, hi]` and rejects anything not strictly increasing.
    fn check_increasing(&self, lo: f64, hi: f64) -> Result<()> {
        if lo < self.domain.0 || hi > self.domain.1 {
            return Err(Error::NonIncreasingTransform(format!(
                "{}: range [{lo}, {hi}] leaves the domain [{}, {}]",
                self.name, self.domain.0, self.domain.1
            )));
        }
        if hi <= lo {
            return Ok(());
        }
        let mut prev = (self.g)(lo);
        for k in 1..=MONOTONE_SAMPLES {
            let t = lo + (hi - lo) * k as f64 / MONOTONE_SAMPLES as f64;
            let v = (self.g)(t);
            if !(v > prev) {
                return Err(Error::NonIncreasingTransform(format!(
                    "{}: not increasing near t = {t}",
                    self.name
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// Solves `g(t) = y` for `t ∈ [lo, hi]`, assuming `g(lo) ≤ y ≤ g(hi)`.
    fn solve(&self, y: f64, lo: f64, hi: f64, tol: f64) -> f64 {
        if let Some(inv) = &self.inverse {
            return inv(y).clamp(lo, hi);
        }
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (self.g)(m) < y {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

/// `∫_A g∘f dμ_a` by the change of variable `λ = g(t)`:
///
/// ```text
/// ∫_{g⁻¹(a)}^∞ μ_A({f > t}) g′(t) dt − ∫_{−∞}^{g⁻¹(a)} μ_A({f < t}) g′(t) dt
/// ```
///
/// where the parts of the `t` range outside `[f_min, f_max]`, on which the
/// level sets are all or nothing, are added in closed form.
pub fn integrate_via_g<M>(
    f: &PiecewiseMonotoneFn,
    g: &Transform,
    mu: &M,
    support: Option<&IntervalSet>,
    center: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    cfg.validate()?;
    require_unit_interval(mu)?;
    let (f_min, f_max) = f.bounds();
    g.check_increasing(f_min, f_max)?;

    let measure_of = |set: IntervalSet| match support {
        Some(a) => mu.measure_intervals(&set.intersect(a)),
        None => mu.measure_intervals(&set),
    };
    let total = measure_of(IntervalSet::full())?;
    let (g_min, g_max) = ((g.g)(f_min), (g.g)(f_max));

    let upper_const = total * (g_min - center).max(0.0);
    let lower_const = total * (center - g_max).max(0.0);
    let t0 = if center <= g_min {
        f_min
    } else if center >= g_max {
        f_max
    } else {
        g.solve(center, f_min, f_max, cfg.root_tol)
    };

    let breaks = lambda_breaks(f, mu, support, &[], &[f_min, t0, f_max]);
    let half = QuadratureConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    };
    let upper = integrate_panels(
        |t| Ok(measure_of(super_level_set(f, t, cfg.root_tol)?)? * (g.derivative)(t)),
        &within(&breaks, t0, f_max),
        &half,
    )?;
    let lower = integrate_panels(
        |t| Ok(measure_of(sub_level_set(f, t, cfg.root_tol)?)? * (g.derivative)(t)),
        &within(&breaks, f_min, t0),
        &half,
    )?;
    Ok(upper_const + upper.value - lower_const - lower.value)
}

/// `∫_A fⁿ dμ = ∫₀^∞ μ_A({f > t}) n tⁿ⁻¹ dt` for nonnegative `f`.
pub fn integrate_power<M>(
    f: &PiecewiseMonotoneFn,
    n: u32,
    mu: &M,
    support: Option<&IntervalSet>,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    let (f_min, _) = f.bounds();
    if f_min < 0.0 {
        return Err(Error::InvalidFunction(format!(
            "power rule needs a nonnegative function, {} reaches {f_min}",
            f.name()
        )));
    }
    integrate_via_g(f, &Transform::power(n)?, mu, support, 0.0, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::FnSpec;
    use crate::integrator::{integrate, integrate_restricted};
    use crate::measure::QMeasure;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn x() -> PiecewiseMonotoneFn {
        FnSpec::Monomial { n: 1 }.to_function().unwrap()
    }

    #[test]
    fn exp_of_identity_over_an_interval() {
        let mu = QMeasure::LebesgueSquared;
        for (a, b) in [(0.0, 1.0), (0.2, 0.7), (0.5, 0.9)] {
            let s = IntervalSet::interval(a, b).unwrap();
            let v = integrate_via_g(&x(), &Transform::exp(), &mu, Some(&s), 0.0, &cfg()).unwrap();
            let want = 2.0 * (b.exp() - a.exp() - a.exp() * (b - a));
            assert!((v - want).abs() < 1e-9, "({a},{b}): {v} vs {want}");
        }
    }

    #[test]
    fn identity_transform_matches_direct_engine() {
        let mu = QMeasure::destructive_pairs(0.75).unwrap();
        let f = FnSpec::Tent.to_function().unwrap();
        for center in [0.0, 0.4, 2.0] {
            let via =
                integrate_via_g(&f, &Transform::identity(), &mu, None, center, &cfg()).unwrap();
            let direct = integrate(&f, &mu, center, &cfg()).unwrap();
            assert!((via - direct).abs() < 2e-10);
        }
    }

    #[test]
    fn cube_of_identity() {
        let v = integrate_power(&x(), 3, &QMeasure::LebesgueSquared, None, &cfg()).unwrap();
        assert!((v - 0.1).abs() < 1e-10);
    }

    #[test]
    fn power_rule_matches_direct_power() {
        let mu = QMeasure::destructive_pairs(0.75).unwrap();
        let whole = IntervalSet::full();
        let v = integrate_power(&x(), 2, &mu, Some(&whole), &cfg()).unwrap();
        assert!((v - 31.0 / 96.0).abs() < 1e-10);
        let sq = FnSpec::Monomial { n: 2 }.to_function().unwrap();
        let direct = integrate_restricted(&sq, &whole, &mu, 0.0, &cfg()).unwrap();
        assert!((v - direct).abs() < 2e-10);
    }

    #[test]
    fn power_one_is_the_plain_integral() {
        let mu = QMeasure::LebesgueSquared;
        let f = FnSpec::Exp.to_function().unwrap();
        let v = integrate_power(&f, 1, &mu, None, &cfg()).unwrap();
        let direct = integrate(&f, &mu, 0.0, &cfg()).unwrap();
        assert!((v - direct).abs() < 2e-10);
    }

    #[test]
    fn centered_exp_transform() {
        let mu = QMeasure::LebesgueSquared;
        let ex = FnSpec::Exp.to_function().unwrap();
        for center in [0.5, 1.5, 2.0, 3.5] {
            let via = integrate_via_g(&x(), &Transform::exp(), &mu, None, center, &cfg()).unwrap();
            let direct = integrate(&ex, &mu, center, &cfg()).unwrap();
            assert!(
                (via - direct).abs() < 2e-10,
                "center {center}: {via} vs {direct}"
            );
        }
    }

    #[test]
    fn decreasing_transform_is_rejected() {
        let neg = Transform {
            name: "-t".into(),
            g: Arc::new(|t| -t),
            derivative: Arc::new(|_| -1.0),
            inverse: None,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        };
        let err = integrate_via_g(&x(), &neg, &QMeasure::LebesgueSquared, None, 0.0, &cfg());
        assert!(matches!(err, Err(Error::NonIncreasingTransform(_))));
        let shifted = FnSpec::Poly {
            coeffs: vec![-0.5, 1.0],
        }
        .to_function()
        .unwrap();
        assert!(integrate_power(&shifted, 2, &QMeasure::LebesgueSquared, None, &cfg()).is_err());
    }
}
