//! The quantum integral.
//!
//! For a bounded `f` and a q-measure `μ`, the `a`-centered integral is
//!
//! ```text
//! ∫ f dμ_a = ∫_a^∞ μ({f > λ}) dλ − ∫_{−∞}^a μ({f < λ}) dλ
//! ```
//!
//! and `a = 0` gives the plain quantum integral. Simple functions are
//! evaluated exactly by [`integrate_simple`]; piecewise-monotone functions go
//! through adaptive quadrature over `λ` in [`integrate`] and friends.

mod level;
pub mod oracle;
mod simple_eval;
mod transform;

pub use level::{sub_level_set, super_level_set};
pub use oracle::{plateau_oracle, riemann_sum_oracle, riemann_sum_oracle_finite};
pub use simple_eval::integrate_simple;
pub use transform::{integrate_power, integrate_via_g, Transform};

use crate::error::{Error, Result};
use crate::function::PiecewiseMonotoneFn;
use crate::interval::IntervalSet;
use crate::measure::{Domain, Restricted, SetFunction};
use crate::quadrature::{integrate_panels, Estimate, QuadratureConfig};

/// Width of the guard band added on each side of the `λ` range.
const GUARD: f64 = 1.0;

/// `∫ f dμ_a` over the whole unit interval.
pub fn integrate<M>(
    f: &PiecewiseMonotoneFn,
    mu: &M,
    center: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    layer_cake(f, mu, None, &[], center, cfg).map(|e| e.value)
}

/// `∫_A f dμ_a`, computed twice: once by intersecting each level set with
/// `A`, once with the restricted measure `μ_A(B) = μ(A ∩ B)`. The two values
/// must agree within `2·abs_tol`.
pub fn integrate_restricted<M>(
    f: &PiecewiseMonotoneFn,
    support: &IntervalSet,
    mu: &M,
    center: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    integrate_restricted_detailed(f, support, mu, center, cfg).map(|e| e.value)
}

/// [`integrate_restricted`] with the quadrature error bound.
pub fn integrate_restricted_detailed<M>(
    f: &PiecewiseMonotoneFn,
    support: &IntervalSet,
    mu: &M,
    center: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    M: SetFunction + ?Sized,
{
    let cuts: Vec<f64> = support.endpoints().collect();
    let direct = layer_cake(f, mu, Some(support), &[], center, cfg)?;
    let restricted_mu = Restricted::new(mu, support.clone().into())?;
    let via_measure = layer_cake(f, &restricted_mu, None, &cuts, center, cfg)?;
    if (direct.value - via_measure.value).abs() > 2.0 * cfg.abs_tol {
        return Err(Error::PathMismatch {
            direct: direct.value,
            restricted_measure: via_measure.value,
        });
    }
    Ok(direct)
}

/// Layer-cake evaluation with an optional clipping set and error bound.
///
/// `extra_cuts` are additional `x` positions whose `f`-values become panel
/// breaks (the support of a restricted measure, for instance).
pub fn layer_cake<M>(
    f: &PiecewiseMonotoneFn,
    mu: &M,
    clip: Option<&IntervalSet>,
    extra_cuts: &[f64],
    center: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    M: SetFunction + ?Sized,
{
    cfg.validate()?;
    require_unit_interval(mu)?;
    if !center.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "center must be finite, got {center}"
        )));
    }
    let (f_min, f_max) = f.bounds();
    let lo = center.min(f_min) - GUARD;
    let hi = center.max(f_max) + GUARD;
    let breaks = lambda_breaks(f, mu, clip, extra_cuts, &[lo, center, hi]);
    let measure_of = |set: IntervalSet| match clip {
        Some(a) => mu.measure_intervals(&set.intersect(a)),
        None => mu.measure_intervals(&set),
    };

    let half = QuadratureConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    };
    let upper = integrate_panels(
        |lambda| measure_of(super_level_set(f, lambda, cfg.root_tol)?),
        &within(&breaks, center, hi),
        &half,
    )?;
    let lower = integrate_panels(
        |lambda| measure_of(sub_level_set(f, lambda, cfg.root_tol)?),
        &within(&breaks, lo, center),
        &half,
    )?;
    Ok(Estimate {
        value: upper.value - lower.value,
        error: upper.error + lower.error,
        evaluations: upper.evaluations + lower.evaluations,
    })
}

pub(crate) fn require_unit_interval<M: SetFunction + ?Sized>(mu: &M) -> Result<()> {
    match mu.domain() {
        Domain::UnitInterval => Ok(()),
        other => Err(Error::DomainMismatch {
            expected: Domain::UnitInterval.to_string(),
            found: other.to_string(),
        }),
    }
}

/// Values of `λ` where `λ ↦ μ({f > λ})` may have kinks: `f` at segment
/// ends, at the clipping set's ends, and at those positions shifted by the
/// measure's coupling offsets.
pub(crate) fn lambda_breaks<M: SetFunction + ?Sized>(
    f: &PiecewiseMonotoneFn,
    mu: &M,
    clip: Option<&IntervalSet>,
    extra_cuts: &[f64],
    fixed: &[f64],
) -> Vec<f64> {
    let mut positions: Vec<f64> = f.breakpoints();
    if let Some(a) = clip {
        positions.extend(a.endpoints());
    }
    positions.extend_from_slice(extra_cuts);
    let base = positions.clone();
    for d in mu.coupling_offsets() {
        for &p in &base {
            positions.extend(
                [p - d, p + d]
                    .into_iter()
                    .filter(|x| (0.0..=1.0).contains(x)),
            );
        }
    }
    let mut breaks: Vec<f64> = positions.iter().flat_map(|&x| f.values_at(x)).collect();
    breaks.extend_from_slice(fixed);
    breaks.retain(|v| v.is_finite());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// The breaks inside `[lo, hi]`, with both ends included.
pub(crate) fn within(breaks: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut out = vec![lo];
    out.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    out.push(hi);
    out
}
