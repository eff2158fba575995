//! Super- and sub-level sets of piecewise-monotone functions.

use crate::error::{Error, Result};
use crate::function::{PiecewiseMonotoneFn, Segment, Trend};
use crate::interval::IntervalSet;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    Below,
}

impl Side {
    fn holds(self, value: f64, lambda: f64) -> bool {
        match self {
            Side::Above => value > lambda,
            Side::Below => value < lambda,
        }
    }
}

/// `{x ∈ [0, 1) : f(x) > λ}`.
pub fn super_level_set(f: &PiecewiseMonotoneFn, lambda: f64, root_tol: f64) -> Result<IntervalSet> {
    level_set(f, lambda, root_tol, Side::Above)
}

/// `{x ∈ [0, 1) : f(x) < λ}`.
pub fn sub_level_set(f: &PiecewiseMonotoneFn, lambda: f64, root_tol: f64) -> Result<IntervalSet> {
    level_set(f, lambda, root_tol, Side::Below)
}

fn level_set(
    f: &PiecewiseMonotoneFn,
    lambda: f64,
    root_tol: f64,
    side: Side,
) -> Result<IntervalSet> {
    let mut parts = Vec::with_capacity(f.segments().len());
    for (index, seg) in f.segments().iter().enumerate() {
        if let Some(part) = segment_part(seg, index, lambda, root_tol, side)? {
            parts.push(part);
        }
    }
    IntervalSet::new(parts)
}

/// The part of one segment where the condition holds. On a monotone segment
/// that part is an interval touching one end of the segment.
fn segment_part(
    seg: &Segment,
    index: usize,
    lambda: f64,
    root_tol: f64,
    side: Side,
) -> Result<Option<(f64, f64)>> {
    let (v_lo, v_hi) = seg.end_values();
    let (at_lo, at_hi) = (side.holds(v_lo, lambda), side.holds(v_hi, lambda));
    let whole = Some((seg.lo, seg.hi));
    match (seg.trend, at_lo, at_hi) {
        (_, true, true) => Ok(whole),
        (_, false, false) => Ok(None),
        (Trend::Constant, _, _) => Err(non_monotone(seg, index)),
        // Holds at the right end only: the set is [root, hi).
        (_, false, true) => {
            let root = bisect(seg, index, lambda, root_tol, side, false)?;
            Ok(Some((root, seg.hi)))
        }
        // Holds at the left end only: the set is [lo, root).
        (_, true, false) => {
            let root = bisect(seg, index, lambda, root_tol, side, true)?;
            Ok(Some((seg.lo, root)))
        }
    }
}

/// Bisects for the switch point of the condition on `seg`. `holds_left` says
/// which end satisfies it. Every midpoint value is checked against the
/// bracket values, so a segment that is not monotone as tagged is reported.
fn bisect(
    seg: &Segment,
    index: usize,
    lambda: f64,
    root_tol: f64,
    side: Side,
    holds_left: bool,
) -> Result<f64> {
    let (mut lo, mut hi) = (seg.lo, seg.hi);
    let (mut f_lo, mut f_hi) = seg.end_values();
    let slack = 1e-12 * f_lo.abs().max(f_hi.abs()).max(1.0);
    while hi - lo > root_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = seg.eval(mid);
        let (small, large) = if f_lo <= f_hi {
            (f_lo, f_hi)
        } else {
            (f_hi, f_lo)
        };
        if !(f_mid >= small - slack && f_mid <= large + slack) {
            return Err(non_monotone(seg, index));
        }
        if side.holds(f_mid, lambda) == holds_left {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn non_monotone(seg: &Segment, index: usize) -> Error {
    Error::NonMonotone {
        segment: index,
        lo: seg.lo,
        hi: seg.hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::FnSpec;
    use std::sync::Arc;

    const TOL: f64 = 1e-13;

    #[test]
    fn identity_super_level() {
        let f = FnSpec::Monomial { n: 1 }.to_function().unwrap();
        let s = super_level_set(&f, 0.3, TOL).unwrap();
        let (lo, hi) = s.intervals()[0];
        assert!((lo - 0.3).abs() < 1e-13);
        assert_eq!(hi, 1.0);
        assert!(super_level_set(&f, 1.0, TOL).unwrap().is_empty());
        assert_eq!(super_level_set(&f, -0.5, TOL).unwrap(), IntervalSet::full());
    }

    #[test]
    fn parabola_level_sets() {
        let f = FnSpec::Poly {
            coeffs: vec![0.0, 1.0, -1.0],
        }
        .to_function()
        .unwrap();
        let at_vertex = super_level_set(&f, 0.25, TOL).unwrap();
        assert!(at_vertex.total_length() < 1e-6);
        let s = super_level_set(&f, 0.21, TOL).unwrap();
        assert_eq!(s.intervals().len(), 1);
        let (lo, hi) = s.intervals()[0];
        assert!(
            (lo - 0.3).abs() < 1e-12 && (hi - 0.7).abs() < 1e-12,
            "{lo} {hi}"
        );
        let below = sub_level_set(&f, 0.21, TOL).unwrap();
        assert!((below.total_length() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn step_functions_use_strict_inequality() {
        let f =
            FnSpec::parse(r#"{"kind":"simple","pieces":[[1.0,[[0.0,0.5]]],[3.0,[[0.5,1.0]]]]}"#)
                .unwrap()
                .to_function()
                .unwrap();
        assert_eq!(
            super_level_set(&f, 1.0, TOL).unwrap(),
            IntervalSet::interval(0.5, 1.0).unwrap()
        );
        assert_eq!(
            sub_level_set(&f, 3.0, TOL).unwrap(),
            IntervalSet::interval(0.0, 0.5).unwrap()
        );
        assert!(sub_level_set(&f, 1.0, TOL).unwrap().is_empty());
    }

    #[test]
    fn mislabelled_segment_is_caught_during_bisection() {
        let spike = |x: f64| if (0.4..0.6).contains(&x) { 5.0 } else { x };
        let seg = Segment::new(0.0, 1.0, Trend::Increasing, Arc::new(spike));
        assert_eq!(
            segment_part(&seg, 3, 0.3, TOL, Side::Above),
            Err(Error::NonMonotone {
                segment: 3,
                lo: 0.0,
                hi: 1.0
            })
        );
    }
}
