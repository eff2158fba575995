//! Bounded functions on `[0, 1]` that are monotone on each of finitely many
//! segments.
//!
//! Monotone segments are what make level sets cheap: on each segment the set
//! `{f > λ}` is a single sub-interval whose free end is one root of `f = λ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;

/// A shareable real evaluator.
pub type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Samples per segment used to spot-check the declared trend.
const MONOTONE_SAMPLES: usize = 64;

/// Sign of the derivative on a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
}

impl Trend {
    fn flipped(self) -> Self {
        match self {
            Trend::Increasing => Trend::Decreasing,
            Trend::Decreasing => Trend::Increasing,
            Trend::Constant => Trend::Constant,
        }
    }
}

/// One monotone piece `[lo, hi)` with its own evaluator.
///
/// The evaluator is used on the closed interval `[lo, hi]`, so a step
/// function can give each piece its own value at the shared endpoint.
#[derive(Clone)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub trend: Trend,
    eval: Eval,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, trend: Trend, eval: Eval) -> Self {
        Self {
            lo,
            hi,
            trend,
            eval,
        }
    }

    pub fn constant(lo: f64, hi: f64, value: f64) -> Self {
        Self::new(lo, hi, Trend::Constant, Arc::new(move |_| value))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Eval {
        &self.eval
    }

    /// Values at the two ends of the segment, `(f(lo), f(hi))`.
    pub fn end_values(&self) -> (f64, f64) {
        (self.eval(self.lo), self.eval(self.hi))
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Segment")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("trend", &self.trend)
            .finish()
    }
}

/// A piecewise-monotone function on `[0, 1]`.
#[derive(Clone)]
pub struct PiecewiseMonotoneFn {
    name: String,
    segments: Vec<Segment>,
    min: f64,
    max: f64,
}

impl fmt::Debug for PiecewiseMonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseMonotoneFn")
            .field("name", &self.name)
            .field("segments", &self.segments)
            .field("bounds", &(self.min, self.max))
            .finish()
    }
}

impl PiecewiseMonotoneFn {
    /// Validates that the segments tile `[0, 1]` in order and that every
    /// evaluator is finite and monotone as tagged (checked by sampling).
    pub fn new(name: impl Into<String>, segments: Vec<Segment>) -> Result<Self> {
        let name = name.into();
        if segments.is_empty() {
            return Err(Error::InvalidFunction(format!("{name}: no segments")));
        }
        let mut cursor = 0.0;
        for seg in &segments {
            if seg.lo != cursor || seg.hi <= seg.lo {
                return Err(Error::InvalidFunction(format!(
                    "{name}: segments must tile [0,1] in order (segment [{}, {}) after {cursor})",
                    seg.lo, seg.hi
                )));
            }
            cursor = seg.hi;
        }
        if cursor != 1.0 {
            return Err(Error::InvalidFunction(format!(
                "{name}: segments end at {cursor}, not 1"
            )));
        }

        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (index, seg) in segments.iter().enumerate() {
            let samples: Vec<f64> = (0..=MONOTONE_SAMPLES)
                .map(|k| seg.eval(seg.lo + (seg.hi - seg.lo) * k as f64 / MONOTONE_SAMPLES as f64))
                .collect();
            if samples.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidFunction(format!(
                    "{name}: non-finite value on segment {index}"
                )));
            }
            let scale = samples.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let slack = 1e-12 * scale;
            let ok = samples.windows(2).all(|w| match seg.trend {
                Trend::Increasing => w[1] >= w[0] - slack,
                Trend::Decreasing => w[1] <= w[0] + slack,
                Trend::Constant => (w[1] - w[0]).abs() <= slack,
            });
            if !ok {
                return Err(Error::NonMonotone {
                    segment: index,
                    lo: seg.lo,
                    hi: seg.hi,
                });
            }
            let (a, b) = seg.end_values();
            min = min.min(a).min(b);
            max = max.max(a).max(b);
        }
        Ok(Self {
            name,
            segments,
            min,
            max,
        })
    }

    /// A single segment covering `[0, 1]`.
    pub fn monotone(name: impl Into<String>, trend: Trend, eval: Eval) -> Result<Self> {
        Self::new(name, vec![Segment::new(0.0, 1.0, trend, eval)])
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(format!("{value}"), vec![Segment::constant(0.0, 1.0, value)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `(inf f, sup f)` over `[0, 1]`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    /// Interior and outer breakpoints `0 = x₀ < … < x_k = 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.segments.iter().map(|s| s.hi))
            .collect()
    }

    fn segment_index(&self, x: f64) -> usize {
        let idx = self.segments.partition_point(|s| s.hi <= x);
        idx.min(self.segments.len() - 1)
    }

    /// `f(x)`, using the segment whose half-open range contains `x`
    /// (the last segment for `x >= 1`).
    pub fn eval(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Every one-sided value of `f` at `x`: one value inside a segment, two at
    /// a breakpoint where the adjacent evaluators differ.
    pub fn values_at(&self, x: f64) -> Vec<f64> {
        self.segments
            .iter()
            .filter(|s| s.lo <= x && x <= s.hi)
            .map(|s| s.eval(x))
            .collect()
    }

    /// `α·f`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let inner = s.eval.clone();
                let trend = if alpha == 0.0 {
                    Trend::Constant
                } else if alpha < 0.0 {
                    s.trend.flipped()
                } else {
                    s.trend
                };
                Segment::new(s.lo, s.hi, trend, Arc::new(move |x| alpha * inner(x)))
            })
            .collect();
        Self::new(format!("{alpha}*({})", self.name), segments)
    }

    /// `g ∘ f` for `g` strictly increasing on the range of `f`.
    pub fn compose_increasing(&self, name: &str, g: Eval) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let inner = s.eval.clone();
                let outer = g.clone();
                Segment::new(s.lo, s.hi, s.trend, Arc::new(move |x| outer(inner(x))))
            })
            .collect();
        Self::new(format!("{name}({})", self.name), segments)
    }

    /// `f · χ_A`: `f` on `A`, zero elsewhere.
    pub fn masked(&self, support: &IntervalSet) -> Result<Self> {
        let mut cuts: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .chain(support.endpoints())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut segments = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            if support.contains(mid) {
                let seg = &self.segments[self.segment_index(mid)];
                segments.push(Segment::new(lo, hi, seg.trend, seg.eval.clone()));
            } else {
                segments.push(Segment::constant(lo, hi, 0.0));
            }
        }
        Self::new(format!("{}*chi", self.name), segments)
    }
}

/// A smooth piece `[lo, hi]` described by a value and a slope evaluator.
///
/// [`from_pieces`] cuts each piece at the zeros of its slope to obtain
/// monotone segments.
#[derive(Clone)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub value: Eval,
    pub slope: Eval,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, value: Eval, slope: Eval) -> Self {
        Self {
            lo,
            hi,
            value,
            slope,
        }
    }

    pub fn constant(lo: f64, hi: f64, c: f64) -> Self {
        Self::new(lo, hi, Arc::new(move |_| c), Arc::new(|_| 0.0))
    }
}

/// Slope samples per piece when locating turning points.
const SLOPE_SAMPLES: usize = 512;

/// Builds a [`PiecewiseMonotoneFn`] by splitting each smooth piece at the sign
/// changes of its slope, located by bisection.
pub fn from_pieces(name: impl Into<String>, pieces: Vec<Piece>) -> Result<PiecewiseMonotoneFn> {
    let mut segments = Vec::new();
    for piece in pieces {
        let slope = &piece.slope;
        let xs: Vec<f64> = (0..=SLOPE_SAMPLES)
            .map(|k| piece.lo + (piece.hi - piece.lo) * k as f64 / SLOPE_SAMPLES as f64)
            .collect();
        let signs: Vec<i8> = xs.iter().map(|&x| sign(slope(x))).collect();

        // Turning points: where the nonzero slope sign flips between samples.
        let mut cuts = vec![piece.lo];
        let mut last: Option<(usize, i8)> = None;
        for (k, &s) in signs.iter().enumerate() {
            if s == 0 {
                continue;
            }
            if let Some((j, prev)) = last {
                if prev != s {
                    cuts.push(bisect_sign_change(slope.as_ref(), xs[j], xs[k], prev));
                }
            }
            last = Some((k, s));
        }
        cuts.push(piece.hi);
        cuts.dedup();

        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let trend = trend_on(slope.as_ref(), lo, hi);
            segments.push(Segment::new(lo, hi, trend, piece.value.clone()));
        }
    }
    PiecewiseMonotoneFn::new(name, segments)
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn trend_on(slope: &(dyn Fn(f64) -> f64 + Send + Sync), lo: f64, hi: f64) -> Trend {
    let mut total = 0i32;
    for k in 1..16 {
        total += i32::from(sign(slope(lo + (hi - lo) * k as f64 / 16.0)));
    }
    match total.signum() {
        1 => Trend::Increasing,
        -1 => Trend::Decreasing,
        _ => Trend::Constant,
    }
}

fn bisect_sign_change(
    slope: &(dyn Fn(f64) -> f64 + Send + Sync),
    mut lo: f64,
    mut hi: f64,
    lo_sign: i8,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sign(slope(mid)) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `f + g` for functions given as smooth pieces; the common refinement of both
/// partitions is used and slopes are added.
pub fn sum_pieces(left: &[Piece], right: &[Piece]) -> Vec<Piece> {
    let mut cuts: Vec<f64> = left
        .iter()
        .chain(right)
        .flat_map(|p| [p.lo, p.hi])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let find = |pieces: &[Piece], x: f64| -> Piece {
        pieces
            .iter()
            .find(|p| p.lo <= x && x < p.hi)
            .or_else(|| pieces.last())
            .cloned()
            .expect("piece lists are nonempty")
    };
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let (a, b) = (find(left, mid), find(right, mid));
            let (va, vb) = (a.value.clone(), b.value.clone());
            let (sa, sb) = (a.slope.clone(), b.slope.clone());
            Piece::new(
                w[0],
                w[1],
                Arc::new(move |x| va(x) + vb(x)),
                Arc::new(move |x| sa(x) + sb(x)),
            )
        })
        .collect()
}
