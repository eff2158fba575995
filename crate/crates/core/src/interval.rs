//! Finite unions of half-open subintervals of `[0, 1)`.
//!
//! An [`IntervalSet`] is always kept normalized: intervals are sorted, pairwise
//! disjoint, separated by strictly positive gaps, and none is shorter than
//! [`MIN_LENGTH`]. Single points carry no length, so the half-open convention
//! never changes a measure value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Intervals (and gaps) shorter than this are dropped (merged) on normalization.
pub const MIN_LENGTH: f64 = 1e-15;

/// A finite disjoint union of half-open intervals `[lo, hi)` inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole space `[0, 1)`.
    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, 1.0)],
        }
    }

    /// A single interval `[lo, hi)`. `lo == hi` yields the empty set.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    /// Builds a normalized set from arbitrary (possibly overlapping, unsorted)
    /// intervals. Every endpoint must lie in `[0, 1]` with `lo <= hi`.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            let in_range = (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi);
            if !in_range || lo > hi {
                return Err(Error::InvalidInterval { lo, hi });
            }
        }
        Ok(Self::normalized(intervals))
    }

    /// Clips every interval to `[0, 1]` and normalizes. Never fails.
    pub fn clipped(intervals: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self::normalized(
            intervals
                .into_iter()
                .filter(|(lo, hi)| lo.is_finite() || hi.is_finite())
                .map(|(lo, hi)| (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))),
        )
    }

    fn normalized(intervals: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut raw: Vec<(f64, f64)> = intervals
            .into_iter()
            .filter(|(lo, hi)| hi - lo >= MIN_LENGTH)
            .collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo - last.1 < MIN_LENGTH => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure of the set.
    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        // First interval whose upper end exceeds x.
        let idx = self.intervals.partition_point(|&(_, hi)| hi <= x);
        self.intervals.get(idx).is_some_and(|&(lo, _)| lo <= x)
    }

    /// Every interval endpoint, in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().flat_map(|&(lo, hi)| [lo, hi])
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalized(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalized(out)
    }

    /// Complement relative to `[0, 1)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        Self::normalized(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Shifts every interval by `shift` and clips the result to `[0, 1]`.
    ///
    /// `translate(A, -d)` is the set `{x : x + d ∈ A}` intersected with `[0, 1]`.
    pub fn translate(&self, shift: f64) -> Self {
        Self::clipped(
            self.intervals
                .iter()
                .map(|&(lo, hi)| (lo + shift, hi + shift)),
        )
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }
}

impl TryFrom<Vec<[f64; 2]>> for IntervalSet {
    type Error = Error;

    fn try_from(raw: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(raw.into_iter().map(|[lo, hi]| (lo, hi)).collect())
    }
}

impl From<IntervalSet> for Vec<[f64; 2]> {
    fn from(set: IntervalSet) -> Self {
        set.intervals.into_iter().map(|(lo, hi)| [lo, hi]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(parts: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::new(parts.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn adjacent_intervals_merge() {
        let u = set(&[(0.0, 0.5)]).union(&set(&[(0.5, 1.0)]));
        assert_eq!(u, IntervalSet::full());
    }

    #[test]
    fn separated_union_keeps_two_pieces() {
        let u = set(&[(0.0, 0.25)]).union(&set(&[(0.5, 0.75)]));
        assert_eq!(u.intervals().len(), 2);
        assert!(close(u.total_length(), 0.5));
    }

    #[test]
    fn union_with_empty_is_identity() {
        let a = set(&[(0.1, 0.2), (0.4, 0.9)]);
        assert_eq!(a.union(&IntervalSet::empty()), a);
    }

    #[test]
    fn intersections() {
        assert_eq!(
            set(&[(0.0, 0.6)]).intersect(&set(&[(0.4, 1.0)])),
            set(&[(0.4, 0.6)])
        );
        let a = set(&[(0.0, 0.25), (0.5, 0.75)]);
        assert!(a.intersect(&a.complement()).is_empty());
        assert_eq!(
            a.intersect(&set(&[(0.2, 0.6)])),
            set(&[(0.2, 0.25), (0.5, 0.6)])
        );
        assert_eq!(a.intersect(&a), a);
        assert!(a.intersect(&IntervalSet::empty()).is_empty());
    }

    #[test]
    fn complement_and_translate() {
        assert!(IntervalSet::full().complement().is_empty());
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::full());
        assert_eq!(set(&[(0.75, 1.0)]).translate(-0.75), set(&[(0.0, 0.25)]));
        let shifted = set(&[(0.0, 0.25)]).translate(0.9);
        assert_eq!(shifted.intervals().len(), 1);
        assert!(close(shifted.intervals()[0].0, 0.9));
        assert!(close(shifted.total_length(), 0.1));
    }

    #[test]
    fn rejects_out_of_range_and_reversed() {
        assert!(IntervalSet::interval(-0.1, 0.5).is_err());
        assert!(IntervalSet::interval(0.6, 0.5).is_err());
        assert!(IntervalSet::interval(0.2, 1.5).is_err());
        assert!(IntervalSet::interval(0.5, 0.5).unwrap().is_empty());
    }

    #[test]
    fn tiny_intervals_are_dropped() {
        let s = set(&[(0.3, 0.3 + 1e-16), (0.5, 0.6)]);
        assert_eq!(s.intervals().len(), 1);
    }

    #[test]
    fn membership_respects_half_open_ends() {
        let s = set(&[(0.2, 0.4), (0.6, 0.8)]);
        assert!(s.contains(0.2));
        assert!(!s.contains(0.4));
        assert!(s.contains(0.7));
        assert!(!s.contains(0.5));
        assert!(!s.contains(0.9));
    }

    #[test]
    fn json_shape() {
        let s = set(&[(0.0, 0.25), (0.5, 0.75)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, "[[0.0,0.25],[0.5,0.75]]");
        let back: IntervalSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<IntervalSet>("[[0.5,2.0]]").is_err());
    }
}
