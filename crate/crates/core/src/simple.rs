//! Simple functions `f = Σ αᵢ χ_{Aᵢ}` over a disjoint cover of the space.

use crate::error::{Error, Result};
use crate::function::{PiecewiseMonotoneFn, Segment};
use crate::interval::IntervalSet;
use crate::measure::{Domain, MeasurableSet};

/// Coverage slack for interval supports.
const COVER_TOL: f64 = 1e-12;

/// A finite-valued function given by `(value, support)` pairs.
///
/// Supports are pairwise disjoint and together cover the whole space. Values
/// may repeat and need not be sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    domain: Domain,
    pieces: Vec<(f64, MeasurableSet)>,
}

impl SimpleFunction {
    pub fn new(pieces: Vec<(f64, MeasurableSet)>) -> Result<Self> {
        let domain = pieces
            .first()
            .map(|(_, s)| s.domain())
            .ok_or(Error::IncompleteCover { covered: 0.0 })?;
        if let Some((_, bad)) = pieces.iter().find(|(_, s)| s.domain() != domain) {
            return Err(Error::DomainMismatch {
                expected: domain.to_string(),
                found: bad.domain().to_string(),
            });
        }
        if let Some((v, _)) = pieces.iter().find(|(v, _)| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite value {v}")));
        }

        let mut covered = MeasurableSet::empty(domain);
        for (_, support) in &pieces {
            if !covered.is_disjoint(support)? {
                return Err(Error::OverlappingSupports);
            }
            covered = covered.union(support)?;
        }
        match &covered {
            MeasurableSet::Interval(s) => {
                let len = s.total_length();
                if len < 1.0 - COVER_TOL {
                    return Err(Error::IncompleteCover { covered: len });
                }
            }
            MeasurableSet::Finite(s) => {
                if s.len() != s.space_size() {
                    return Err(Error::IncompleteCover {
                        covered: s.len() as f64,
                    });
                }
            }
        }
        Ok(Self { domain, pieces })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn pieces(&self) -> &[(f64, MeasurableSet)] {
        &self.pieces
    }

    /// Distinct values in increasing order, each with the union of its supports.
    pub fn levels(&self) -> Result<Vec<(f64, MeasurableSet)>> {
        let mut sorted: Vec<&(f64, MeasurableSet)> = self.pieces.iter().collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut levels: Vec<(f64, MeasurableSet)> = Vec::with_capacity(sorted.len());
        for (value, support) in sorted {
            match levels.last_mut() {
                Some((v, s)) if *v == *value => *s = s.union(support)?,
                _ => levels.push((*value, support.clone())),
            }
        }
        Ok(levels)
    }

    /// Value at point `index` of a finite space.
    pub fn value_at_index(&self, index: usize) -> Option<f64> {
        self.pieces.iter().find_map(|(v, s)| match s {
            MeasurableSet::Finite(f) if f.contains(index) => Some(*v),
            _ => None,
        })
    }

    /// Value at `x ∈ [0, 1)` for an interval-based function.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        self.pieces.iter().find_map(|(v, s)| match s {
            MeasurableSet::Interval(i) if i.contains(x) => Some(*v),
            _ => None,
        })
    }

    /// The same step function as a piecewise-constant [`PiecewiseMonotoneFn`].
    /// Only available on `[0, 1]`.
    pub fn to_piecewise(&self) -> Result<PiecewiseMonotoneFn> {
        if self.domain != Domain::UnitInterval {
            return Err(Error::DomainMismatch {
                expected: Domain::UnitInterval.to_string(),
                found: self.domain.to_string(),
            });
        }
        let mut cuts: Vec<(f64, f64, f64)> = Vec::new();
        for (value, support) in &self.pieces {
            if let MeasurableSet::Interval(set) = support {
                cuts.extend(set.intervals().iter().map(|&(lo, hi)| (lo, hi, *value)));
            }
        }
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Supports cover [0,1) up to dropped slivers; close any sliver gaps.
        let mut segments = Vec::with_capacity(cuts.len());
        let mut cursor = 0.0;
        let count = cuts.len();
        for (k, (_, hi, value)) in cuts.into_iter().enumerate() {
            let hi = if k + 1 == count { 1.0 } else { hi };
            segments.push(Segment::constant(cursor, hi, value));
            cursor = hi;
        }
        PiecewiseMonotoneFn::new("simple", segments)
    }

    /// `f · χ_A`: keeps `f` on `A` and sets it to zero elsewhere.
    pub fn masked(&self, support: &MeasurableSet) -> Result<Self> {
        let outside = support.complement();
        let mut pieces: Vec<(f64, MeasurableSet)> = self
            .pieces
            .iter()
            .map(|(v, s)| Ok((*v, s.intersect(support)?)))
            .collect::<Result<_>>()?;
        pieces.push((0.0, outside));
        pieces.retain(|(_, s)| !s.is_empty());
        Self::new(pieces)
    }
}

/// Convenience constructor for interval supports.
pub fn step_function(pieces: &[(f64, &[(f64, f64)])]) -> Result<SimpleFunction> {
    SimpleFunction::new(
        pieces
            .iter()
            .map(|(v, parts)| Ok((*v, IntervalSet::new(parts.to_vec())?.into())))
            .collect::<Result<_>>()?,
    )
}
