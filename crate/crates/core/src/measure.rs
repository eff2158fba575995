//! Measurable sets and the concrete q-measures.
//!
//! A q-measure is a nonnegative set function that satisfies grade-2
//! additivity: for pairwise disjoint `A`, `B`, `C`,
//!
//! ```text
//! μ(A∪B∪C) = μ(A∪B) + μ(A∪C) + μ(B∪C) − μ(A) − μ(B) − μ(C)
//! ```
//!
//! but is in general not additive. [`grade2_residual`] measures the failure of
//! that identity and is zero (up to rounding) for every kind in [`QMeasure`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FiniteSubset;
use crate::interval::IntervalSet;

/// Largest number of flips accepted by [`QMeasure::SquaredCounting`].
pub const MAX_COIN_FLIPS: u32 = 24;

/// The sample space a set or measure lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    UnitInterval,
    Finite(usize),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitInterval => write!(f, "[0,1]"),
            Domain::Finite(n) => write!(f, "finite({n})"),
        }
    }
}

/// A measurable set on either kind of space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurableSet {
    Interval(IntervalSet),
    Finite(FiniteSubset),
}

impl MeasurableSet {
    pub fn domain(&self) -> Domain {
        match self {
            MeasurableSet::Interval(_) => Domain::UnitInterval,
            MeasurableSet::Finite(s) => Domain::Finite(s.space_size()),
        }
    }

    pub fn whole(domain: Domain) -> Self {
        match domain {
            Domain::UnitInterval => MeasurableSet::Interval(IntervalSet::full()),
            Domain::Finite(n) => MeasurableSet::Finite(FiniteSubset::full(n)),
        }
    }

    pub fn empty(domain: Domain) -> Self {
        match domain {
            Domain::UnitInterval => MeasurableSet::Interval(IntervalSet::empty()),
            Domain::Finite(n) => MeasurableSet::Finite(FiniteSubset::empty(n)),
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::DomainMismatch {
            expected: self.domain().to_string(),
            found: other.domain().to_string(),
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Interval(a), MeasurableSet::Interval(b)) => {
                Ok(MeasurableSet::Interval(a.union(b)))
            }
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                Ok(MeasurableSet::Finite(a.union(b)?))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (MeasurableSet::Interval(a), MeasurableSet::Interval(b)) => {
                Ok(MeasurableSet::Interval(a.intersect(b)))
            }
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                Ok(MeasurableSet::Finite(a.intersect(b)?))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            MeasurableSet::Interval(a) => MeasurableSet::Interval(a.complement()),
            MeasurableSet::Finite(a) => MeasurableSet::Finite(a.complement()),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasurableSet::Interval(a) => a.is_empty(),
            MeasurableSet::Finite(a) => a.is_empty(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }
}

impl From<IntervalSet> for MeasurableSet {
    fn from(set: IntervalSet) -> Self {
        MeasurableSet::Interval(set)
    }
}

impl From<FiniteSubset> for MeasurableSet {
    fn from(set: FiniteSubset) -> Self {
        MeasurableSet::Finite(set)
    }
}

/// Anything that assigns a nonnegative value to measurable sets of one domain.
///
/// Implemented by [`QMeasure`] and by [`Restricted`], the measure
/// `B ↦ μ(A ∩ B)`.
pub trait SetFunction {
    fn domain(&self) -> Domain;

    fn measure_intervals(&self, set: &IntervalSet) -> Result<f64>;

    fn measure_finite(&self, set: &FiniteSubset) -> Result<f64>;

    fn measure(&self, set: &MeasurableSet) -> Result<f64> {
        match set {
            MeasurableSet::Interval(s) => self.measure_intervals(s),
            MeasurableSet::Finite(s) => self.measure_finite(s),
        }
    }

    /// μ(X).
    fn total(&self) -> Result<f64> {
        self.measure(&MeasurableSet::whole(self.domain()))
    }

    /// Translation offsets at which the measure couples points. Level-set
    /// boundaries shifted by these amounts are places where `λ ↦ μ({f > λ})`
    /// can have kinks.
    fn coupling_offsets(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// The q-measures provided by this crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawMeasure")]
pub enum QMeasure {
    /// `μ(A) = ν(A)²` on `[0, 1]`, with `ν` Lebesgue measure.
    LebesgueSquared,
    /// `μ(A) = ν(A) − 2ν({x ∈ A : x + offset ∈ A})` on `[0, 1]`.
    DestructivePairs { offset: f64 },
    /// `μ(A) = |A|² / 2^{2n}` on the `2^n` outcomes of `n` coin flips.
    SquaredCounting { n: u32 },
    /// Ordinary Lebesgue measure on `[0, 1]`; the additive control case.
    #[serde(rename = "lebesgue")]
    PlainLebesgue,
    /// `μ(A) = (Σ_{i∈A} w_i)²` on a finite space with one weight per point.
    SquaredMeasure { weights: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawMeasure {
    #[serde(alias = "lebesgue2")]
    LebesgueSquared,
    #[serde(alias = "destructive")]
    DestructivePairs {
        offset: f64,
    },
    #[serde(alias = "coin")]
    SquaredCounting {
        n: u32,
    },
    #[serde(rename = "lebesgue")]
    PlainLebesgue,
    SquaredMeasure {
        weights: Vec<f64>,
    },
}

impl TryFrom<RawMeasure> for QMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        match raw {
            RawMeasure::LebesgueSquared => Ok(QMeasure::LebesgueSquared),
            RawMeasure::DestructivePairs { offset } => QMeasure::destructive_pairs(offset),
            RawMeasure::SquaredCounting { n } => QMeasure::squared_counting(n),
            RawMeasure::PlainLebesgue => Ok(QMeasure::PlainLebesgue),
            RawMeasure::SquaredMeasure { weights } => QMeasure::squared_measure(weights),
        }
    }
}

impl QMeasure {
    /// Destructive pairs at distance `offset`.
    ///
    /// Only offsets in `[1/2, 1]` are accepted: there the paired set and its
    /// translate are disjoint pieces of `A`, which keeps the value nonnegative.
    pub fn destructive_pairs(offset: f64) -> Result<Self> {
        if (0.5..=1.0).contains(&offset) {
            Ok(QMeasure::DestructivePairs { offset })
        } else {
            Err(Error::InvalidOffset(offset))
        }
    }

    pub fn squared_counting(n: u32) -> Result<Self> {
        if (1..=MAX_COIN_FLIPS).contains(&n) {
            Ok(QMeasure::SquaredCounting { n })
        } else {
            Err(Error::InvalidMeasure(format!(
                "coin flips must be in 1..={MAX_COIN_FLIPS}, got {n}"
            )))
        }
    }

    pub fn squared_measure(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure(
                "weights must be a nonempty list of finite nonnegative numbers".into(),
            ));
        }
        Ok(QMeasure::SquaredMeasure { weights })
    }

    /// Parses a JSON object or a shorthand: `lebesgue2`, `lebesgue`,
    /// `destructive:<d>`, `coin:<n>` or `squared:<w1>,<w2>,...`.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| format!("invalid measure JSON: {e}"));
        }
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let need = |what: &str| {
            arg.ok_or(format!(
                "`{head}` needs {what}, e.g. {head}:{}",
                example(head)
            ))
        };
        let measure = match head {
            "lebesgue2" | "lebesgue_squared" if arg.is_none() => Ok(QMeasure::LebesgueSquared),
            "lebesgue" if arg.is_none() => Ok(QMeasure::PlainLebesgue),
            "destructive" => {
                let d = need("an offset")?;
                let d: f64 = d.parse().map_err(|_| format!("offset `{d}` is not a number"))?;
                QMeasure::destructive_pairs(d)
            }
            "coin" => {
                let n = need("a flip count")?;
                let n: u32 = n.parse().map_err(|_| format!("flip count `{n}` is not a positive integer"))?;
                QMeasure::squared_counting(n)
            }
            "squared" => {
                let weights = need("weights")?
                    .split(',')
                    .map(|w| w.trim().parse::<f64>().map_err(|_| format!("weight `{w}` is not a number")))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                QMeasure::squared_measure(weights)
            }
            "lebesgue2" | "lebesgue_squared" | "lebesgue" => return Err(format!("`{head}` takes no argument")),
            other => {
                return Err(format!(
                    "unknown measure `{other}` (expected lebesgue2, lebesgue, destructive:<d>, coin:<n> or squared:<weights>)"
                ))
            }
        };
        measure.map_err(|e| e.to_string())
    }

    /// Short human-readable name, also accepted by the CLI.
    pub fn label(&self) -> String {
        match self {
            QMeasure::LebesgueSquared => "lebesgue2".into(),
            QMeasure::DestructivePairs { offset } => format!("destructive:{offset}"),
            QMeasure::SquaredCounting { n } => format!("coin:{n}"),
            QMeasure::PlainLebesgue => "lebesgue".into(),
            QMeasure::SquaredMeasure { weights } => {
                let w: Vec<String> = weights.iter().map(f64::to_string).collect();
                format!("squared:{}", w.join(","))
            }
        }
    }

    fn wrong_domain(&self, found: Domain) -> Error {
        Error::DomainMismatch {
            expected: self.domain().to_string(),
            found: found.to_string(),
        }
    }
}

impl SetFunction for QMeasure {
    fn domain(&self) -> Domain {
        match self {
            QMeasure::LebesgueSquared
            | QMeasure::DestructivePairs { .. }
            | QMeasure::PlainLebesgue => Domain::UnitInterval,
            QMeasure::SquaredCounting { n } => Domain::Finite(1usize << n),
            QMeasure::SquaredMeasure { weights } => Domain::Finite(weights.len()),
        }
    }

    fn measure_intervals(&self, set: &IntervalSet) -> Result<f64> {
        match self {
            QMeasure::LebesgueSquared => Ok(set.total_length().powi(2)),
            QMeasure::PlainLebesgue => Ok(set.total_length()),
            QMeasure::DestructivePairs { offset } => {
                let paired = set.intersect(&set.translate(-offset));
                Ok(set.total_length() - 2.0 * paired.total_length())
            }
            _ => Err(self.wrong_domain(Domain::UnitInterval)),
        }
    }

    fn measure_finite(&self, set: &FiniteSubset) -> Result<f64> {
        let found = Domain::Finite(set.space_size());
        if self.domain() != found {
            return Err(self.wrong_domain(found));
        }
        match self {
            QMeasure::SquaredCounting { n } => {
                let ratio = set.len() as f64 / (1u64 << n) as f64;
                Ok(ratio * ratio)
            }
            QMeasure::SquaredMeasure { weights } => {
                let mass: f64 = set.members().iter().map(|&i| weights[i]).sum();
                Ok(mass * mass)
            }
            _ => Err(self.wrong_domain(found)),
        }
    }

    fn coupling_offsets(&self) -> Vec<f64> {
        match self {
            QMeasure::DestructivePairs { offset } => vec![*offset],
            _ => Vec::new(),
        }
    }
}

/// The restricted q-measure `μ_A(B) = μ(A ∩ B)`.
#[derive(Debug, Clone)]
pub struct Restricted<'a, M: ?Sized> {
    base: &'a M,
    support: MeasurableSet,
}

impl<'a, M: SetFunction + ?Sized> Restricted<'a, M> {
    pub fn new(base: &'a M, support: MeasurableSet) -> Result<Self> {
        if support.domain() != base.domain() {
            return Err(Error::DomainMismatch {
                expected: base.domain().to_string(),
                found: support.domain().to_string(),
            });
        }
        Ok(Self { base, support })
    }

    pub fn support(&self) -> &MeasurableSet {
        &self.support
    }
}

impl<M: SetFunction + ?Sized> SetFunction for Restricted<'_, M> {
    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn measure_intervals(&self, set: &IntervalSet) -> Result<f64> {
        match &self.support {
            MeasurableSet::Interval(a) => self.base.measure_intervals(&a.intersect(set)),
            MeasurableSet::Finite(a) => Err(Error::DomainMismatch {
                expected: Domain::Finite(a.space_size()).to_string(),
                found: Domain::UnitInterval.to_string(),
            }),
        }
    }

    fn measure_finite(&self, set: &FiniteSubset) -> Result<f64> {
        match &self.support {
            MeasurableSet::Finite(a) => self.base.measure_finite(&a.intersect(set)?),
            MeasurableSet::Interval(_) => Err(Error::DomainMismatch {
                expected: Domain::UnitInterval.to_string(),
                found: Domain::Finite(set.space_size()).to_string(),
            }),
        }
    }

    fn coupling_offsets(&self) -> Vec<f64> {
        self.base.coupling_offsets()
    }
}

fn example(head: &str) -> &'static str {
    match head {
        "destructive" => "0.75",
        "coin" => "3",
        _ => "0.2,0.3,0.5",
    }
}

/// `μ(A∪B∪C) + μ(A) + μ(B) + μ(C) − μ(A∪B) − μ(A∪C) − μ(B∪C)` for pairwise
/// disjoint `A`, `B`, `C`. Zero for a q-measure.
pub fn grade2_residual<M: SetFunction + ?Sized>(
    mu: &M,
    a: &MeasurableSet,
    b: &MeasurableSet,
    c: &MeasurableSet,
) -> Result<f64> {
    if !a.is_disjoint(b)? || !a.is_disjoint(c)? || !b.is_disjoint(c)? {
        return Err(Error::NotDisjoint);
    }
    let ab = a.union(b)?;
    let ac = a.union(c)?;
    let bc = b.union(c)?;
    let abc = ab.union(c)?;
    Ok(
        mu.measure(&abc)? + mu.measure(a)? + mu.measure(b)? + mu.measure(c)?
            - mu.measure(&ab)?
            - mu.measure(&ac)?
            - mu.measure(&bc)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> MeasurableSet {
        IntervalSet::interval(lo, hi).unwrap().into()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn shorthand_parsing_round_trips_through_labels() {
        for text in [
            "lebesgue2",
            "lebesgue",
            "destructive:0.75",
            "coin:3",
            "squared:0.2,0.3,0.5",
        ] {
            let mu = QMeasure::parse(text).unwrap();
            assert_eq!(mu.label(), text);
            let json = serde_json::to_string(&mu).unwrap();
            assert_eq!(QMeasure::parse(&json).unwrap(), mu);
        }
        assert_eq!(
            QMeasure::parse(r#"{"kind":"destructive","offset":0.5}"#).unwrap(),
            QMeasure::DestructivePairs { offset: 0.5 }
        );
        for bad in [
            "destructive:0.3",
            "destructive",
            "coin:x",
            "nope",
            "lebesgue:2",
            "coin:0",
        ] {
            assert!(QMeasure::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn destructive_three_quarters() {
        let mu = QMeasure::destructive_pairs(0.75).unwrap();
        assert!(close(mu.measure(&iv(0.0, 1.0)).unwrap(), 0.5));
        assert!(close(mu.measure(&iv(0.0, 0.75)).unwrap(), 0.75));
    }

    #[test]
    fn destructive_one_half() {
        let mu = QMeasure::destructive_pairs(0.5).unwrap();
        assert!(close(mu.total().unwrap(), 0.0));
        assert!(close(mu.measure(&iv(0.0, 0.5)).unwrap(), 0.5));
        assert!(close(
            mu.measure(&iv(1.0 / 6.0, 5.0 / 6.0)).unwrap(),
            1.0 / 3.0
        ));
        // The set as printed in the source gives 11/48, not 1/3.
        assert!(close(
            mu.measure(&iv(1.0 / 16.0, 5.0 / 6.0)).unwrap(),
            11.0 / 48.0
        ));
    }

    #[test]
    fn destructive_offset_range_is_enforced() {
        assert!(QMeasure::destructive_pairs(0.49).is_err());
        assert!(QMeasure::destructive_pairs(1.01).is_err());
        assert!(QMeasure::destructive_pairs(0.5).is_ok());
        assert!(QMeasure::destructive_pairs(1.0).is_ok());
    }

    #[test]
    fn lebesgue_squared_on_interval() {
        let mu = QMeasure::LebesgueSquared;
        assert!(close(mu.measure(&iv(0.2, 0.7)).unwrap(), 0.25));
    }

    #[test]
    fn squared_counting_two_flips() {
        let mu = QMeasure::squared_counting(2).unwrap();
        let three = FiniteSubset::new(4, [0, 1, 2]).unwrap().into();
        assert_eq!(mu.measure(&three).unwrap(), 9.0 / 16.0);
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let mu = QMeasure::LebesgueSquared;
        let finite: MeasurableSet = FiniteSubset::full(4).into();
        assert!(matches!(
            mu.measure(&finite),
            Err(Error::DomainMismatch { .. })
        ));
        let coin = QMeasure::squared_counting(2).unwrap();
        assert!(coin.measure(&iv(0.0, 1.0)).is_err());
        assert!(coin.measure(&FiniteSubset::full(8).into()).is_err());
    }

    #[test]
    fn empty_set_has_zero_measure() {
        for mu in [
            QMeasure::LebesgueSquared,
            QMeasure::PlainLebesgue,
            QMeasure::destructive_pairs(0.75).unwrap(),
            QMeasure::squared_counting(3).unwrap(),
            QMeasure::squared_measure(vec![0.2, 0.5, 0.3]).unwrap(),
        ] {
            assert_eq!(mu.measure(&MeasurableSet::empty(mu.domain())).unwrap(), 0.0);
        }
    }

    #[test]
    fn additivity_fails_for_destructive_pairs() {
        let mu = QMeasure::destructive_pairs(0.75).unwrap();
        let a = iv(0.0, 0.25);
        let b = iv(0.75, 1.0);
        let joint = mu.measure(&a.union(&b).unwrap()).unwrap();
        assert!(close(joint, 0.0));
        assert!(close(
            mu.measure(&a).unwrap() + mu.measure(&b).unwrap(),
            0.5
        ));
    }

    #[test]
    fn grade2_hand_triple() {
        let mu = QMeasure::destructive_pairs(0.75).unwrap();
        let r = grade2_residual(&mu, &iv(0.0, 0.1), &iv(0.2, 0.3), &iv(0.8, 0.95)).unwrap();
        assert!(r.abs() < 1e-12);
        assert_eq!(
            grade2_residual(&mu, &iv(0.0, 0.5), &iv(0.4, 0.6), &iv(0.8, 0.9)),
            Err(Error::NotDisjoint)
        );
    }

    #[test]
    fn restricted_measure_intersects_first() {
        let mu = QMeasure::LebesgueSquared;
        let restricted = Restricted::new(&mu, iv(0.0, 0.5)).unwrap();
        assert!(close(restricted.total().unwrap(), 0.25));
        assert!(close(restricted.measure(&iv(0.25, 1.0)).unwrap(), 0.0625));
    }

    #[test]
    fn json_round_trip() {
        let mu: QMeasure =
            serde_json::from_str(r#"{"kind":"destructive_pairs","offset":0.75}"#).unwrap();
        assert_eq!(mu, QMeasure::DestructivePairs { offset: 0.75 });
        let alias: QMeasure = serde_json::from_str(r#"{"kind":"lebesgue2"}"#).unwrap();
        assert_eq!(alias, QMeasure::LebesgueSquared);
        let coin: QMeasure = serde_json::from_str(r#"{"kind":"coin","n":3}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&coin).unwrap(),
            r#"{"kind":"squared_counting","n":3}"#
        );
        assert!(
            serde_json::from_str::<QMeasure>(r#"{"kind":"destructive","offset":0.3}"#).is_err()
        );
    }
}
