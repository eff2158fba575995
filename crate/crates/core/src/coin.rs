//! The quantum coin: exact expectations of the head count under
//! `μ_n(A) = |A|² / 2^{2n}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::descriptor::head_count;
use crate::error::{Error, Result};
use crate::measure::QMeasure;
use crate::simple::SimpleFunction;

/// `n` fair coin flips with the squared counting q-measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoinModel {
    n: u32,
}

impl CoinModel {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure(
                "a coin model needs n >= 1 flips".into(),
            ));
        }
        Ok(Self { n })
    }

    pub fn flips(&self) -> u32 {
        self.n
    }

    /// The explicit measure on `2^n` outcomes (limited to small `n`).
    pub fn measure(&self) -> Result<QMeasure> {
        QMeasure::squared_counting(self.n)
    }

    /// The head-count random variable on the explicit outcome space.
    pub fn heads(&self) -> Result<SimpleFunction> {
        self.measure()?;
        head_count(self.n)
    }

    pub fn expectation_exact(&self) -> BigRational {
        expectation_exact(self.n)
    }

    pub fn expectation_closed(&self) -> BigRational {
        expectation_closed(self.n)
    }

    pub fn expectation_central(&self) -> BigRational {
        expectation_central(self.n)
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `a_n = 2^{−2n} Σ_{k=0}^{n−1} (Σ_{j=0}^{k} C(n, j))²`, from one Pascal row.
pub fn expectation_exact(n: u32) -> BigRational {
    let row = pascal_row(n);
    let mut prefix = BigInt::zero();
    let mut total = BigInt::zero();
    for c in row.iter().take(n as usize) {
        prefix += c;
        total += &prefix * &prefix;
    }
    BigRational::new(total, pow2(2 * u64::from(n)))
}

/// `C(n, 0), …, C(n, n)` by repeated Pascal additions.
fn pascal_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigInt::one());
        row = next;
    }
    row
}

/// `C(2n, n)`.
pub fn central_binomial(n: u32) -> BigInt {
    let mut c = BigInt::one();
    for k in 1..=u64::from(n) {
        // C(n+k, k) = C(n+k-1, k-1) · (n+k) / k stays integral at each step.
        c = c * BigInt::from(u64::from(n) + k) / BigInt::from(k);
    }
    c
}

/// `½ [ n + 2 − (n·C(2n, n) + 2) / 2^{2n} ]`.
///
/// This is the sum over all `n + 1` prefixes minus one, divided by `2^{2n}`,
/// so it exceeds `a_n` by exactly `1 − 2^{−2n}`. [`expectation_central`] is
/// the closed form that matches the prefix sums.
pub fn expectation_closed(n: u32) -> BigRational {
    let big_n = BigInt::from(n);
    let tail = BigRational::new(&big_n * central_binomial(n) + 2, pow2(2 * u64::from(n)));
    (BigRational::from_integer(big_n + 2) - tail) / BigInt::from(2)
}

/// `a_n = (n/2) · (1 − C(2n, n) / 2^{2n})`.
pub fn expectation_central(n: u32) -> BigRational {
    central_form(n, &central_binomial(n))
}

fn central_form(n: u32, central: &BigInt) -> BigRational {
    let four_n = pow2(2 * u64::from(n));
    BigRational::new(BigInt::from(n) * (&four_n - central), four_n * 2)
}

/// Lemma bound `a_n ≤ n/2`, checked exactly.
pub fn bound_check(n: u32) -> bool {
    expectation_exact(n) <= BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// One row of the ratio table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: u32,
    /// `a_n` as an exact fraction in lowest terms.
    #[serde(serialize_with = "fraction")]
    pub a_n: BigRational,
    /// `2a_n/n` rounded half-to-even to the requested digits.
    pub ratio: String,
}

fn fraction<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", x.numer(), x.denom()))
}

impl RatioRow {
    pub fn a_n_string(&self) -> String {
        format!("{}/{}", self.a_n.numer(), self.a_n.denom())
    }
}

/// `(n, a_n, 2a_n/n)` for `n = 1..=n_max`, using [`expectation_central`]
/// with the central binomial updated incrementally.
pub fn ratio_table(n_max: u32, digits: u32) -> Vec<RatioRow> {
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut central = BigInt::one();
    for n in 1..=n_max {
        // C(2n, n) = C(2n−2, n−1) · 2(2n−1) / n.
        central = central * BigInt::from(2 * (2 * u64::from(n) - 1)) / BigInt::from(n);
        let a_n = central_form(n, &central);
        let ratio = ratio_value(n, &a_n);
        rows.push(RatioRow {
            n,
            ratio: to_decimal(&ratio, digits),
            a_n,
        });
    }
    rows
}

/// `2a_n / n` as an exact rational.
pub fn ratio_value(n: u32, a_n: &BigRational) -> BigRational {
    a_n * BigInt::from(2) / BigInt::from(n)
}

/// Decimal expansion of `x` rounded half-to-even to `digits` places.
pub fn to_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = x * &scale;
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let twice: BigInt = r * 2;
    let rounded = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    };
    let negative = rounded.is_negative();
    let digits_str = rounded.abs().to_string();
    let d = digits as usize;
    let padded = format!("{digits_str:0>width$}", width = d + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - d);
    let sign = if negative { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Very large numerators and denominators: go through a decimal string.
        to_decimal(x, 20).parse().unwrap_or(f64::NAN)
    })
}

/// The two-flip integral centered at `a`, piecewise linear in `a`:
/// slopes −1, −5/8, −5/8, −1 on `a ≤ 0`, `[0, 1]`, `[1, 2]`, `a ≥ 2`.
pub fn centered_two_flip(a: f64) -> f64 {
    if a <= 0.0 {
        5.0 / 8.0 - a
    } else if a <= 2.0 {
        5.0 / 8.0 - 5.0 / 8.0 * a
    } else {
        11.0 / 8.0 - a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::integrate_simple;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn first_five_expectations() {
        let want = [q(1, 4), q(5, 8), q(33, 32), q(93, 64), q(965, 512)];
        for (n, w) in (1..=5).zip(want) {
            assert_eq!(expectation_exact(n), w, "n = {n}");
        }
    }

    #[test]
    fn central_form_matches_exact_sum() {
        for n in 1..=200 {
            assert_eq!(expectation_central(n), expectation_exact(n), "n = {n}");
        }
    }

    #[test]
    fn stated_closed_form_is_off_by_one_minus_four_to_the_minus_n() {
        for n in 1..=200 {
            let gap = expectation_closed(n) - expectation_exact(n);
            let want = BigRational::one() - BigRational::new(BigInt::one(), pow2(2 * u64::from(n)));
            assert_eq!(gap, want, "n = {n}");
        }
    }

    #[test]
    fn central_binomials() {
        assert_eq!(central_binomial(0), BigInt::from(1));
        assert_eq!(central_binomial(5), BigInt::from(252));
        assert_eq!(central_binomial(10), BigInt::from(184_756));
    }

    #[test]
    fn first_seven_ratios_and_twentieth() {
        let rows = ratio_table(20, 4);
        let got: Vec<&str> = rows.iter().take(7).map(|r| r.ratio.as_str()).collect();
        // a_6 = 2379/1024, so 2a_6/6 = 0.774414...
        assert_eq!(
            got,
            ["0.5000", "0.6250", "0.6875", "0.7266", "0.7539", "0.7744", "0.7905"]
        );
        // 2a_20/20 = 1202081373695/1374389534720 = 0.87463...
        assert_eq!(rows[19].ratio, "0.8746");
        assert_eq!(rows[19].a_n_string(), "1202081373695/137438953472");
        assert_eq!(rows[2].a_n_string(), "33/32");
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        assert_eq!(to_decimal(&q(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&q(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&q(-1, 8), 2), "-0.12");
        assert_eq!(to_decimal(&q(5, 2), 0), "2");
        assert_eq!(to_decimal(&q(7, 2), 0), "4");
        assert_eq!(to_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&q(1, 400), 2), "0.00");
    }

    #[test]
    fn bound_holds() {
        assert!((1..=60).all(bound_check));
    }

    #[test]
    fn two_flip_centered_values() {
        assert_eq!(centered_two_flip(0.0), 5.0 / 8.0);
        assert_eq!(centered_two_flip(0.5), 5.0 / 16.0);
        assert_eq!(centered_two_flip(3.0), -13.0 / 8.0);
        let model = CoinModel::new(2).unwrap();
        let (f, mu) = (model.heads().unwrap(), model.measure().unwrap());
        for a in [-1.0, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            let engine = integrate_simple(&f, &mu, a).unwrap();
            assert!((engine - centered_two_flip(a)).abs() < 1e-14, "a = {a}");
        }
    }

    #[test]
    fn engine_agrees_for_small_models() {
        for n in 1..=8 {
            let model = CoinModel::new(n).unwrap();
            let engine =
                integrate_simple(&model.heads().unwrap(), &model.measure().unwrap(), 0.0).unwrap();
            assert!((engine - to_f64(&expectation_exact(n))).abs() < 1e-12);
        }
    }
}
