//! Brute-force reference evaluations of the quantum integral.
//!
//! These share no code with the adaptive engine beyond the measures
//! themselves: the integrand is a black-box closure sampled on a fixed grid,
//! level sets come from those samples, and the `λ` integral is a plain
//! midpoint sum.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::finite::FiniteSubset;
use crate::interval::IntervalSet;
use crate::measure::{Domain, MeasurableSet, SetFunction};
use crate::simple::SimpleFunction;

/// Number of `x` cells used to sample a continuum integrand.
pub const X_GRID: usize = 1 << 16;

/// `λ` cells are summed in this many fixed chunks, so the result does not
/// depend on the number of worker threads.
const CHUNKS: usize = 64;

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        iter.into_iter().for_each(|x| acc.add(x));
        acc
    }
}

/// Samples of `f` split into maximal monotone runs.
struct Sampled {
    values: Vec<f64>,
    /// `(first, last, nondecreasing)` sample indices of each run.
    runs: Vec<(usize, usize, bool)>,
}

impl Sampled {
    fn new(values: Vec<f64>) -> Self {
        let mut runs = Vec::new();
        let mut start = 0;
        let mut dir = 0i8;
        for k in 1..values.len() {
            let step = values[k].total_cmp(&values[k - 1]) as i8;
            if step == 0 {
                continue;
            }
            if dir == 0 {
                dir = step;
            } else if step != dir {
                runs.push((start, k - 1, dir > 0));
                start = k - 1;
                dir = step;
            }
        }
        runs.push((start, values.len() - 1, dir >= 0));
        Self { values, runs }
    }

    fn x(k: usize) -> f64 {
        k as f64 / X_GRID as f64
    }

    /// Interpolated crossing of level `lambda` between samples `k − 1` and `k`.
    fn crossing(&self, k: usize, lambda: f64) -> f64 {
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        let frac = if v1 == v0 {
            0.5
        } else {
            ((lambda - v0) / (v1 - v0)).clamp(0.0, 1.0)
        };
        Self::x(k - 1) + frac / X_GRID as f64
    }

    /// `{f > λ}` as read off the samples.
    fn above(&self, lambda: f64) -> IntervalSet {
        let mut parts = Vec::with_capacity(self.runs.len());
        for &(s, e, up) in &self.runs {
            let run = &self.values[s..=e];
            if up {
                let j = s + run.partition_point(|&v| v <= lambda);
                if j > e {
                    continue;
                }
                let lo = if j == s {
                    Self::x(s)
                } else {
                    self.crossing(j, lambda)
                };
                parts.push((lo, Self::x(e)));
            } else {
                let j = s + run.partition_point(|&v| v > lambda);
                if j == s {
                    continue;
                }
                let hi = if j > e {
                    Self::x(e)
                } else {
                    self.crossing(j, lambda)
                };
                parts.push((Self::x(s), hi));
            }
        }
        IntervalSet::clipped(parts)
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 10 {
        return Err(Error::InvalidConfig(format!(
            "oracle grid needs N >= 10, got {n}"
        )));
    }
    Ok(())
}

/// Midpoint sum of `h` over `[lo, hi]` on cells `[k/N, (k+1)/N]` clipped to
/// the range, evaluated in parallel with a fixed combination order.
fn midpoint_sum<H>(h: &H, lo: f64, hi: f64, n: usize) -> Result<f64>
where
    H: Fn(f64) -> Result<f64> + Sync,
{
    if hi <= lo {
        return Ok(0.0);
    }
    let scale = n as f64;
    let first = (lo * scale).floor() as i64;
    let last = (hi * scale).ceil() as i64;
    let cells = (last - first).max(0) as usize;
    let cell = |k: usize| -> Result<f64> {
        let idx = first + k as i64;
        let a = (idx as f64 / scale).max(lo);
        let b = ((idx + 1) as f64 / scale).min(hi);
        if b <= a {
            return Ok(0.0);
        }
        Ok((b - a) * h(0.5 * (a + b))?)
    };

    let chunk_len = cells.div_ceil(CHUNKS).max(1);
    let chunk_count = cells.div_ceil(chunk_len);
    let workers = std::thread::available_parallelism()
        .map(|w| w.get())
        .unwrap_or(1)
        .min(chunk_count)
        .max(1);
    let next = AtomicUsize::new(0);
    let mut partial: Vec<Option<Result<Neumaier>>> = (0..chunk_count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        if c >= chunk_count {
                            break;
                        }
                        let range = c * chunk_len..((c + 1) * chunk_len).min(cells);
                        let sum = range.map(cell).try_fold(Neumaier::default(), |mut acc, x| {
                            acc.add(x?);
                            Ok(acc)
                        });
                        done.push((c, sum));
                    }
                    done
                })
            })
            .collect();
        for handle in handles {
            for (c, sum) in handle.join().expect("oracle worker panicked") {
                partial[c] = Some(sum);
            }
        }
    });
    let mut total = Neumaier::default();
    for chunk in partial {
        total.add(chunk.expect("every chunk is evaluated")?.total());
    }
    Ok(total.total())
}

/// Riemann-sum evaluation of `∫_A f dμ_a` on `[0, 1]` for a black-box `f`,
/// with `n` midpoint `λ` cells per unit.
pub fn riemann_sum_oracle<F, M>(
    f: F,
    mu: &M,
    support: Option<&IntervalSet>,
    center: f64,
    n: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    M: SetFunction + Sync + ?Sized,
{
    check_grid(n)?;
    if mu.domain() != Domain::UnitInterval {
        return Err(Error::DomainMismatch {
            expected: Domain::UnitInterval.to_string(),
            found: mu.domain().to_string(),
        });
    }
    let values: Vec<f64> = (0..=X_GRID).map(|k| f(Sampled::x(k))).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidFunction(
            "oracle integrand is not finite".into(),
        ));
    }
    let v_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let v_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let up = Sampled::new(values.clone());
    let down = Sampled::new(values.into_iter().map(|v| -v).collect());

    let measure = |set: IntervalSet| match support {
        Some(a) => mu.measure_intervals(&set.intersect(a)),
        None => mu.measure_intervals(&set),
    };
    let upper = midpoint_sum(&|l| measure(up.above(l)), center, center.max(v_max), n)?;
    let lower = midpoint_sum(&|l| measure(down.above(-l)), center.min(v_min), center, n)?;
    Ok(upper - lower)
}

/// Riemann-sum evaluation on a finite space, where `values[i]` is `f` at
/// point `i`.
pub fn riemann_sum_oracle_finite<M>(values: &[f64], mu: &M, center: f64, n: usize) -> Result<f64>
where
    M: SetFunction + Sync + ?Sized,
{
    check_grid(n)?;
    if mu.domain() != Domain::Finite(values.len()) {
        return Err(Error::DomainMismatch {
            expected: mu.domain().to_string(),
            found: Domain::Finite(values.len()).to_string(),
        });
    }
    let size = values.len();
    let select = |keep: &dyn Fn(f64) -> bool| -> Result<FiniteSubset> {
        FiniteSubset::new(size, (0..size).filter(|&i| keep(values[i])))
    };
    let v_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let v_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let upper = midpoint_sum(
        &|l| mu.measure_finite(&select(&|v| v > l)?),
        center,
        center.max(v_max),
        n,
    )?;
    let lower = midpoint_sum(
        &|l| mu.measure_finite(&select(&|v| v < l)?),
        center.min(v_min),
        center,
        n,
    )?;
    Ok(upper - lower)
}

/// Exact layer sum for a simple function: `λ ↦ μ({f > λ})` is constant
/// between consecutive values, so one membership test per plateau suffices.
pub fn plateau_oracle<M>(f: &SimpleFunction, mu: &M, center: f64) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    let mut cuts: Vec<f64> = f.pieces().iter().map(|(v, _)| *v).collect();
    cuts.push(center);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let collect = |keep: &dyn Fn(f64) -> bool| -> Result<MeasurableSet> {
        let mut set = MeasurableSet::empty(f.domain());
        for (v, s) in f.pieces() {
            if keep(*v) {
                set = set.union(s)?;
            }
        }
        Ok(set)
    };
    let mut sum = Neumaier::default();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        if lo >= center {
            sum.add((hi - lo) * mu.measure(&collect(&|v| v > mid)?)?);
        } else {
            sum.add(-(hi - lo) * mu.measure(&collect(&|v| v < mid)?)?);
        }
    }
    Ok(sum.total())
}
