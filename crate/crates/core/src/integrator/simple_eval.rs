use crate::error::{Error, Result};
use crate::measure::{MeasurableSet, SetFunction};
use crate::simple::SimpleFunction;

/// Exact `a`-centered quantum integral of a simple function.
///
/// With distinct values `β₁ < … < β_m` on supports `B₁, …, B_m`:
///
/// ```text
/// upper = Σ_{β_i > a} (β_i − max(a, β_{i−1})) · μ(B_i ∪ … ∪ B_m)
/// lower = Σ_{β_i < a} (min(a, β_{i+1}) − β_i) · μ(B_1 ∪ … ∪ B_i)
/// ∫ f dμ_a = upper − lower
/// ```
///
/// Tied values are merged before summing.
pub fn integrate_simple<M>(f: &SimpleFunction, mu: &M, center: f64) -> Result<f64>
where
    M: SetFunction + ?Sized,
{
    if f.domain() != mu.domain() {
        return Err(Error::DomainMismatch {
            expected: mu.domain().to_string(),
            found: f.domain().to_string(),
        });
    }
    let levels = f.levels()?;
    let m = levels.len();

    // tails[i] = B_i ∪ … ∪ B_m, heads[i] = B_1 ∪ … ∪ B_i.
    let mut tails = vec![MeasurableSet::empty(f.domain()); m];
    let mut acc = MeasurableSet::empty(f.domain());
    for i in (0..m).rev() {
        acc = acc.union(&levels[i].1)?;
        tails[i] = acc.clone();
    }

    let mut upper = 0.0;
    let mut lower = 0.0;
    let mut head = MeasurableSet::empty(f.domain());
    for i in 0..m {
        let beta = levels[i].0;
        head = head.union(&levels[i].1)?;
        if beta > center {
            let floor = if i == 0 {
                center
            } else {
                center.max(levels[i - 1].0)
            };
            upper += (beta - floor) * mu.measure(&tails[i])?;
        }
        if beta < center {
            let ceil = if i + 1 == m {
                center
            } else {
                center.min(levels[i + 1].0)
            };
            lower += (ceil - beta) * mu.measure(&head)?;
        }
    }
    Ok(upper - lower)
}
