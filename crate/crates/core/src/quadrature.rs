//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The integrand may fail (level-set extraction can reject a function), so it
//! returns a `Result`. Panels are refined worst-first until the summed error
//! estimate drops below the absolute tolerance; the final sum is taken in
//! panel order so the result does not depend on refinement order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on `[-1, 1]` (positive half, descending; last is 0).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_709_120,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 10-point Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], …`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Hard cap on the number of live panels.
const MAX_PANELS: usize = 200_000;

/// Tolerances shared by the integration routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Target absolute error of the whole integral.
    pub abs_tol: f64,
    /// Maximum bisection depth of any panel.
    pub max_subdivisions: u32,
    /// Width at which level-set root bisection stops.
    pub root_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_subdivisions: 60,
            root_tol: 1e-13,
        }
    }
}

impl QuadratureConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if !(self.root_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "root_tol must be > 0, got {}",
                self.root_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// One Gauss–Kronrod panel: `(kronrod, |kronrod − gauss|)`.
pub fn gauss_kronrod<F>(f: &mut F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(10).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per consecutive pair of breakpoints. Breakpoints must be sorted; duplicates
/// are ignored.
pub fn integrate_panels<F>(mut f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gauss_kronrod(&mut f, w[0], w[1])?;
            evaluations += 21;
            heap.push(Panel {
                lo: w[0],
                hi: w[1],
                value,
                error,
                depth: 0,
            });
        }
    }

    let total_error = |heap: &BinaryHeap<Panel>| heap.iter().map(|p| p.error).sum::<f64>();
    let mut err = total_error(&heap);
    while err > cfg.abs_tol {
        let worst = heap.pop().expect("error above tolerance implies a panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.depth >= cfg.max_subdivisions
            || mid <= worst.lo
            || mid >= worst.hi
            || heap.len() >= MAX_PANELS
        {
            heap.push(worst);
            return Err(Error::Quadrature {
                estimate: ordered_sum(&heap),
                error_bound: err,
            });
        }
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (value, error) = gauss_kronrod(&mut f, lo, hi)?;
            evaluations += 21;
            heap.push(Panel {
                lo,
                hi,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
        err = total_error(&heap);
    }
    Ok(Estimate {
        value: ordered_sum(&heap),
        error: err,
        evaluations,
    })
}

fn ordered_sum(heap: &BinaryHeap<Panel>) -> f64 {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    panels.iter().map(|p| p.value).sum()
}

/// Integrates a plain function over `[lo, hi]`.
pub fn integrate_fn<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if hi < lo {
        return integrate_fn(f, hi, lo, cfg).map(|v| -v);
    }
    integrate_panels(|x| Ok(f(x)), &[lo, hi], cfg).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        // Kronrod 21 is exact to degree 31, Gauss 10 to degree 19.
        for deg in [0, 5, 19, 31] {
            let mut f = |x: f64| Ok(x.powi(deg));
            let (k, _) = gauss_kronrod(&mut f, 0.0, 1.0).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((k - exact).abs() < 1e-14, "degree {deg}: {k}");
        }
        let mut f = |x: f64| Ok(x.powi(19));
        let (_, err) = gauss_kronrod(&mut f, 0.0, 1.0).unwrap();
        assert!(err < 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks_and_sqrt() {
        let cfg = QuadratureConfig::default();
        let v = integrate_fn(|x| (x - 0.3).abs(), 0.0, 1.0, &cfg).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
        let v = integrate_fn(f64::sqrt, 0.0, 1.0, &cfg).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
        let v = integrate_fn(f64::exp, 1.0, 0.0, &cfg).unwrap();
        assert!((v + (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn reports_failure_with_best_estimate() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            max_subdivisions: 3,
            root_tol: 1e-13,
        };
        let err = integrate_fn(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, &cfg).unwrap_err();
        match err {
            Error::Quadrature {
                estimate,
                error_bound,
            } => {
                assert!((estimate - 0.7).abs() < 0.1);
                assert!(error_bound > 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::with_abs_tol(0.0).validate().is_err());
        assert!(QuadratureConfig::default().validate().is_ok());
    }
}
