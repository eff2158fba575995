#![allow(dead_code)]

use quantum_integral::integrator::{riemann_sum_oracle, riemann_sum_oracle_finite};
use quantum_integral::{
    integrate, integrate_restricted, integrate_simple, step_function, Domain, FiniteSubset, FnSpec,
    IntervalSet, MeasurableSet, QMeasure, QuadratureConfig, SimpleFunction,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One representative of every measure kind, including a random offset.
pub fn measure_kinds(rng: &mut ChaCha8Rng) -> Vec<QMeasure> {
    let weights = (0..12).map(|_| rng.gen_range(0.0..1.0)).collect();
    vec![
        QMeasure::LebesgueSquared,
        QMeasure::destructive_pairs(0.75).unwrap(),
        QMeasure::destructive_pairs(0.5).unwrap(),
        QMeasure::destructive_pairs(rng.gen_range(0.5..1.0)).unwrap(),
        QMeasure::PlainLebesgue,
        QMeasure::squared_counting(4).unwrap(),
        QMeasure::squared_measure(weights).unwrap(),
    ]
}

pub fn finite_size(mu: &QMeasure) -> Option<usize> {
    match mu {
        QMeasure::SquaredCounting { n } => Some(1 << n),
        QMeasure::SquaredMeasure { weights } => Some(weights.len()),
        _ => None,
    }
}

/// Sorted random cut points in `(0, 1)`, bracketed by 0 and 1.
fn cuts(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..1.0)).collect();
    c.push(0.0);
    c.push(1.0);
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

pub fn random_interval_set(rng: &mut ChaCha8Rng) -> IntervalSet {
    let c = {
        let count = rng.gen_range(0..8);
        cuts(rng, count)
    };
    IntervalSet::clipped(
        c.windows(2)
            .filter(|_| rng.gen_bool(0.5))
            .map(|w| (w[0], w[1])),
    )
}

/// Assigns every cell of a random partition to one of `parts` labels or to
/// none, and returns the resulting disjoint sets.
pub fn random_disjoint(rng: &mut ChaCha8Rng, mu: &QMeasure, parts: usize) -> Vec<MeasurableSet> {
    match finite_size(mu) {
        Some(size) => {
            let mut members = vec![Vec::new(); parts];
            for i in 0..size {
                let label = rng.gen_range(0..=parts);
                if label < parts {
                    members[label].push(i);
                }
            }
            members
                .into_iter()
                .map(|m| FiniteSubset::new(size, m).unwrap().into())
                .collect()
        }
        None => {
            let c = {
                let count = rng.gen_range(2..12);
                cuts(rng, count)
            };
            let mut pieces = vec![Vec::new(); parts];
            for w in c.windows(2) {
                let label = rng.gen_range(0..=parts);
                if label < parts {
                    pieces[label].push((w[0], w[1]));
                }
            }
            pieces
                .into_iter()
                .map(|p| IntervalSet::clipped(p).into())
                .collect()
        }
    }
}

/// A random simple function adapted to the domain of `mu`, with values on a
/// half-integer grid in `[−3, 3]` so ties occur.
pub fn random_simple(rng: &mut ChaCha8Rng, mu: &QMeasure) -> SimpleFunction {
    let level = |rng: &mut ChaCha8Rng| f64::from(rng.gen_range(-6..=6)) / 2.0;
    match finite_size(mu) {
        Some(size) => {
            let parts = rng.gen_range(1..=size.min(5));
            let mut labels: Vec<usize> = (0..size).map(|i| i % parts).collect();
            labels.shuffle(rng);
            let pieces = (0..parts)
                .map(|p| {
                    let members = (0..size).filter(|&i| labels[i] == p);
                    (level(rng), FiniteSubset::new(size, members).unwrap().into())
                })
                .collect();
            SimpleFunction::new(pieces).unwrap()
        }
        None => {
            let c = {
                let count = rng.gen_range(1..7);
                cuts(rng, count)
            };
            let parts = rng.gen_range(1..=c.len() - 1);
            let mut cells: Vec<Vec<(f64, f64)>> = vec![Vec::new(); parts];
            for (k, w) in c.windows(2).enumerate() {
                let label = if k < parts {
                    k
                } else {
                    rng.gen_range(0..parts)
                };
                cells[label].push((w[0], w[1]));
            }
            let values: Vec<f64> = (0..parts).map(|_| level(rng)).collect();
            let spec: Vec<(f64, &[(f64, f64)])> = values
                .iter()
                .zip(&cells)
                .map(|(v, c)| (*v, c.as_slice()))
                .collect();
            step_function(&spec).unwrap()
        }
    }
}

/// A case for the engine-vs-oracle comparison.
pub struct OracleCase {
    pub name: &'static str,
    pub f: FnSpec,
    pub mu: QMeasure,
    pub support: Option<(f64, f64)>,
    pub center: f64,
}

fn case(
    name: &'static str,
    f: FnSpec,
    mu: QMeasure,
    support: Option<(f64, f64)>,
    center: f64,
) -> OracleCase {
    OracleCase {
        name,
        f,
        mu,
        support,
        center,
    }
}

pub fn oracle_corpus() -> Vec<OracleCase> {
    let l2 = QMeasure::LebesgueSquared;
    let d = |o: f64| QMeasure::destructive_pairs(o).unwrap();
    let x = FnSpec::Monomial { n: 1 };
    let x2 = FnSpec::Monomial { n: 2 };
    let weights = vec![0.1, 0.4, 0.2, 0.3, 0.25];
    let finite_simple = FnSpec::Simple {
        pieces: vec![
            (2.0, FiniteSubset::new(5, [0, 3]).unwrap().into()),
            (-1.0, FiniteSubset::new(5, [1]).unwrap().into()),
            (0.5, FiniteSubset::new(5, [2, 4]).unwrap().into()),
        ],
    };
    vec![
        case("x on lebesgue2", x.clone(), l2.clone(), None, 0.0),
        case("x^2 on lebesgue2", x2.clone(), l2.clone(), None, 0.0),
        case(
            "exp on lebesgue2 centered 0.5",
            FnSpec::Exp,
            l2.clone(),
            None,
            0.5,
        ),
        case(
            "sin on lebesgue2 over [0,0.6)",
            FnSpec::Sin,
            l2.clone(),
            Some((0.0, 0.6)),
            0.0,
        ),
        case("cos on lebesgue2", FnSpec::Cos, l2.clone(), None, 0.0),
        case("tent on lebesgue2", FnSpec::Tent, l2.clone(), None, 0.0),
        case(
            "x - x^2 on lebesgue2",
            FnSpec::Poly {
                coeffs: vec![0.0, 1.0, -1.0],
            },
            l2.clone(),
            None,
            0.0,
        ),
        case(
            "cosh_sqrt2 on lebesgue2 centered 1.2",
            FnSpec::CoshSqrt2,
            l2,
            None,
            1.2,
        ),
        case("x on destructive 3/4", x.clone(), d(0.75), None, 0.0),
        case(
            "x on destructive 3/4 over [0,0.75)",
            x.clone(),
            d(0.75),
            Some((0.0, 0.75)),
            0.0,
        ),
        case("x^2 on destructive 3/4", x2, d(0.75), None, 0.0),
        case("x on destructive 1/2", x.clone(), d(0.5), None, 0.0),
        case(
            "x on destructive 1/2 over [0.2,0.9)",
            x.clone(),
            d(0.5),
            Some((0.2, 0.9)),
            0.0,
        ),
        case(
            "exp on destructive 0.6 centered 1.5",
            FnSpec::Exp,
            d(0.6),
            None,
            1.5,
        ),
        case("tent on destructive 3/4", FnSpec::Tent, d(0.75), None, 0.0),
        case(
            "0.3 - 2x + 2x^2 on destructive 0.6 centered -0.2",
            FnSpec::Poly {
                coeffs: vec![0.3, -2.0, 2.0],
            },
            d(0.6),
            None,
            -0.2,
        ),
        case(
            "x on lebesgue centered 0.3",
            x,
            QMeasure::PlainLebesgue,
            None,
            0.3,
        ),
        case(
            "sin on lebesgue over [0.1,0.8)",
            FnSpec::Sin,
            QMeasure::PlainLebesgue,
            Some((0.1, 0.8)),
            0.0,
        ),
        case(
            "heads on coin:3",
            FnSpec::Heads,
            QMeasure::squared_counting(3).unwrap(),
            None,
            0.0,
        ),
        case(
            "finite simple on squared weights centered 0.7",
            finite_simple,
            QMeasure::squared_measure(weights).unwrap(),
            None,
            0.7,
        ),
    ]
}

pub const ORACLE_N: usize = 1_000_000;
pub const ORACLE_TOL: f64 = 1e-4;

/// Engine and oracle values for one corpus case.
pub fn evaluate_oracle_case(case: &OracleCase, cfg: &QuadratureConfig, n: usize) -> (f64, f64) {
    if let Some(size) = finite_size(&case.mu) {
        let f = case.f.to_simple(Domain::Finite(size)).unwrap();
        let values: Vec<f64> = (0..size).map(|i| f.value_at_index(i).unwrap()).collect();
        let engine = integrate_simple(&f, &case.mu, case.center).unwrap();
        let oracle = riemann_sum_oracle_finite(&values, &case.mu, case.center, n).unwrap();
        return (engine, oracle);
    }
    let f = case.f.to_function().unwrap();
    let support = case
        .support
        .map(|(lo, hi)| IntervalSet::interval(lo, hi).unwrap());
    let engine = match &support {
        Some(a) => integrate_restricted(&f, a, &case.mu, case.center, cfg).unwrap(),
        None => integrate(&f, &case.mu, case.center, cfg).unwrap(),
    };
    let oracle =
        riemann_sum_oracle(|x| f.eval(x), &case.mu, support.as_ref(), case.center, n).unwrap();
    (engine, oracle)
}

/// Functions with known classical integrals over `[0, 1]`.
pub fn classical_corpus() -> Vec<(FnSpec, f64)> {
    let s2 = std::f64::consts::SQRT_2;
    vec![
        (FnSpec::Monomial { n: 1 }, 0.5),
        (FnSpec::Monomial { n: 2 }, 1.0 / 3.0),
        (FnSpec::Monomial { n: 5 }, 1.0 / 6.0),
        (FnSpec::Exp, std::f64::consts::E - 1.0),
        (FnSpec::Sin, 1.0 - 1f64.cos()),
        (FnSpec::Cos, 1f64.sin()),
        (FnSpec::CoshSqrt2, s2.sinh() / s2),
        (FnSpec::Tent, 0.5),
        (
            FnSpec::Poly {
                coeffs: vec![0.0, 1.0, -1.0],
            },
            1.0 / 6.0,
        ),
        (
            FnSpec::Poly {
                coeffs: vec![0.3, -2.0, 2.0],
            },
            0.3 - 1.0 + 2.0 / 3.0,
        ),
        (
            FnSpec::Poly {
                coeffs: vec![-1.0, 2.0],
            },
            0.0,
        ),
    ]
}
