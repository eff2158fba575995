//! Quantum measures and the quantum integral.
//!
//! A q-measure is a set function that is additive at grade 2: for pairwise
//! disjoint `A`, `B`, `C`,
//!
//! ```text
//! μ(A ∪ B ∪ C) = μ(A ∪ B) + μ(A ∪ C) + μ(B ∪ C) − μ(A) − μ(B) − μ(C)
//! ```
//!
//! The crate provides concrete q-measures on `[0, 1]` and on finite outcome
//! spaces ([`QMeasure`]), an adaptive layer-cake integrator
//! ([`integrate`], [`integrate_restricted`], [`integrate_simple`]), exact
//! quantum-coin expectations ([`coin`]) and a catalog of closed forms used
//! for verification ([`reference`]).
//!
//! ```
//! use quantum_integral::{integrate, FnSpec, QMeasure, QuadratureConfig};
//!
//! let f = FnSpec::Monomial { n: 1 }.to_function().unwrap();
//! let value = integrate(&f, &QMeasure::LebesgueSquared, 0.0, &QuadratureConfig::default()).unwrap();
//! assert!((value - 1.0 / 3.0).abs() < 1e-10);
//! ```

pub mod coin;
pub mod descriptor;
pub mod error;
pub mod finite;
pub mod function;
pub mod integrator;
pub mod interval;
pub mod measure;
pub mod quadrature;
pub mod reference;
pub mod simple;

pub use coin::CoinModel;
pub use descriptor::FnSpec;
pub use error::{Error, Result};
pub use finite::FiniteSubset;
pub use function::{PiecewiseMonotoneFn, Segment, Trend};
pub use integrator::{
    integrate, integrate_power, integrate_restricted, integrate_simple, integrate_via_g,
    riemann_sum_oracle, Transform,
};
pub use interval::IntervalSet;
pub use measure::{grade2_residual, Domain, MeasurableSet, QMeasure, Restricted, SetFunction};
pub use quadrature::QuadratureConfig;
pub use simple::{step_function, SimpleFunction};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/coin.md")]
    mod coin {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
