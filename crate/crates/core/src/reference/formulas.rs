//! Closed-form values of worked quantum integrals.
//!
//! Unless stated otherwise the integral is over `[0, b]` (or `[a, b]`) with
//! center 0. Functions with two branches are exposed whole so their
//! continuity at the branch point can be tested.

use std::f64::consts::SQRT_2;

/// Destructive pairs at offset 3/4, `∫₀^b x dμ`.
pub fn destr34_x(b: f64) -> f64 {
    if b <= 0.75 {
        b * b / 2.0
    } else {
        1.5 * b - 9.0 / 16.0 - b * b / 2.0
    }
}

/// Destructive pairs at offset 3/4, `∫₀^b xⁿ dμ`.
pub fn destr34_xn(n: u32, b: f64) -> f64 {
    let m = n as i32 + 1;
    if b <= 0.75 {
        b.powi(m) / m as f64
    } else {
        (b.powi(m) - 2.0 * (b - 0.75).powi(m)) / m as f64
    }
}

/// `∫₀^b xⁿ dx − ∫₀^b xⁿ dμ` at offset 3/4, for `b ≥ 3/4`.
pub fn destr34_xn_deviation(n: u32, b: f64) -> f64 {
    let m = n as i32 + 1;
    2.0 * (b - 0.75).max(0.0).powi(m) / m as f64
}

/// Destructive pairs at offset 1/2, `∫_a^b x dμ`.
pub fn destr12_x(a: f64, b: f64) -> f64 {
    if b - a <= 0.5 {
        (b * b - a * a) / 2.0
    } else {
        a * a / 2.0 - b * b / 2.0 + b - 0.25
    }
}

/// `Δ = ∫_a^b x dx − ∫_a^b x dμ` at offset 1/2, for `b − a ≥ 1/2`.
pub fn destr12_deviation(a: f64, b: f64) -> f64 {
    b * b - a * a - b + 0.25
}

/// (Lebesgue)², `2/((n+1)(n+2)) − aⁿ(1 − 2n/(n+1)·a + 2n/(n+2)·a²)`.
///
/// The substitution `λ = tⁿ` behind this expression starts the `t` range at
/// `a` instead of `a^{1/n}`, so it equals `∫₀¹ xⁿ dμ_c` at the center
/// `c = aⁿ`. The two readings coincide for `n = 1`; see
/// [`leb2_xn_centered_at`] for the center `a` itself.
pub fn leb2_xn_centered(n: u32, a: f64) -> f64 {
    let nf = n as f64;
    2.0 / ((nf + 1.0) * (nf + 2.0))
        - a.powi(n as i32) * (1.0 - 2.0 * nf / (nf + 1.0) * a + 2.0 * nf / (nf + 2.0) * a * a)
}

/// (Lebesgue)², `∫₀¹ xⁿ dμ_a` for a center `a ∈ [0, 1]`:
/// `(1 − a) − 2n/(n+1)·(1 − a^{1+1/n}) + n/(n+2)·(1 − 2a^{1+2/n})`.
pub fn leb2_xn_centered_at(n: u32, a: f64) -> f64 {
    let nf = n as f64;
    (1.0 - a) - 2.0 * nf / (nf + 1.0) * (1.0 - a.powf(1.0 + 1.0 / nf))
        + nf / (nf + 2.0) * (1.0 - 2.0 * a.powf(1.0 + 2.0 / nf))
}

/// (Lebesgue)², `∫_a^b xⁿ dμ`.
pub fn leb2_xn_interval(n: u32, a: f64, b: f64) -> f64 {
    let nf = n as f64;
    let k = n as i32;
    2.0 * (b.powi(k + 2) - a.powi(k + 2)) / ((nf + 1.0) * (nf + 2.0))
        - 2.0 * a.powi(k + 1) * (b - a) / (nf + 1.0)
}

/// (Lebesgue)², `∫_a^b eˣ dμ`.
pub fn leb2_exp(a: f64, b: f64) -> f64 {
    2.0 * (b.exp() - a.exp() - a.exp() * (b - a))
}

/// (Lebesgue)², `∫₀^b (x + x²) dμ`.
pub fn leb2_sum_xx2(b: f64) -> f64 {
    b.powi(3) / 3.0 + b.powi(4) / 6.0
}

/// (Lebesgue)², `∫₀^b (x − x²) dμ`; the function turns at 1/2.
pub fn leb2_x_minus_x2(b: f64) -> f64 {
    if b <= 0.5 {
        b.powi(3) / 3.0 - b.powi(4) / 6.0
    } else {
        -1.0 / 24.0 + b / 3.0 - b * b + 5.0 / 3.0 * b.powi(3) - 5.0 / 6.0 * b.powi(4)
    }
}

/// (Lebesgue)², `∫₀^b tent dμ` for the tent `2x` / `2 − 2x`.
pub fn leb2_tent(b: f64) -> f64 {
    if b <= 0.5 {
        2.0 / 3.0 * b.powi(3)
    } else {
        1.0 / 3.0 - 2.0 * b + 4.0 * b * b - 2.0 * b.powi(3)
    }
}

/// `2(1 − cos b)`: the value `2∫₀^b∫₀^t cos` that the double-integral
/// identity would assign to `∫₀^b cos dμ`.
pub fn leb2_cos_double_integral(b: f64) -> f64 {
    2.0 * (1.0 - b.cos())
}

/// (Lebesgue)², `∫₀^b cos dμ`. For decreasing `f` the level sets inside
/// `[0, b)` are initial segments, which gives `∫₀^b 2t f(t) dt`.
pub fn leb2_cos(b: f64) -> f64 {
    2.0 * (b * b.sin() + b.cos() - 1.0)
}

/// (Lebesgue)², `∫₀^b sin dμ`.
pub fn leb2_sin(b: f64) -> f64 {
    2.0 * (b - b.sin())
}

/// (Lebesgue)², `∫₀^b cosh(√2 x) dμ`.
pub fn leb2_cosh_sqrt2(b: f64) -> f64 {
    (SQRT_2 * b).cosh() - 1.0
}

/// (Lebesgue)², `∫_a^b 1 dμ`.
pub fn leb2_one(a: f64, b: f64) -> f64 {
    (b - a) * (b - a)
}
