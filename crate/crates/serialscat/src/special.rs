//! Digamma and friends, real argument only.

use crate::real::Real;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ψ(x). Poles at x = 0, −1, −2, … return NaN.
pub fn digamma<T: Real>(x: T) -> T {
    if x <= T::zero() {
        if x == x.floor() {
            return T::nan();
        }
        // ψ(1 − x) − ψ(x) = π cot πx
        let pi = T::PI();
        return digamma(T::one() - x) - pi / (pi * x).tan();
    }
    let mut acc = T::zero();
    let mut y = x;
    while y < T::lit(10.0) {
        acc = acc - y.recip();
        y = y + T::one();
    }
    acc + digamma_asymptotic(y)
}

/// ln y − 1/2y − Σ B₂ₙ/(2n y²ⁿ); accurate to double precision for y ≥ 10.
pub(crate) fn digamma_asymptotic<T: Real>(y: T) -> T {
    let z = (y * y).recip();
    let series = z
        * (T::lit(1.0 / 12.0)
            - z * (T::lit(1.0 / 120.0)
                - z * (T::lit(1.0 / 252.0) - z * (T::lit(1.0 / 240.0) - z * (T::lit(1.0 / 132.0) - z * T::lit(691.0 / 32760.0))))));
    y.ln() - (y * T::lit(2.0)).recip() - series
}

/// Σ_{j≥0} (−1)^j/(x + j) = ½[ψ((x+1)/2) − ψ(x/2)]
pub fn alt_harmonic<T: Real>(x: T) -> T {
    let h = T::lit(0.5);
    h * (digamma((x + T::one()) * h) - digamma(x * h))
}

/// H_n = ψ(n+1) + γ
pub fn harmonic<T: Real>(n: T) -> T {
    digamma(n + T::one()) + T::lit(EULER_GAMMA)
}
