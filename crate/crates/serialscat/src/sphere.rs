//! Unit sphere with two leads attached at the poles θ = 0, π, coupled by the
//! contact-radius boundary conditions A = 1/2ρ, B = √(2π/ρ), C = 1/√(2πρ),
//! D = −ln ρ. Only m = 0 harmonics reach the leads, so everything reduces to
//! the two spectral sums g(k) and Z(k) over λ_l = l(l+1).
//!
//! Both sums are evaluated as partial sums to `l_max` plus an analytic tail.
//! The summand splits as (2l+1)/(l(l+1) − E) = 1/(l − s₁) + 1/(l − s₂) with
//! s₁,₂ = (−1 ± √(1+4E))/2, which gives digamma closed forms ([`g_closed`],
//! [`z_closed`]) used as cross-checks.

use crate::error::{Error, Result};
use crate::real::{cr, Real, C};
use crate::scatter::{element_data, s_from_l, ElementData, LTransfer, SMatrix};
use crate::special::{alt_harmonic, digamma, EULER_GAMMA};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereParams<T> {
    /// contact radius
    pub rho: T,
    /// lead spacing when used as an array element
    pub ell: T,
    /// series truncation; `None` picks max(5000, 50⌈k²⌉)
    pub l_max: Option<usize>,
    pub c_g: T,
}

impl<T: Real> SphereParams<T> {
    pub fn new(rho: T) -> Self {
        SphereParams { rho, ell: T::one(), l_max: None, c_g: T::zero() }
    }

    pub fn with_l_max(mut self, l_max: usize) -> Self {
        self.l_max = Some(l_max);
        self
    }

    pub fn truncation(&self, k: T) -> usize {
        self.l_max.unwrap_or_else(|| (50 * (k * k).ceil().to_usize().unwrap_or(0)).max(5000))
    }

    fn check(&self) -> Result<()> {
        if !(self.rho > T::zero()) {
            return Err(Error::Invalid("contact radius must be positive".into()));
        }
        if self.l_max.is_some_and(|l| l < 10) {
            return Err(Error::Invalid("l_max must be at least 10".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSeries<T> {
    pub g: T,
    pub z: T,
    /// g² − Z², formed as (g − Z)(g + Z)
    pub delta: T,
    /// bound on the truncation + summation error of g and Z
    pub tail_bound: T,
    pub l_max: usize,
}

fn roots<T: Real>(e: T) -> (T, T) {
    let q = (T::one() + T::lit(4.0) * e).sqrt();
    let h = T::lit(0.5);
    ((q - T::one()) * h, -(q + T::one()) * h)
}

fn eigen_guard<T: Real>(e: T) -> Result<()> {
    let l0 = roots(e).0.round().to_usize().unwrap_or(0);
    for l in l0.saturating_sub(1).max(1)..=l0 + 1 {
        let lam = T::usize(l * (l + 1));
        if (lam - e).abs() < T::tol(1e-12) * lam {
            return Err(Error::EigenvalueHit(l));
        }
    }
    Ok(())
}

// Neumaier-compensated running sum; also tracks Σ|x| for the rounding bound.
struct Acc<T> {
    s: T,
    c: T,
    abs: T,
}

impl<T: Real> Acc<T> {
    fn new() -> Self {
        Acc { s: T::zero(), c: T::zero(), abs: T::zero() }
    }

    fn add(&mut self, x: T) {
        let t = self.s + x;
        self.c = self.c + if self.s.abs() >= x.abs() { (self.s - t) + x } else { (x - t) + self.s };
        self.s = t;
        self.abs = self.abs + x.abs();
    }

    fn value(&self) -> T {
        self.s + self.c
    }
}

/// Σ_{j≥0} (−1)^j/(y + j) for large y, and the size of the first dropped term.
fn alt_tail<T: Real>(y: T) -> (T, T) {
    let z = y.recip();
    let z2 = z * z;
    let v = z * T::lit(0.5)
        + z2 * (T::lit(0.25) + z2 * (-T::lit(0.125) + z2 * (T::lit(0.25) + z2 * (-T::lit(17.0 / 16.0)))));
    (v, T::lit(31.0 / 4.0) * z2.powi(5))
}

/// ψ(y) for large y, and the size of the first dropped term.
fn psi_tail<T: Real>(y: T) -> (T, T) {
    (crate::special::digamma_asymptotic(y), T::lit(1.0 / 12.0) * y.powi(-14))
}

fn four_pi<T: Real>() -> T {
    T::lit(4.0) * T::PI()
}

/// g(k) = (1/4π) Σ_{l≥1} (−1)^l (2l+1)/(l(l+1) − k²), returned with a bound
/// on the error of the (tail-corrected) value.
pub fn g_series<T: Real>(k: T, l_max: usize) -> Result<(T, T)> {
    let e = k * k;
    eigen_guard(e)?;
    let (s1, s2) = roots(e);
    let mut acc = Acc::new();
    let mut sign = -T::one();
    for l in 1..=l_max {
        let lt = T::usize(l);
        acc.add(sign * (T::lit(2.0) * lt + T::one()) / (lt * (lt + T::one()) - e));
        sign = -sign;
    }
    // Σ_{l>n} (−1)^l f(l) = (−1)^{n+1} Σ_j (−1)^j f(n+1+j)
    let n1 = T::usize(l_max + 1);
    let (a, ea) = alt_tail(n1 - s1);
    let (b, eb) = alt_tail(n1 - s2);
    let tail = if l_max % 2 == 0 { -(a + b) } else { a + b };
    acc.add(tail);
    let bound = ea + eb + T::epsilon() * T::lit(4.0) * acc.abs;
    Ok((acc.value() / four_pi(), bound / four_pi()))
}

/// Z(k) = (1/4π) Σ_{l≥1} [(2l+1)/(l(l+1) − k²) − Σ_{j=0}^{2l} 1/(l²+j+1)]
///        − ln ρ/2π + c_G.
/// The inner sums telescope to H_{(n+1)²} − 1, whose divergence cancels the
/// spectral tail; what is left past l_max is 1 − γ − ψ(n+1−s₁) − ψ(n+1−s₂).
pub fn z_series<T: Real>(k: T, rho: T, l_max: usize, c_g: T) -> Result<(T, T)> {
    let e = k * k;
    eigen_guard(e)?;
    let (s1, s2) = roots(e);
    let mut acc = Acc::new();
    for l in 1..=l_max {
        let lt = T::usize(l);
        acc.add((T::lit(2.0) * lt + T::one()) / (lt * (lt + T::one()) - e));
    }
    let n1 = T::usize(l_max + 1);
    let (a, ea) = psi_tail(n1 - s1);
    let (b, eb) = psi_tail(n1 - s2);
    acc.add(T::one() - T::lit(EULER_GAMMA));
    acc.add(-a);
    acc.add(-b);
    let bound = ea + eb + T::epsilon() * T::lit(4.0) * acc.abs;
    let z = acc.value() / four_pi() - rho.ln() / (T::lit(2.0) * T::PI()) + c_g;
    Ok((z, bound / four_pi()))
}

/// g(k) through digamma functions, no truncation.
pub fn g_closed<T: Real>(k: T) -> Result<T> {
    let e = k * k;
    eigen_guard(e)?;
    let (s1, s2) = roots(e);
    Ok(-(alt_harmonic(T::one() - s1) + alt_harmonic(T::one() - s2)) / four_pi())
}

/// Z(k) through digamma functions, no truncation.
pub fn z_closed<T: Real>(k: T, rho: T, c_g: T) -> Result<T> {
    let e = k * k;
    eigen_guard(e)?;
    let (s1, s2) = roots(e);
    let s = T::one() - T::lit(EULER_GAMMA) - digamma(T::one() - s1) - digamma(T::one() - s2);
    Ok(s / four_pi() - rho.ln() / (T::lit(2.0) * T::PI()) + c_g)
}

pub fn sphere_series<T: Real>(p: &SphereParams<T>, k: T) -> Result<SphereSeries<T>> {
    p.check()?;
    let l_max = p.truncation(k);
    let (g, eg) = g_series(k, l_max)?;
    let (z, ez) = z_series(k, p.rho, l_max, p.c_g)?;
    Ok(SphereSeries { g, z, delta: (g - z) * (g + z), tail_bound: eg.max(ez), l_max })
}

/// The real, unimodular transfer matrix of the sphere with identical junctions:
/// (1/g)·[[Z + πΔ, −2πρΔ], [(1/π − 2Z − πΔ)/2ρ, Z + πΔ]].
pub fn sphere_transfer_from<T: Real>(s: &SphereSeries<T>, rho: T) -> LTransfer<T> {
    let pi = T::PI();
    let two = T::lit(2.0);
    let diag = (s.z + pi * s.delta) / s.g;
    LTransfer::real([
        [diag, -two * pi * rho * s.delta / s.g],
        [(pi.recip() - two * s.z - pi * s.delta) / (two * rho * s.g), diag],
    ])
}

pub fn sphere_transfer<T: Real>(p: &SphereParams<T>, k: T) -> Result<LTransfer<T>> {
    Ok(sphere_transfer_from(&sphere_series(p, k)?, p.rho))
}

pub fn sphere_transmission<T: Real>(p: &SphereParams<T>, k: T) -> Result<SMatrix<T>> {
    if !(k > T::zero()) {
        return Err(Error::Invalid("sphere transmission needs k > 0".into()));
    }
    s_from_l(&sphere_transfer(p, k)?, cr(k))
}

/// The closed single-sphere expression
/// t = 4πikρg / (1 − 2πZ(1+2ikρ) − π²Δ(1+2ikρ)²).
/// It equals −t of [`sphere_transmission`]: the two differ by a global sign.
pub fn sphere_quoted_t<T: Real>(s: &SphereSeries<T>, rho: T, k: T) -> C<T> {
    let pi = T::PI();
    let a = C::new(T::one(), T::lit(2.0) * k * rho);
    let num = C::new(T::zero(), four_pi::<T>() * k * rho * s.g);
    num / (cr(T::one()) - a * (T::lit(2.0) * pi * s.z) - a * a * (pi * pi * s.delta))
}

pub fn sphere_element_data<T: Real>(p: &SphereParams<T>, k: T) -> Result<ElementData<T>> {
    Ok(element_data(&sphere_transfer(p, k)?, k))
}

/// Z + (−1)^l g as a function of E, the factor of Δ that changes sign
/// inside (l(l−1), l(l+1)).
pub fn resonance_factor<T: Real>(p: &SphereParams<T>, l: usize, e: T) -> Result<T> {
    let s = sphere_series(p, e.sqrt())?;
    Ok(if l % 2 == 0 { s.z + s.g } else { s.z - s.g })
}

/// μ_l: the zero of Z + (−1)^l g on (l(l−1), l(l+1)), by bisection.
pub fn mu_root<T: Real>(p: &SphereParams<T>, l: usize) -> Result<T> {
    if l == 0 {
        return Err(Error::NoRoot(0));
    }
    let lt = T::usize(l);
    let pad = T::tol(1e-9) * lt * lt;
    let mut a = T::usize(l * (l - 1)) + pad;
    let mut b = T::usize(l * (l + 1)) - pad;
    let fa = resonance_factor(p, l, a)?;
    let fb = resonance_factor(p, l, b)?;
    if !(fa < T::zero() && fb > T::zero()) {
        return Err(Error::NoRoot(l));
    }
    for _ in 0..200 {
        let m = (a + b) * T::lit(0.5);
        if m <= a || m >= b || b - a <= T::tol(1e-14) * b {
            break;
        }
        if resonance_factor(p, l, m)? < T::zero() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a + b) * T::lit(0.5))
}

/// μ_l for every l in the range that has one.
pub fn mu_roots<T: Real>(p: &SphereParams<T>, ls: std::ops::RangeInclusive<usize>) -> Vec<(usize, T)> {
    ls.filter_map(|l| mu_root(p, l).ok().map(|m| (l, m))).collect()
}

/// Indices of the strict local maxima of a sampled curve.
pub fn local_maxima<T: Real>(y: &[T]) -> Vec<usize> {
    (1..y.len().saturating_sub(1)).filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1]).collect()
}

/// Running average of a sampled |t|² curve: at each grid point, the mean of
/// the curve over the k-span covered by its ten nearest peaks. With fewer
/// than ten peaks the whole grid is the window.
pub fn averaged_transmission<T: Real>(ks: &[T], t2: &[T]) -> Vec<T> {
    assert_eq!(ks.len(), t2.len());
    let peaks = local_maxima(t2);
    let mean = |lo: usize, hi: usize| -> T {
        if hi <= lo {
            return t2[lo];
        }
        let mut s = T::zero();
        for i in lo..hi {
            s = s + (t2[i] + t2[i + 1]) * (ks[i + 1] - ks[i]);
        }
        s / (T::lit(2.0) * (ks[hi] - ks[lo]))
    };
    if peaks.len() < 10 {
        let m = mean(0, ks.len().saturating_sub(1));
        return vec![m; ks.len()];
    }
    let mut out = Vec::with_capacity(ks.len());
    let mut lo = 0usize;
    for &k in ks {
        // slide a window of ten consecutive peaks to the one nearest to k
        while lo + 10 < peaks.len() && (ks[peaks[lo + 10]] - k).abs() < (k - ks[peaks[lo]]).abs() {
            lo += 1;
        }
        out.push(mean(peaks[lo], peaks[lo + 9]));
    }
    out
}

/// |t|² of a δ′ interaction of strength β: 1/(1 + (kβ/2)²).
pub fn delta_prime_reference<T: Real>(beta: T, k: T) -> Result<T> {
    Ok(s_from_l(&LTransfer::delta_prime(beta), cr(k))?.transmission())
}

/// Strength β for which the δ′ curve passes through (k, t2).
pub fn calibrate_delta_prime<T: Real>(k: T, t2: T) -> Result<T> {
    if !(t2 > T::zero() && t2 <= T::one() && k > T::zero()) {
        return Err(Error::Invalid("calibration point needs 0 < |t|² ≤ 1, k > 0".into()));
    }
    Ok(T::lit(2.0) / k * (t2.recip() - T::one()).sqrt())
}
