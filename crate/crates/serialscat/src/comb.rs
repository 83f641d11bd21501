//! Comb graph: N Dirichlet-terminated teeth of length L attached to a line
//! at spacing ℓ through the real coupling (b, c, d). Each tooth acts on the
//! line as a δ of momentum-dependent strength 2kβ(k).

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::real::{ci, cis, cr, one, Real, C};
use crate::scatter::{s_from_l, LTransfer, SMatrix};
use crate::serial::{band_intervals, cheb_pair_scaled, BandIntervals, SerialResult};
use crate::tooth::{solve_tooth, Potential, ToothSolution};

#[derive(Debug, Clone)]
pub struct CombParams<T> {
    pub b: T,
    pub c: T,
    pub d: T,
    /// tooth length L
    pub len: T,
    pub ell: T,
    pub potential: Potential<T>,
    /// half-width in k of the neighbourhood of a β pole treated as exact
    /// full reflection
    pub pole_eps: T,
}

impl<T: Real> CombParams<T> {
    pub fn new(b: T, c: T, d: T, len: T, ell: T) -> Self {
        CombParams { b, c, d, len, ell, potential: Potential::Zero, pole_eps: T::lit(1e-9) }
    }

    pub fn with_potential(mut self, v: Potential<T>) -> Self {
        self.potential = v;
        self
    }

    pub fn tooth(&self, k: C<T>) -> Result<ToothSolution<T>> {
        solve_tooth(&self.potential, self.len, k)
    }

    /// c u′(0) − u(0); β has a pole where it vanishes.
    pub fn stub_denominator(&self, k: C<T>) -> Result<C<T>> {
        let s = self.tooth(k)?;
        Ok(s.du0 * self.c - s.u0)
    }
}

fn beta_from<T: Real>(p: &CombParams<T>, s: &ToothSolution<T>, k: C<T>) -> C<T> {
    let two_k = k * T::lit(2.0);
    let w = s.du0 * p.c - s.u0;
    cr(p.d) / two_k + s.du0 * (p.b * p.b) / (two_k * w)
}

/// β(k) for complex k.
pub fn comb_beta_complex<T: Real>(p: &CombParams<T>, k: C<T>) -> Result<C<T>> {
    let s = p.tooth(k)?;
    Ok(beta_from(p, &s, k))
}

/// β(k) on the real axis; ±∞ exactly at a decoupled-stub eigenvalue.
pub fn comb_beta<T: Real>(p: &CombParams<T>, k: T) -> Result<T> {
    let s = p.tooth(cr(k))?;
    let w = (s.du0 * p.c - s.u0).re;
    let two_k = T::lit(2.0) * k;
    Ok(p.d / two_k + p.b * p.b * s.du0.re / (two_k * w))
}

/// The tooth as a value/derivative transfer: a δ of strength 2kβ.
pub fn comb_transfer<T: Real>(p: &CombParams<T>, k: T) -> Result<LTransfer<T>> {
    let beta = comb_beta(p, k)?;
    if !beta.is_finite() {
        return Err(Error::FullReflection);
    }
    Ok(LTransfer::delta(T::lit(2.0) * k * beta))
}

pub fn comb_smatrix<T: Real>(p: &CombParams<T>, k: T) -> Result<SMatrix<T>> {
    s_from_l(&comb_transfer(p, k)?, cr(k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombAmplitudes<T> {
    pub amp: SerialResult<T>,
    pub beta: T,
    /// k fell within `pole_eps` of a β pole; amplitudes are the limit values
    pub at_pole: bool,
}

fn full_reflection<T: Real>(n: usize, ell: T, k: T) -> SerialResult<T> {
    let z = cr(T::zero());
    let back = cis(-T::lit(2.0) * T::usize(n - 1) * k * ell);
    SerialResult {
        t_n: z,
        r_n: -one::<T>(),
        t_rev_n: z,
        r_rev_n: -back,
        zeta: T::infinity(),
        u_val: T::infinity(),
        in_band: false,
        n,
        ell,
        k,
    }
}

/// Is k within `pole_eps` of a zero of c u′(0) − u(0)?
fn near_beta_pole<T: Real>(p: &CombParams<T>, k: T, s: &ToothSolution<T>) -> Result<bool> {
    if p.b == T::zero() {
        return Ok(false);
    }
    let w = (s.du0 * p.c - s.u0).re;
    if w == T::zero() {
        return Ok(true);
    }
    // amplitude of the tooth solution near x = 0
    let size = (s.du0.re * p.c).abs() + s.u0.re.hypot(s.du0.re / k);
    if w.abs() > T::lit(1e-4) * size {
        return Ok(false);
    }
    let lo = p.stub_denominator(cr(k - p.pole_eps))?.re;
    let hi = p.stub_denominator(cr(k + p.pole_eps))?.re;
    Ok(lo.signum() != hi.signum() || lo == T::zero() || hi == T::zero())
}

/// N-tooth amplitudes from the Chebyshev closed form with R = 1+iβ, S = iβ:
/// t_N = −ε^{1−N}/D, r_N = iβU_{N−1}(ζ)/D, D = εU_{N−2}(ζ) − (1+iβ)U_{N−1}(ζ).
pub fn comb_amplitudes<T: Real>(p: &CombParams<T>, n: usize, k: T) -> Result<CombAmplitudes<T>> {
    assert!(n >= 1, "need at least one tooth");
    let s = p.tooth(cr(k))?;
    if near_beta_pole(p, k, &s)? {
        return Ok(CombAmplitudes { amp: full_reflection(n, p.ell, k), beta: T::infinity(), at_pole: true });
    }
    let beta = beta_from(p, &s, cr(k)).re;
    let kl = k * p.ell;
    let zeta = kl.cos() + beta * kl.sin();
    let (a, b, e) = cheb_pair_scaled(n - 1, zeta);
    let eps = cis(kl);
    let ib = ci(beta);
    let den = eps * a - (one::<T>() + ib) * b;
    let scale = T::lit(2.0).powi(-e);
    let t_n = -cis(-T::usize(n - 1) * kl) * scale / den;
    let r_n = ib * b / den;
    let r_rev_n = r_n * cis(-T::lit(2.0) * T::usize(n - 1) * kl);
    let u_val = if e == 0 { b } else { b * T::lit(2.0).powi(e) };
    let amp = SerialResult { t_n, r_n, t_rev_n: t_n, r_rev_n, zeta, u_val, in_band: zeta.abs() <= T::one(), n, ell: p.ell, k };
    Ok(CombAmplitudes { amp, beta, at_pole: false })
}

/// Independent oracle: the two tridiagonal systems obtained by matching
/// plane waves tooth by tooth, solved densely.
///
/// Reflection: f_0..f_N with (1+iβ)f_0 − f_1 = −iβ,
/// εf_{j−1} − 2ζf_j + ε̄f_{j+1} = 0, f_N = 0; r_N = f_0.
/// Transmission: e_0..e_N with e_0 = 1, ε̄e_j − 2ζe_{j+1} + εe_{j+2} = 0,
/// (1+iβ)e_N − e_{N−1} = 0; t_N = e_N.
pub fn comb_direct_oracle<T: Real>(p: &CombParams<T>, n: usize, k: T) -> Result<SerialResult<T>> {
    assert!(n >= 1, "need at least one tooth");
    let beta = comb_beta(p, k)?;
    if !beta.is_finite() {
        return Err(Error::Singular);
    }
    let kl = k * p.ell;
    let zeta = kl.cos() + beta * kl.sin();
    let eps = cis(kl);
    let ib = ci(beta);
    let z = cr(T::zero());
    let two_zeta = cr(T::lit(2.0) * zeta);
    let m = n + 1;

    let mut a = vec![vec![z; m]; m];
    let mut rhs = vec![z; m];
    a[0][0] = one::<T>() + ib;
    a[0][1] = -one::<T>();
    rhs[0] = -ib;
    for j in 1..n {
        a[j][j - 1] = eps;
        a[j][j] = -two_zeta;
        a[j][j + 1] = eps.conj();
    }
    a[n][n] = one();
    let f = solve(a, rhs)?;

    let mut a = vec![vec![z; m]; m];
    let mut rhs = vec![z; m];
    a[0][0] = one();
    rhs[0] = one();
    for j in 0..n - 1 {
        a[j + 1][j] = eps.conj();
        a[j + 1][j + 1] = -two_zeta;
        a[j + 1][j + 2] = eps;
    }
    a[n][n - 1] = -one::<T>();
    a[n][n] = one::<T>() + ib;
    let e = solve(a, rhs)?;

    let t_n = e[n];
    let r_n = f[0];
    let r_rev_n = r_n * cis(-T::lit(2.0) * T::usize(n - 1) * kl);
    let u_val = crate::serial::cheb_u(n as i64 - 1, zeta);
    Ok(SerialResult { t_n, r_n, t_rev_n: t_n, r_rev_n, zeta, u_val, in_band: zeta.abs() <= T::one(), n, ell: p.ell, k })
}

/// Decoupled-stub eigenmomenta: roots of u(0) − c u′(0) in `range`, by grid
/// scan and bisection.
pub fn stub_spectrum<T: Real>(p: &CombParams<T>, range: (T, T), grid: usize) -> Result<Vec<T>> {
    let f = |k: T| -> Result<T> { Ok(-p.stub_denominator(cr(k))?.re) };
    let grid = grid.max(2);
    let (lo, hi) = range;
    let h = (hi - lo) / T::usize(grid - 1);
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa)?;
    if fa == T::zero() {
        out.push(xa);
    }
    for i in 1..grid {
        let xb = if i == grid - 1 { hi } else { lo + h * T::usize(i) };
        let fb = f(xb)?;
        if fb == T::zero() {
            out.push(xb);
        } else if fa != T::zero() && fa.signum() != fb.signum() {
            let (mut a, mut b, mut fl) = (xa, xb, fa);
            for _ in 0..200 {
                let m = (a + b) / T::lit(2.0);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m)?;
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fl.signum() {
                    a = m;
                    fl = fm;
                } else {
                    b = m;
                }
            }
            out.push((a + b) / T::lit(2.0));
        }
        xa = xb;
        fa = fb;
    }
    Ok(out)
}

/// Bloch discriminant cos kℓ + β sin kℓ; `None` at β poles.
pub fn comb_discriminant<T: Real>(p: &CombParams<T>, k: T) -> Option<T> {
    let beta = comb_beta(p, k).ok()?;
    let z = (k * p.ell).cos() + beta * (k * p.ell).sin();
    z.is_finite().then_some(z)
}

pub fn comb_bands<T: Real>(p: &CombParams<T>, range: (T, T), grid: usize) -> BandIntervals<T> {
    band_intervals(|k| comb_discriminant(p, k), range, grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEnergyReport<T> {
    /// d·w₀ + b²u′(0) at k = 0 with w₀ = c u′(0) − u(0); for V = 0 this is
    /// d(c+L) + b²
    pub coupling: T,
    /// lim_{k→0} ζ(k) = 1 + coupling·ℓ/(2w₀)
    pub zeta0: T,
    /// `coupling` vanishes (to 1e−12 relative)
    pub transparent: bool,
    /// n ∈ 1..N−1 with cos(nπ/N) = ζ₀ (to 1e−12), if any
    pub chebyshev_n: Option<usize>,
    /// (k, |t_N(k)|²) at decreasing k
    pub samples: Vec<(T, T)>,
    /// |t_N|² at the smallest sampled k
    pub limit: T,
}

pub fn zero_energy_checks<T: Real>(p: &CombParams<T>, n: usize) -> Result<ZeroEnergyReport<T>> {
    let s = p.tooth(cr(T::zero()))?;
    let (u, du) = (s.u0.re, s.du0.re);
    let w0 = p.c * du - u;
    let coupling = p.d * w0 + p.b * p.b * du;
    let size = (p.d * w0).abs() + p.b * p.b * du.abs();
    let transparent = coupling.abs() <= T::tol(1e-12) * size.max(T::one());
    let zeta0 = T::one() + coupling * p.ell / (T::lit(2.0) * w0);
    let chebyshev_n = (1..n).find(|&j| {
        let c = (T::PI() * T::usize(j) / T::usize(n)).cos();
        (c - zeta0).abs() <= T::tol(1e-12) * (T::one() + zeta0.abs())
    });
    let mut samples = Vec::new();
    let base = T::one() / (p.len.max(p.ell));
    for e in 2..=6 {
        let k = base * T::lit(10f64.powi(-e));
        let a = comb_amplitudes(p, n, k)?;
        samples.push((k, a.amp.transmission()));
    }
    let limit = samples.last().map(|s| s.1).unwrap_or(T::nan());
    Ok(ZeroEnergyReport { coupling, zeta0, transparent, chebyshev_n, samples, limit })
}
