//! Resonances of the N-tooth comb: zeros of the transmission denominator
//! continued to complex k, located by the argument principle and refined by
//! Newton's method.
//!
//! The literal denominator εU_{N−2}(ζ) − (1+iβ)U_{N−1}(ζ) has poles wherever
//! β does, so counting is done on the entire function
//! D̂ = q^N·(denominator), q = 2k(c u′ − u), which shares its zeros away from
//! k = 0 (where D̂ has a spurious zero of order N−1).

use crate::comb::{comb_beta_complex, CombParams};
use crate::error::{Error, Result};
use crate::real::{ci, cr, finite, one, Real, C};
use crate::serial::cheb_u;

/// εU_{N−2}(ζ) − (1+iβ)U_{N−1}(ζ) at complex k.
pub fn krein_denominator<T: Real>(p: &CombParams<T>, n: usize, k: C<T>) -> Result<C<T>> {
    let beta = comb_beta_complex(p, k)?;
    let kl = k * p.ell;
    let zeta = kl.cos() + beta * kl.sin();
    let eps = (ci(T::one()) * kl).exp();
    let n = n as i64;
    Ok(eps * cheb_u(n - 2, zeta) - (one::<T>() + ci(T::one()) * beta) * cheb_u(n - 1, zeta))
}

/// The entire regularization q^N·[`krein_denominator`].
pub fn krein_determinant<T: Real>(p: &CombParams<T>, n: usize, k: C<T>) -> Result<C<T>> {
    let s = p.tooth(k)?;
    let w = s.du0 * p.c - s.u0;
    let q = k * w * T::lit(2.0);
    let np = w * p.d + s.du0 * (p.b * p.b);
    let kl = k * p.ell;
    let x = (q * kl.cos() + np * kl.sin()) * T::lit(2.0);
    let q2 = q * q;
    // V_j = q^j U_j(ζ)
    let (mut vm, mut v) = (cr(T::zero()), one::<T>());
    for _ in 0..n - 1 {
        let nv = x * v - q2 * vm;
        vm = v;
        v = nv;
    }
    let eps = (ci(T::one()) * kl).exp();
    Ok(eps * q2 * vm - (q + ci(T::one()) * np) * v)
}

/// t_N continued to complex k: −ε^{1−N}/denominator.
pub fn continued_transmission<T: Real>(p: &CombParams<T>, n: usize, k: C<T>) -> Result<C<T>> {
    let den = krein_denominator(p, n, k)?;
    let ph = (ci(T::one()) * k * p.ell * T::usize(n - 1)).exp();
    Ok(-one::<T>() / (ph * den))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    pub re: (T, T),
    pub im: (T, T),
}

impl<T: Real> Region<T> {
    pub fn contains(&self, k: C<T>) -> bool {
        k.re >= self.re.0 && k.re <= self.re.1 && k.im >= self.im.0 && k.im <= self.im.1
    }

    fn size(&self) -> T {
        (self.re.1 - self.re.0).max(self.im.1 - self.im.0)
    }

    fn corners(&self) -> [C<T>; 4] {
        [
            C::new(self.re.0, self.im.0),
            C::new(self.re.1, self.im.0),
            C::new(self.re.1, self.im.1),
            C::new(self.re.0, self.im.1),
        ]
    }

    fn split(&self, f: T) -> [Region<T>; 4] {
        let xm = self.re.0 + (self.re.1 - self.re.0) * f;
        let ym = self.im.0 + (self.im.1 - self.im.0) * f;
        [
            Region { re: (self.re.0, xm), im: (self.im.0, ym) },
            Region { re: (xm, self.re.1), im: (self.im.0, ym) },
            Region { re: (xm, self.re.1), im: (ym, self.im.1) },
            Region { re: (self.re.0, xm), im: (ym, self.im.1) },
        ]
    }
}

/// The strip under the m-th spectral window m π/ℓ < Re k < (m+1)π/ℓ
/// (m ≥ 0), down to Im k = −depth and slightly above the real axis. The
/// strip for m = 0 starts at `re_floor` to keep the spurious zero at k = 0
/// outside.
pub fn band_region<T: Real>(m: usize, ell: T, depth: T, re_floor: T) -> Region<T> {
    let w = T::PI() / ell;
    let lo = (w * T::usize(m)).max(re_floor);
    Region { re: (lo, w * T::usize(m + 1)), im: (-depth, T::lit(0.05) * w.min(T::one())) }
}

/// Number of resonances belonging to the m-th window mπ/ℓ < |Re k| < (m+1)π/ℓ.
///
/// For m ≥ 1 this is the winding number over [`band_region`]. For m = 0 a
/// pair of mirror zeros k, −k̄ can merge on the imaginary axis and leave as
/// two purely imaginary zeros, so the half strip is not well defined; the
/// count is taken over the symmetric strip |Re k| < π/ℓ, the N−1 spurious
/// zeros at k = 0 are removed, and the result is halved.
pub fn band_resonance_count<T: Real>(p: &CombParams<T>, n: usize, m: usize, depth: T, samples: usize) -> Result<usize> {
    let f = |k: C<T>| krein_determinant(p, n, k);
    let r = band_region(m, p.ell, depth, T::zero());
    if m > 0 {
        return Ok(winding_number(&f, &r, samples)?.max(0) as usize);
    }
    let sym = Region { re: (-r.re.1, r.re.1), im: r.im };
    let w = winding_number(&f, &sym, samples)? - (n as i64 - 1);
    if w < 0 || w % 2 != 0 {
        return Err(Error::Degenerate("asymmetric zero count"));
    }
    Ok((w / 2) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleOrigin {
    Stub,
    Spatial,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole<T> {
    pub k: C<T>,
    /// |denominator(k)| after polishing (|D̂| for multiple zeros)
    pub residual: T,
    pub origin: PoleOrigin,
    pub nearest_k_n: Option<T>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet<T> {
    pub poles: Vec<Pole<T>>,
    /// winding number of D̂ around the whole region
    pub count: usize,
    pub region: Region<T>,
}

impl<T: Real> PoleSet<T> {
    /// Total multiplicity of the reported poles.
    pub fn total(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }

    pub fn of_origin(&self, o: PoleOrigin) -> usize {
        self.poles.iter().filter(|p| p.origin == o).map(|p| p.multiplicity).sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PoleSearch<T> {
    /// initial samples per rectangle edge
    pub edge_samples: usize,
    /// cells smaller than this are not split further
    pub min_cell: T,
    pub newton_iters: usize,
}

impl<T: Real> Default for PoleSearch<T> {
    fn default() -> Self {
        PoleSearch { edge_samples: 24, min_cell: T::tol(1e-7), newton_iters: 60 }
    }
}

/// Winding number of f around the rectangle (counter-clockwise), by
/// adaptive edge sampling with phase unwrapping. Errors if f vanishes on
/// (or too close to) the contour.
pub fn winding_number<T: Real, F>(f: &F, region: &Region<T>, samples: usize) -> Result<i64>
where
    F: Fn(C<T>) -> Result<C<T>>,
{
    let c = region.corners();
    let min_len = region.size() * T::lit(1e-12);
    let mut total = T::zero();
    for e in 0..4 {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        let m = samples.max(2).max(((b - a).norm() / region.size() * T::usize(samples)).ceil().to_usize().unwrap_or(2));
        let mut za = a;
        let mut fa = f(za)?;
        for i in 1..=m {
            let zb = a + (b - a) * (T::usize(i) / T::usize(m));
            let fb = f(zb)?;
            total = total + edge_phase(f, za, fa, zb, fb, min_len, 0)?;
            za = zb;
            fa = fb;
        }
    }
    let w = total / (T::lit(2.0) * T::PI());
    let r = w.round();
    if (w - r).abs() > T::lit(0.05) {
        return Err(Error::Degenerate("winding number not integral"));
    }
    Ok(r.to_i64().unwrap())
}

fn edge_phase<T: Real, F>(f: &F, za: C<T>, fa: C<T>, zb: C<T>, fb: C<T>, min_len: T, depth: usize) -> Result<T>
where
    F: Fn(C<T>) -> Result<C<T>>,
{
    if fa == cr(T::zero()) || fb == cr(T::zero()) || !finite(fa) || !finite(fb) {
        return Err(Error::Degenerate("zero on contour"));
    }
    let d = (fb / fa).arg();
    let zm = (za + zb) * T::lit(0.5);
    let fm = f(zm)?;
    if !finite(fm) || fm == cr(T::zero()) {
        return Err(Error::Degenerate("zero on contour"));
    }
    let (d1, d2) = ((fm / fa).arg(), (fb / fm).arg());
    // accept only when halving the segment tells the same story, which
    // guards against whole turns hiding between two samples
    let smooth = |x: C<T>, y: C<T>| (y.norm() / x.norm()).ln().abs() < T::lit(0.5);
    if d.abs() < T::lit(0.5) && (d1 + d2 - d).abs() < T::lit(1e-3) && smooth(fa, fm) && smooth(fm, fb) {
        return Ok(d1 + d2);
    }
    if (zb - za).norm() < min_len || depth > 60 {
        return Err(Error::Degenerate("zero on contour"));
    }
    Ok(edge_phase(f, za, fa, zm, fm, min_len, depth + 1)? + edge_phase(f, zm, fm, zb, fb, min_len, depth + 1)?)
}

fn newton<T: Real, F>(f: &F, mut z: C<T>, iters: usize) -> Option<C<T>>
where
    F: Fn(C<T>) -> Result<C<T>>,
{
    let mut last = T::infinity();
    for _ in 0..iters {
        let h = T::lit(1e-6) * (T::one() + z.norm());
        let fz = f(z).ok()?;
        if fz == cr(T::zero()) {
            return Some(z);
        }
        let d = (f(z + h).ok()? - f(z - h).ok()?) / (h * T::lit(2.0));
        let step = fz / d;
        if !finite(step) {
            return None;
        }
        z = z - step;
        last = step.norm();
        if last < T::tol(1e-14) * (T::one() + z.norm()) {
            return Some(z);
        }
    }
    // rounding noise in f can stall the last digits
    (last < T::tol(1e-10) * (T::one() + z.norm())).then_some(z)
}

/// Locates the zeros of D̂ in `region` (excluding k = 0, which the caller
/// must keep outside).
pub fn find_poles<T: Real>(p: &CombParams<T>, n: usize, region: Region<T>, opts: &PoleSearch<T>) -> Result<PoleSet<T>> {
    let f = |k: C<T>| krein_determinant(p, n, k);
    let g = |k: C<T>| krein_denominator(p, n, k);
    let count = winding_number(&f, &region, opts.edge_samples)?;
    if count < 0 {
        return Err(Error::Degenerate("negative winding number"));
    }
    let mut poles = Vec::new();
    search_cell(&f, &g, region, count as usize, opts, &mut poles)?;
    poles.sort_by(|a: &Pole<T>, b| a.k.re.partial_cmp(&b.k.re).unwrap().then(a.k.im.partial_cmp(&b.k.im).unwrap()));
    Ok(PoleSet { poles, count: count as usize, region })
}

fn search_cell<T: Real, F, G>(f: &F, g: &G, cell: Region<T>, count: usize, opts: &PoleSearch<T>, out: &mut Vec<Pole<T>>) -> Result<()>
where
    F: Fn(C<T>) -> Result<C<T>>,
    G: Fn(C<T>) -> Result<C<T>>,
{
    if count == 0 {
        return Ok(());
    }
    let centre = C::new((cell.re.0 + cell.re.1) * T::lit(0.5), (cell.im.0 + cell.im.1) * T::lit(0.5));
    if count == 1 {
        if let Some(z) = newton(f, centre, opts.newton_iters) {
            if cell.contains(z) {
                out.push(polish(g, z));
                return Ok(());
            }
        }
    }
    if cell.size() <= opts.min_cell {
        // a cluster (or multiple zero) too tight to separate
        let z = newton(f, centre, opts.newton_iters * 4).filter(|z| cell.contains(*z)).unwrap_or(centre);
        let residual = f(z)?.norm();
        out.push(Pole { k: z, residual, origin: PoleOrigin::Unclassified, nearest_k_n: None, multiplicity: count });
        return Ok(());
    }
    // off-centre splits avoid lines of symmetry; retry if a zero sits on one
    for frac in [0.5037, 0.4711, 0.5293, 0.4417] {
        let kids = cell.split(T::lit(frac));
        let counts: Result<Vec<i64>> = kids.iter().map(|c| winding_number(f, c, opts.edge_samples)).collect();
        let Ok(counts) = counts else { continue };
        if counts.iter().sum::<i64>() != count as i64 || counts.iter().any(|&c| c < 0) {
            continue;
        }
        for (kid, c) in kids.iter().zip(counts) {
            search_cell(f, g, *kid, c as usize, opts, out)?;
        }
        return Ok(());
    }
    Err(Error::Degenerate("could not subdivide pole cell"))
}

fn polish<T: Real, G>(g: &G, z: C<T>) -> Pole<T>
where
    G: Fn(C<T>) -> Result<C<T>>,
{
    let z2 = newton(g, z, 8).filter(|w| (*w - z).norm() < T::lit(1e-6) * (T::one() + z.norm())).unwrap_or(z);
    let residual = g(z2).map(|v| v.norm()).unwrap_or(T::infinity());
    Pole { k: z2, residual, origin: PoleOrigin::Unclassified, nearest_k_n: None, multiplicity: 1 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Homotopy<T> {
    /// (b, k) along the path
    pub path: Vec<(T, C<T>)>,
    /// the path was abandoned because Im k ran below `escape`
    pub escaped: bool,
    /// reached `b_end` (otherwise it stalled or escaped)
    pub converged: bool,
}

/// Follows a zero of D̂ as b shrinks from p.b towards `b_end`, with step
/// min(h, b/2) (h starts at 0.05 and halves on rejection).
pub fn continue_to_decoupled<T: Real>(p: &CombParams<T>, n: usize, k0: C<T>, b_end: T, escape: T) -> Homotopy<T> {
    let mut q = p.clone();
    let mut b = p.b;
    let mut k = k0;
    let mut path = vec![(b, k)];
    let cap = T::lit(0.05);
    let mut h = cap;
    let sgn = p.b.signum();
    while b.abs() > b_end {
        // tangent dk/db = −(∂D̂/∂b)/(∂D̂/∂k) at the current point
        let Some(vel) = tangent(&mut q, n, k, b) else {
            return Homotopy { path, escaped: false, converged: false };
        };
        let db = h.min(b.abs() * T::lit(0.5));
        let nb = b - sgn * db;
        q.b = nb;
        let f = |z: C<T>| krein_determinant(&q, n, z);
        let pred = k + vel * (nb - b);
        // a corrector move comparable to the predicted step means a jump to
        // another branch
        let guard = T::lit(0.3) * (pred - k).norm() + T::tol(1e-9) * (T::one() + k.norm());
        match newton(&f, pred, 30).filter(|z| (*z - pred).norm() <= guard) {
            Some(z) => {
                k = z;
                b = nb;
                path.push((b, k));
                if k.im < -escape {
                    return Homotopy { path, escaped: true, converged: false };
                }
                h = (h * T::lit(1.5)).min(cap);
            }
            None => {
                h = h * T::lit(0.5);
                if h < T::lit(1e-10) * b.abs() {
                    // stalled, typically at a near-collision of two zeros
                    return Homotopy { path, escaped: false, converged: false };
                }
            }
        }
    }
    Homotopy { path, escaped: false, converged: true }
}

fn tangent<T: Real>(q: &mut CombParams<T>, n: usize, k: C<T>, b: T) -> Option<C<T>> {
    let hk = T::lit(1e-6) * (T::one() + k.norm());
    let hb = T::lit(1e-6) * b.abs().max(T::lit(1e-3));
    q.b = b;
    let dk = (krein_determinant(q, n, k + hk).ok()? - krein_determinant(q, n, k - hk).ok()?) / (hk * T::lit(2.0));
    q.b = b + hb;
    let fp = krein_determinant(q, n, k).ok()?;
    q.b = b - hb;
    let fm = krein_determinant(q, n, k).ok()?;
    let v = -(fp - fm) / (dk * hb * T::lit(2.0));
    finite(v).then_some(v)
}

/// Labels each pole as stub- or spatial-origin. A pole is stub-origin when
/// its real part lies within half the minimal k_n spacing of some k_n and
/// its b → 0 continuation ends on that k_n.
pub fn classify_poles<T: Real>(p: &CombParams<T>, n: usize, set: &PoleSet<T>, ks: &[T]) -> PoleSet<T> {
    let half_gap = ks.windows(2).map(|w| (w[1] - w[0]).abs()).fold(T::infinity(), |a, b| a.min(b)) * T::lit(0.5);
    let half_gap = if half_gap.is_finite() { half_gap } else { ks.first().map(|k| k.abs()).unwrap_or(T::one()) };
    // the N stub zeros close in on k_n like b^{2/N}; by b = b₀/50 they sit
    // far inside this radius, while spatial zeros have left for −i∞
    let b_end = p.b.abs() * T::lit(0.02);
    let reach = half_gap * T::lit(0.01);
    let tol = T::tol(1e-8);
    let mut out = set.clone();
    for pole in &mut out.poles {
        let nearest = ks.iter().copied().min_by(|a, b| (*a - pole.k.re).abs().partial_cmp(&(*b - pole.k.re).abs()).unwrap());
        pole.nearest_k_n = nearest;
        if pole.multiplicity != 1 || pole.residual >= tol {
            pole.origin = PoleOrigin::Unclassified;
            continue;
        }
        let Some(kn) = nearest else {
            pole.origin = PoleOrigin::Spatial;
            continue;
        };
        if (pole.k.re - kn).abs() >= half_gap {
            pole.origin = PoleOrigin::Spatial;
            continue;
        }
        let escape = T::lit(4.0) * (pole.k.im.abs() + T::one()) + T::lit(6.0) / p.ell;
        let h = continue_to_decoupled(p, n, pole.k, b_end, escape);
        let (b_last, end) = *h.path.last().unwrap();
        let on_kn = !h.escaped && b_last.abs() <= T::lit(2.0) * b_end && (end - cr(kn)).norm() < reach;
        pole.origin = if on_kn { PoleOrigin::Stub } else { PoleOrigin::Spatial };
    }
    out
}

/// max over poles of `a` of the distance from −k̄ to the nearest pole of `b`.
pub fn mirror_defect<T: Real>(a: &PoleSet<T>, b: &PoleSet<T>) -> T {
    a.poles
        .iter()
        .map(|p| {
            let m = -p.k.conj();
            b.poles.iter().map(|q| (q.k - m).norm()).fold(T::infinity(), |x, y| x.min(y))
        })
        .fold(T::zero(), |x, y| x.max(y))
}
