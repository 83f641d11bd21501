//! N identical elements at positions 0, ℓ, …, (N−1)ℓ. All amplitudes are
//! referred to the origin at the first element: an incoming wave e^{ikx}
//! from the left, an outgoing t_N e^{ikx} on the right.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::real::{cis, cr, one, Real, C};
use crate::scatter::{det2, free_segment, mul2, s_from_l, ElementData, LTransfer, SMatrix};

/// Chebyshev polynomial of the second kind by upward recurrence; U_{−1} = 0.
pub fn cheb_u<X: Num + Copy>(n: i64, x: X) -> X {
    if n < 0 {
        return X::zero();
    }
    let two = X::one() + X::one();
    let (mut a, mut b) = (X::zero(), X::one());
    for _ in 0..n {
        let c = two * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// (U_{n−1}(x), U_n(x)) scaled by 2^{−e}; returns e as well.
pub(crate) fn cheb_pair_scaled<T: Real>(n: usize, x: T) -> (T, T, i32) {
    let thr = T::max_value().powf(T::lit(0.25));
    let shrink = T::lit(2.0).powi(-64);
    let two = T::lit(2.0);
    let (mut a, mut b, mut e) = (T::zero(), T::one(), 0i32);
    for _ in 0..n {
        let c = two * x * b - a;
        a = b;
        b = c;
        if b.abs() > thr {
            a = a * shrink;
            b = b * shrink;
            e += 64;
        }
    }
    (a, b, e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerialResult<T> {
    pub t_n: C<T>,
    pub r_n: C<T>,
    pub t_rev_n: C<T>,
    pub r_rev_n: C<T>,
    /// Re(ε̄R)
    pub zeta: T,
    /// U_{N−1}(ζ); may be infinite deep in a gap
    pub u_val: T,
    pub in_band: bool,
    pub n: usize,
    pub ell: T,
    pub k: T,
}

impl<T: Real> SerialResult<T> {
    pub fn transmission(&self) -> T {
        self.t_n.norm_sqr()
    }

    pub fn reflection(&self) -> T {
        self.r_n.norm_sqr()
    }

    pub fn smatrix(&self) -> SMatrix<T> {
        SMatrix { t: self.t_n, r: self.r_n, t_rev: self.t_rev_n, r_rev: self.r_rev_n, k: cr(self.k) }
    }

    pub fn unitarity_defect(&self) -> T {
        self.smatrix().unitarity_defect()
    }

    fn with_element(mut self, elem: Option<&ElementData<T>>) -> Self {
        match elem {
            Some(e) => {
                self.zeta = e.discriminant(self.k, self.ell);
                self.u_val = cheb_u(self.n as i64 - 1, self.zeta);
                self.in_band = self.zeta.abs() <= T::one();
            }
            None => {
                self.zeta = T::infinity();
                self.u_val = T::infinity();
                self.in_band = false;
            }
        }
        self
    }
}

/// Closed Chebyshev form of the N-element amplitudes.
pub fn serial_closed_form<T: Real>(elem: &ElementData<T>, ell: T, n: usize, k: T) -> SerialResult<T> {
    assert!(n >= 1, "need at least one element");
    let eps = cis(k * ell);
    let x = elem.discriminant(k, ell);
    let (a, b, e) = cheb_pair_scaled(n, x);
    let nn = T::usize(n);
    let den = cr(b) - eps * elem.diag.conj() * a;
    let scale = T::lit(2.0).powi(-e);
    let t_n = cis(nn * elem.phi) * cis(-nn * k * ell) * scale / den;
    let r_n = -eps.conj() * elem.off_diag * a / den;
    let r_rev_n = cis(-(T::lit(2.0) * nn - T::one()) * k * ell) * elem.off_diag.conj() * a / den;
    let t_rev_n = t_n * cis(-T::lit(2.0) * nn * elem.phi);
    let u_val = if e == 0 { a } else { a * T::lit(2.0).powi(e) };
    SerialResult { t_n, r_n, t_rev_n, r_rev_n, zeta: x, u_val, in_band: x.abs() <= T::one(), n, ell, k }
}

/// Adds elements one at a time by composing with the element at position jℓ.
pub fn serial_recursive<T: Real>(single: &SMatrix<T>, ell: T, n: usize) -> Result<SerialResult<T>> {
    assert!(n >= 1, "need at least one element");
    let k = single.k.re;
    let (mut t, mut r, mut tt, mut rt) = (single.t, single.r, single.t_rev, single.r_rev);
    for j in 1..n {
        let e2 = cis(T::lit(2.0) * T::usize(j) * k * ell);
        let ra = single.r * e2;
        let rta = single.r_rev * e2.conj();
        let den = one::<T>() - rt * ra;
        if !(den.norm() > T::tol(1e-14)) {
            return Err(Error::RecursionSingular(j));
        }
        let t_new = t * single.t / den;
        let r_new = r + tt * ra * t / den;
        let tt_new = tt * single.t_rev / den;
        let rt_new = rta + single.t * rt * single.t_rev / den;
        t = t_new;
        r = r_new;
        tt = tt_new;
        rt = rt_new;
    }
    let elem = ElementData::from_smatrix(single).ok();
    let res = SerialResult {
        t_n: t,
        r_n: r,
        t_rev_n: tt,
        r_rev_n: rt,
        zeta: T::zero(),
        u_val: T::zero(),
        in_band: false,
        n,
        ell,
        k,
    };
    Ok(res.with_element(elem.as_ref()))
}

/// Product L (𝒰_ℓ L)^{N−1} of value/derivative transfer matrices, rescaled to
/// stay finite deep in gaps.
pub fn serial_transfer_product<T: Real>(lt: &LTransfer<T>, ell: T, n: usize, k: T) -> Result<SerialResult<T>> {
    assert!(n >= 1, "need at least one element");
    let kc = cr(k);
    let step = mul2(&lt.l, &free_segment(kc, ell));
    let thr = T::max_value().powf(T::lit(0.25));
    let shrink = T::lit(2.0).powi(-64);
    let mut p = lt.l;
    let mut e = 0i32;
    for _ in 1..n {
        p = mul2(&step, &p);
        let m = p.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()));
        if m > thr {
            for z in p.iter_mut().flatten() {
                *z = *z * shrink;
            }
            e += 64;
        }
    }
    let local = s_from_l(&LTransfer { l: p, phi: lt.phi, curly_l: lt.curly_l }, kc)?;
    let scale = T::lit(2.0).powi(-e);
    let t_rev_loc = local.t_rev * scale;
    let det_n = pow_c(det2(&lt.l), n);
    let m1 = T::usize(n - 1);
    let back = cis(-m1 * k * ell);
    let elem = crate::scatter::element_data(lt, k);
    let res = SerialResult {
        t_n: t_rev_loc * det_n * back,
        r_n: local.r,
        t_rev_n: t_rev_loc * back,
        r_rev_n: local.r_rev * back * back,
        zeta: T::zero(),
        u_val: T::zero(),
        in_band: false,
        n,
        ell,
        k,
    };
    Ok(res.with_element(Some(&elem)))
}

fn pow_c<T: Real>(z: C<T>, n: usize) -> C<T> {
    let mut acc = one::<T>();
    let mut b = z;
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        m >>= 1;
    }
    acc
}

/// Re(ε̄R) = cos(θ − φ) on the bands.
pub fn bloch_discriminant<T: Real>(elem: &ElementData<T>, ell: T, k: T) -> T {
    elem.discriminant(k, ell)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInterval<T> {
    pub lo: T,
    pub hi: T,
    /// bisection steps spent on each edge (0 = edge is the range boundary)
    pub lo_depth: usize,
    pub hi_depth: usize,
    /// ||x| − 1| at the refined edges
    pub lo_residual: T,
    pub hi_residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandIntervals<T> {
    pub intervals: Vec<BandInterval<T>>,
}

impl<T: Real> BandIntervals<T> {
    pub fn contains(&self, k: T) -> bool {
        self.intervals.iter().any(|b| b.lo <= k && k <= b.hi)
    }

    /// Index of the band whose closure holds k.
    pub fn band_of(&self, k: T) -> Option<usize> {
        self.intervals.iter().position(|b| b.lo <= k && k <= b.hi)
    }
}

/// Allowed bands: grid scan of |x(k)| − 1 then bisection. `disc` returns None at
/// singular points (treated as inside a gap).
pub fn band_intervals<T: Real, F>(disc: F, k_range: (T, T), grid: usize) -> BandIntervals<T>
where
    F: Fn(T) -> Option<T>,
{
    assert!(grid >= 2);
    let (a, b) = k_range;
    let width = b - a;
    let tol = T::tol(1e-10) * width.abs();
    let g = |k: T| disc(k).map(|x| x.abs() - T::one()).unwrap_or(T::infinity());
    let ks: Vec<T> = (0..grid).map(|i| a + width * T::usize(i) / T::usize(grid - 1)).collect();
    let gs: Vec<T> = ks.iter().map(|&k| g(k)).collect();
    let refine = |mut lo: T, mut hi: T| -> (T, usize, T) {
        // invariant: g(lo) and g(hi) have opposite inside/outside status
        let inside_lo = g(lo) <= T::zero();
        let mut depth = 0;
        while (hi - lo).abs() > tol && depth < 200 {
            let m = (lo + hi) / T::lit(2.0);
            if (g(m) <= T::zero()) == inside_lo {
                lo = m;
            } else {
                hi = m;
            }
            depth += 1;
        }
        let edge = if inside_lo { lo } else { hi };
        (edge, depth, g(edge).abs())
    };
    let mut out = Vec::new();
    let mut open: Option<(T, usize, T)> = if gs[0] <= T::zero() { Some((a, 0, gs[0].abs())) } else { None };
    for i in 1..grid {
        let (p, q) = (gs[i - 1] <= T::zero(), gs[i] <= T::zero());
        if p == q {
            continue;
        }
        let (edge, depth, res) = refine(ks[i - 1], ks[i]);
        if q {
            open = Some((edge, depth, res));
        } else if let Some((lo, ld, lr)) = open.take() {
            out.push(BandInterval { lo, hi: edge, lo_depth: ld, hi_depth: depth, lo_residual: lr, hi_residual: res });
        }
    }
    if let Some((lo, ld, lr)) = open {
        out.push(BandInterval { lo, hi: b, lo_depth: ld, hi_depth: 0, lo_residual: lr, hi_residual: gs[grid - 1].abs() });
    }
    BandIntervals { intervals: out }
}

/// Envelope bounds on |t_N|² at one k. Inside a band the two lower bounds
/// apply; in a gap the upper bound and the outside lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeBounds<T> {
    pub zeta: T,
    pub in_band: bool,
    pub lb1: Option<T>,
    pub lb2: Option<T>,
    pub ub_outside: Option<T>,
    pub lb_outside: Option<T>,
}

impl<T: Real> EnvelopeBounds<T> {
    /// True when `t2` respects every applicable bound (relative slack `tol`).
    pub fn admits(&self, t2: T, tol: T) -> bool {
        let lo = [self.lb1, self.lb2, self.lb_outside].into_iter().flatten().all(|b| t2 >= b * (T::one() - tol));
        let hi = self.ub_outside.map_or(true, |b| t2 <= b * (T::one() + tol));
        lo && hi
    }
}

pub fn envelope_bounds<T: Real>(elem: &ElementData<T>, ell: T, n: usize, k: T) -> EnvelopeBounds<T> {
    let x = elem.discriminant(k, ell);
    let s2 = elem.s_sqr();
    let nn = T::usize(n);
    let one = T::one();
    // single element: |t|² = 1/(1+|S|²), |r|² = |S|²/(1+|S|²)
    let t2 = one / (one + s2);
    let r2 = s2 / (one + s2);
    if x.abs() <= one {
        let lb1 = if x.abs() < one { Some((one - x * x) / (one + s2 - x * x)) } else { Some(T::zero()) };
        let lb2 = Some(t2 / (one + (nn * nn - one) * r2));
        EnvelopeBounds { zeta: x, in_band: true, lb1, lb2, ub_outside: None, lb_outside: None }
    } else {
        let m = n as i32 - 1;
        let u_lo = nn - one + x.abs().powi(m);
        let ub = one / (one + s2 * u_lo * u_lo);
        let tn = t2.powi(n as i32);
        let r = r2.sqrt();
        let lb = tn / (tn + nn * nn * r2 * (one + r).powi(2 * m));
        EnvelopeBounds { zeta: x, in_band: false, lb1: None, lb2: None, ub_outside: Some(ub), lb_outside: Some(lb) }
    }
}
