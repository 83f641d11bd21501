//! Single-element 2×2 calculus: S (amplitudes), M (plane-wave coefficients)
//! and L (value/derivative) descriptions and the (R, S, φ) element data.

use crate::error::{Error, Result};
use crate::real::{ci, cis, cr, one, Real, C};

/// On-shell scattering data. Layout [[t, r_rev], [r, t_rev]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix<T> {
    pub t: C<T>,
    pub r: C<T>,
    pub t_rev: C<T>,
    pub r_rev: C<T>,
    pub k: C<T>,
}

impl<T: Real> SMatrix<T> {
    pub fn identity(k: C<T>) -> Self {
        SMatrix { t: one(), r: C::new(T::zero(), T::zero()), t_rev: one(), r_rev: C::new(T::zero(), T::zero()), k }
    }

    pub fn transmission(&self) -> T {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> T {
        self.r.norm_sqr()
    }

    /// Largest violation of S†S = 1 (both column norms and the cross term).
    pub fn unitarity_defect(&self) -> T {
        let a = (self.t.norm_sqr() + self.r.norm_sqr() - T::one()).abs();
        let b = (self.t_rev.norm_sqr() + self.r_rev.norm_sqr() - T::one()).abs();
        let c = (self.t.conj() * self.r_rev + self.r.conj() * self.t_rev).norm();
        a.max(b).max(c)
    }

    pub fn as_matrix(&self) -> [[C<T>; 2]; 2] {
        [[self.t, self.r_rev], [self.r, self.t_rev]]
    }
}

/// Coefficient transfer matrix: (B+, A-) = M (A+, B-).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MTransfer<T> {
    pub m: [[C<T>; 2]; 2],
}

impl<T: Real> MTransfer<T> {
    pub fn det(&self) -> C<T> {
        det2(&self.m)
    }
}

/// Value/derivative transfer matrix, L = e^{iφ} 𝓛.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LTransfer<T> {
    pub l: [[C<T>; 2]; 2],
    pub phi: T,
    /// Real part of e^{-iφ} L; exactly the real unimodular factor for a unitary S.
    pub curly_l: [[T; 2]; 2],
}

impl<T: Real> LTransfer<T> {
    pub fn new(l: [[C<T>; 2]; 2]) -> Self {
        let phi = det2(&l).arg() / T::lit(2.0);
        let e = cis(-phi);
        let curly_l = [[(e * l[0][0]).re, (e * l[0][1]).re], [(e * l[1][0]).re, (e * l[1][1]).re]];
        LTransfer { l, phi, curly_l }
    }

    pub fn real(a: [[T; 2]; 2]) -> Self {
        LTransfer::new([[cr(a[0][0]), cr(a[0][1])], [cr(a[1][0]), cr(a[1][1])]])
    }

    pub fn identity() -> Self {
        Self::real([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    /// δ interaction of strength α.
    pub fn delta(alpha: T) -> Self {
        Self::real([[T::one(), T::zero()], [alpha, T::one()]])
    }

    /// δ′ interaction of strength β.
    pub fn delta_prime(beta: T) -> Self {
        Self::real([[T::one(), beta], [T::zero(), T::one()]])
    }

    /// Free propagation over a segment of length ℓ.
    pub fn free(k: C<T>, ell: T) -> Self {
        LTransfer::new(free_segment(k, ell))
    }

    pub fn det(&self) -> C<T> {
        det2(&self.l)
    }

    /// Imaginary residue of e^{-iφ}L; zero when L comes from a unitary S.
    pub fn curly_defect(&self) -> T {
        let e = cis(-self.phi);
        let mut m = T::zero();
        for row in &self.l {
            for x in row {
                m = m.max((e * x).im.abs() / (T::one() + x.norm()));
            }
        }
        m
    }
}

pub(crate) fn det2<T: Real>(a: &[[C<T>; 2]; 2]) -> C<T> {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub(crate) fn mul2<T: Real>(a: &[[C<T>; 2]; 2], b: &[[C<T>; 2]; 2]) -> [[C<T>; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// [[cos kℓ, sin kℓ / k], [−k sin kℓ, cos kℓ]]
pub(crate) fn free_segment<T: Real>(k: C<T>, ell: T) -> [[C<T>; 2]; 2] {
    let kl = k * ell;
    let (c, s) = (kl.cos(), kl.sin());
    let sk = if k.norm() == T::zero() { cr(ell) } else { s / k };
    [[c, sk], [-k * s, c]]
}

fn l_denominator<T: Real>(l: &[[C<T>; 2]; 2], k: C<T>) -> Result<C<T>> {
    let ik = ci(T::one()) * k;
    let den = l[1][0] - ik * (l[1][1] + l[0][0]) - k * k * l[0][1];
    let kn = k.norm();
    let scale = l[1][0].norm() + kn * (l[0][0].norm() + l[1][1].norm()) + kn * kn * l[0][1].norm();
    if !(den.norm() > T::tol(1e-13) * scale) {
        return Err(Error::Degenerate("s_from_l"));
    }
    Ok(den)
}

/// All four amplitudes from L at momentum k.
pub fn s_from_l<T: Real>(lt: &LTransfer<T>, k: C<T>) -> Result<SMatrix<T>> {
    let l = &lt.l;
    let den = l_denominator(l, k)?;
    let ik = ci(T::one()) * k;
    let k2 = k * k;
    let r = -(l[1][0] + ik * (l[1][1] - l[0][0]) + k2 * l[0][1]) / den;
    let r_rev = -(l[1][0] + ik * (l[0][0] - l[1][1]) + k2 * l[0][1]) / den;
    let t_rev = -(ik * T::lit(2.0)) / den;
    let t = t_rev * det2(l);
    Ok(SMatrix { t, r, t_rev, r_rev, k })
}

/// Inverse of [`s_from_l`]; fails for a full reflector (t_rev = 0).
/// Note the diagonal: L11 pairs with (1−r)(1+r̃), L22 with (1+r)(1−r̃).
pub fn l_from_s<T: Real>(s: &SMatrix<T>) -> Result<LTransfer<T>> {
    let (t, r, tt, rt) = (s.t, s.r, s.t_rev, s.r_rev);
    if !(tt.norm() > T::tol(1e-13)) {
        return Err(Error::FullReflection);
    }
    let ik = ci(T::one()) * s.k;
    let o = one::<T>();
    let p = t * tt;
    let h = o / (tt * T::lit(2.0));
    let l = [
        [h * (p + (o - r) * (o + rt)), h * (p - (o + r) * (o + rt)) / ik],
        [h * ik * (p - (o - r) * (o - rt)), h * (p + (o + r) * (o - rt))],
    ];
    Ok(LTransfer::new(l))
}

pub fn m_from_l<T: Real>(lt: &LTransfer<T>, k: C<T>) -> MTransfer<T> {
    let l = &lt.l;
    let ik = ci(T::one()) * k;
    let k2 = k * k;
    let f = one::<T>() / (ik * T::lit(2.0));
    MTransfer {
        m: [
            [
                f * (l[1][0] + ik * (l[0][0] + l[1][1]) - k2 * l[0][1]),
                f * (l[1][0] + ik * (l[0][0] - l[1][1]) + k2 * l[0][1]),
            ],
            [
                f * (-l[1][0] + ik * (l[0][0] - l[1][1]) - k2 * l[0][1]),
                f * (-l[1][0] + ik * (l[0][0] + l[1][1]) + k2 * l[0][1]),
            ],
        ],
    }
}

pub fn m_from_s<T: Real>(s: &SMatrix<T>) -> Result<MTransfer<T>> {
    if !(s.t_rev.norm() > T::tol(1e-13)) {
        return Err(Error::FullReflection);
    }
    let f = one::<T>() / s.t_rev;
    Ok(MTransfer { m: [[f * (s.t * s.t_rev - s.r * s.r_rev), f * s.r_rev], [-f * s.r, f]] })
}

pub fn s_from_m<T: Real>(m: &MTransfer<T>, k: C<T>) -> Result<SMatrix<T>> {
    let m = &m.m;
    if m[1][1].norm() == T::zero() || !m[1][1].norm().is_finite() {
        return Err(Error::ZeroTransmission);
    }
    let q = m[1][1];
    Ok(SMatrix { t: m[0][0] - m[0][1] * m[1][0] / q, r: -m[1][0] / q, t_rev: one::<T>() / q, r_rev: m[0][1] / q, k })
}

/// (R, S, φ) parameterisation of one array element; |R|² − |S|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementData<T> {
    /// R = e^{iφ}/t
    pub diag: C<T>,
    /// S = −e^{iφ} r/t
    pub off_diag: C<T>,
    pub phi: T,
}

impl<T: Real> ElementData<T> {
    pub fn free() -> Self {
        ElementData { diag: one(), off_diag: C::new(T::zero(), T::zero()), phi: T::zero() }
    }

    /// Directly from amplitudes; requires t ≠ 0.
    pub fn from_smatrix(s: &SMatrix<T>) -> Result<Self> {
        if !(s.t.norm() > T::tol(1e-13)) {
            return Err(Error::FullReflection);
        }
        let phi = (s.t / s.t_rev).arg() / T::lit(2.0);
        let e = cis(phi);
        Ok(ElementData { diag: e / s.t, off_diag: -e * s.r / s.t, phi })
    }

    pub fn s_sqr(&self) -> T {
        self.off_diag.norm_sqr()
    }

    /// Re(ε̄R) with ε = e^{ikℓ}
    pub fn discriminant(&self, k: T, ell: T) -> T {
        (cis(-k * ell) * self.diag).re
    }

    pub fn unimodularity_defect(&self) -> T {
        (self.diag.norm_sqr() - self.off_diag.norm_sqr() - T::one()).abs()
    }
}

/// Element data from the real factor of L (k real).
pub fn element_data<T: Real>(lt: &LTransfer<T>, k: T) -> ElementData<T> {
    let a = &lt.curly_l;
    let two = T::lit(2.0);
    let diag = C::new((a[0][0] + a[1][1]) / two, a[1][0] / (two * k) - k * a[0][1] / two);
    let off_diag = C::new((a[0][0] - a[1][1]) / two, a[1][0] / (two * k) + k * a[0][1] / two);
    ElementData { diag, off_diag, phi: lt.phi }
}
