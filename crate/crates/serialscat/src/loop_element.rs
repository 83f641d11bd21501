//! A planar loop with two leads in a perpendicular magnetic field, δ-coupled
//! at both junctions. Branch lengths L1 (lower), L2 (upper); flux Φ enters
//! only through A = Φ/(L1+L2).

use crate::error::{Error, Result};
use crate::real::{ci, cis, cr, Real, C};
use crate::scatter::{element_data, s_from_l, ElementData, LTransfer, SMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopParams<T> {
    pub l1: T,
    pub l2: T,
    pub alpha1: T,
    pub alpha2: T,
    pub flux: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopBlocks<T> {
    pub b: C<T>,
    pub c: C<T>,
    pub d: C<T>,
    pub e_plus: C<T>,
    pub e_minus: C<T>,
}

/// ε_{j±} = e^{i(−A±k)L_j}
fn eps<T: Real>(p: &LoopParams<T>, k: T) -> [[C<T>; 2]; 2] {
    let a = p.flux / (p.l1 + p.l2);
    let e = |l: T, s: T| cis((-a + s * k) * l);
    [[e(p.l1, T::one()), e(p.l1, -T::one())], [e(p.l2, T::one()), e(p.l2, -T::one())]]
}

/// B, C, D, E± assembled from the ε products.
pub fn loop_building_blocks<T: Real>(p: &LoopParams<T>, k: T) -> LoopBlocks<T> {
    let [[e1p, e1m], [e2p, e2m]] = eps(p, k);
    let one = cr(T::one());
    LoopBlocks {
        b: (e1p - e1m) * (e2m - e2p),
        c: -e1m * e2m + e1p * e2p,
        d: e2p - e2m + e2p * e2m * (e1p - e1m),
        e_plus: one - e1p * e2p,
        e_minus: one - e1m * e2m,
    }
}

/// Trigonometric forms of B, C and E±. E± carries an overall sign opposite
/// to the product definition 1 − ε_{1±}ε_{2±}; only E₋E₊ enters physics.
pub fn loop_blocks_trig<T: Real>(p: &LoopParams<T>, k: T) -> (C<T>, C<T>, C<T>, C<T>) {
    let two = T::lit(2.0);
    let ph = cis(-p.flux);
    let lsum = p.l1 + p.l2;
    let b = ph * (T::lit(4.0) * (k * p.l1).sin() * (k * p.l2).sin());
    let c = ph * ci(two * (k * lsum).sin());
    let e = |s: T| ci(two) * cis(-p.flux / two) * cis(s * k * lsum / two) * ((s * k * lsum - p.flux) / two).sin();
    (b, c, e(T::one()), e(-T::one()))
}

/// Value/derivative transfer matrix of the loop.
pub fn loop_transfer<T: Real>(p: &LoopParams<T>, k: T) -> Result<LTransfer<T>> {
    let bl = loop_building_blocks(p, k);
    let (a1, a2) = (p.alpha1, p.alpha2);
    let two = T::lit(2.0);
    let kk = cr(k);
    let i = ci(T::one());
    let den = kk * bl.d * two;
    if !(den.norm() > T::tol(1e-13) * k) {
        return Err(Error::Degenerate("loop transfer"));
    }
    let l = [
        [(i * bl.b * a1 + kk * bl.c * two) / den, i * bl.b / den],
        [
            (i * bl.b * a1 * a2 + kk * bl.c * (two * (a1 + a2)) - i * kk * kk * bl.e_minus * bl.e_plus * T::lit(4.0)) / den,
            (kk * bl.c * two + i * bl.b * a2) / den,
        ],
    ];
    Ok(LTransfer::new(l))
}

pub fn loop_amplitudes<T: Real>(p: &LoopParams<T>, k: T) -> Result<SMatrix<T>> {
    s_from_l(&loop_transfer(p, k)?, cr(k))
}

/// The closed-form (r, t) pair as usually quoted. r agrees with
/// [`loop_amplitudes`]; t agrees only in modulus (its phase convention
/// differs), so callers wanting all four amplitudes use the transfer matrix.
pub fn loop_quoted_rt<T: Real>(p: &LoopParams<T>, k: T) -> (C<T>, C<T>) {
    let bl = loop_building_blocks(p, k);
    let (a1, a2) = (p.alpha1, p.alpha2);
    let i = ci(T::one());
    let kk = cr(k);
    let four = T::lit(4.0);
    let ee = bl.e_minus * bl.e_plus * four;
    let den = i * bl.b * (a1 * a2) + kk * (bl.c * T::lit(2.0) + bl.b) * (a1 + a2) - i * kk * kk * (ee + bl.b + bl.c * four);
    let r = (-i * bl.b * (a1 * a2) + kk * (bl.b * (a2 - a1) - bl.c * (T::lit(2.0) * (a1 + a2))) + i * kk * kk * (ee - bl.b)) / den;
    let t = i * kk * kk * bl.d * cis(-T::lit(2.0) * p.flux) * four / den;
    (r, t)
}

pub fn loop_element_data<T: Real>(p: &LoopParams<T>, k: T) -> Result<ElementData<T>> {
    Ok(element_data(&loop_transfer(p, k)?, k))
}
