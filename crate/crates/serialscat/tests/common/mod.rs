#![allow(dead_code)]

use rand::Rng;
use serialscat::{C64, SMatrix64};

/// Four-parameter unitary 2×2 matrix read as [[t, r_rev], [r, t_rev]].
pub fn unitary_s(xi: f64, alpha: f64, beta: f64, delta: f64, k: f64) -> SMatrix64 {
    let e = |a: f64| C64::from_polar(1.0, a);
    let g = e(xi);
    SMatrix64 {
        t: g * e(alpha + delta) * beta.cos(),
        r_rev: g * e(delta - alpha) * beta.sin(),
        r: -g * e(alpha - delta) * beta.sin(),
        t_rev: g * e(-(alpha + delta)) * beta.cos(),
        k: C64::new(k, 0.0),
    }
}

pub fn random_s<R: Rng>(rng: &mut R, k: f64) -> SMatrix64 {
    let pi = std::f64::consts::PI;
    unitary_s(
        rng.gen_range(-pi..pi),
        rng.gen_range(-pi..pi),
        rng.gen_range(0.0..1.4),
        rng.gen_range(-pi..pi),
        k,
    )
}

pub fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
