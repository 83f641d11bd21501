//! The tooth equation −u″ + V u = k² u on [0, L] with u(L) = 0, u′(L) = 1,
//! integrated backwards to x = 0. Complex k is allowed so the same code can
//! be continued off the real axis.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::{cr, Real, C};

/// Potential on the tooth. `Sampled` holds values on a uniform grid over
/// [0, L] (endpoints included) and is linearly interpolated.
#[derive(Clone)]
pub enum Potential<T> {
    Zero,
    Constant(T),
    Sampled(Vec<T>),
    Func(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: fmt::Debug> fmt::Debug for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => write!(f, "Zero"),
            Potential::Constant(v) => write!(f, "Constant({v:?})"),
            Potential::Sampled(v) => write!(f, "Sampled({} pts)", v.len()),
            Potential::Func(_) => write!(f, "Func(..)"),
        }
    }
}

impl<T: Real> Potential<T> {
    pub fn eval(&self, x: T, len: T) -> T {
        match self {
            Potential::Zero => T::zero(),
            Potential::Constant(v) => *v,
            Potential::Sampled(v) => {
                if v.len() < 2 {
                    return v.first().copied().unwrap_or(T::zero());
                }
                let m = T::usize(v.len() - 1);
                let s = (x / len * m).max(T::zero()).min(m);
                let i = s.floor().to_usize().unwrap().min(v.len() - 2);
                let w = s - T::usize(i);
                v[i] * (T::one() - w) + v[i + 1] * w
            }
            Potential::Func(f) => f(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToothSolution<T> {
    pub u0: C<T>,
    pub du0: C<T>,
    pub k: C<T>,
    /// accepted steps (0 for the closed-form paths)
    pub steps: usize,
    /// largest accepted local error estimate
    pub err_est: T,
}

/// u(0), u′(0) for a constant potential: u = sin(q(x−L))/q with q² = k² − v0.
fn constant_tooth<T: Real>(v0: T, len: T, k: C<T>) -> ToothSolution<T> {
    let q = (k * k - cr(v0)).sqrt();
    let ql = q * len;
    let u0 = if ql.norm() < T::lit(1e-4) {
        // −L(1 − (qL)²/6 + (qL)⁴/120)
        let z = ql * ql;
        -(cr(T::one()) - z / T::lit(6.0) + z * z / T::lit(120.0)) * len
    } else {
        -ql.sin() / q
    };
    ToothSolution { u0, du0: ql.cos(), k, steps: 0, err_est: T::zero() }
}

/// Solves the tooth problem, using closed forms for zero and constant
/// potentials and the adaptive integrator otherwise.
pub fn solve_tooth<T: Real>(v: &Potential<T>, len: T, k: C<T>) -> Result<ToothSolution<T>> {
    match v {
        Potential::Zero => Ok(constant_tooth(T::zero(), len, k)),
        Potential::Constant(v0) => Ok(constant_tooth(*v0, len, k)),
        _ => integrate_tooth(v, len, k),
    }
}

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (error weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State<T> = [C<T>; 2];

fn axpy<T: Real>(y: &State<T>, h: T, terms: &[(f64, &State<T>)]) -> State<T> {
    let mut out = *y;
    for (c, k) in terms {
        let w = h * T::lit(*c);
        out[0] = out[0] + k[0] * w;
        out[1] = out[1] + k[1] * w;
    }
    out
}

/// Forces the adaptive integrator regardless of potential (the closed forms
/// in [`solve_tooth`] serve as its oracle).
pub fn integrate_tooth<T: Real>(v: &Potential<T>, len: T, k: C<T>) -> Result<ToothSolution<T>> {
    integrate_tooth_tol(v, len, k, T::tol(1e-12))
}

pub fn integrate_tooth_tol<T: Real>(v: &Potential<T>, len: T, k: C<T>, rtol: T) -> Result<ToothSolution<T>> {
    if !(len > T::zero()) {
        return Err(Error::Invalid("tooth length must be positive".into()));
    }
    let k2 = k * k;
    let rhs = |x: T, y: &State<T>| -> State<T> { [y[1], (cr(v.eval(x, len)) - k2) * y[0]] };
    let atol = rtol * T::lit(1e-2);
    let max_steps = 2_000_000;
    // integrate x from L down to 0
    let mut x = len;
    let mut y: State<T> = [cr(T::zero()), cr(T::one())];
    let scale = (k.norm() * len).max(T::one());
    let mut h = -(len / (scale * T::lit(50.0)));
    let mut steps = 0usize;
    let mut err_max = T::zero();
    let mut k1 = rhs(x, &y);
    let mut tries = 0usize;
    while x > T::zero() {
        if tries > max_steps {
            return Err(Error::Integrator { steps, msg: "step budget exhausted" });
        }
        tries += 1;
        if x + h < T::zero() {
            h = -x;
        }
        let k2s = rhs(x + h * T::lit(C2), &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(x + h * T::lit(C3), &axpy(&y, h, &[(A31, &k1), (A32, &k2s)]));
        let k4 = rhs(x + h * T::lit(C4), &axpy(&y, h, &[(A41, &k1), (A42, &k2s), (A43, &k3)]));
        let k5 = rhs(x + h * T::lit(C5), &axpy(&y, h, &[(A51, &k1), (A52, &k2s), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(x + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2s), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let yn = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(x + h, &yn);
        let zero = [cr(T::zero()); 2];
        let e = axpy(&zero, h, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        let mut err = T::zero();
        for i in 0..2 {
            let sc = atol + rtol * y[i].norm().max(yn[i].norm());
            err = err.max(e[i].norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Integrator { steps, msg: "non-finite state" });
        }
        let fac = if err == T::zero() { T::lit(5.0) } else { (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2)) };
        if err <= T::one() {
            x = x + h;
            y = yn;
            k1 = k7;
            steps += 1;
            err_max = err_max.max(err * rtol);
            if x.abs() < T::epsilon() * len {
                x = T::zero();
            }
        }
        h = h * fac;
        if h.abs() < T::epsilon() * len {
            return Err(Error::Integrator { steps, msg: "step size underflow" });
        }
    }
    Ok(ToothSolution { u0: y[0], du0: y[1], k, steps, err_est: err_max })
}
