//! Dense complex Gaussian elimination for the small systems used as oracles.

use crate::error::{Error, Result};
use crate::real::{Real, C};

/// Solves A x = b in place (partial pivoting). `a` is row-major n×n.
pub fn solve<T: Real>(mut a: Vec<Vec<C<T>>>, mut b: Vec<C<T>>) -> Result<Vec<C<T>>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()));
    let tiny = scale * T::epsilon() * T::usize(n.max(1));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap()).unwrap();
        if !(a[piv][col].norm() > tiny) {
            return Err(Error::Singular);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f.norm() == T::zero() {
                continue;
            }
            for j in col..n {
                let v = a[col][j];
                a[row][j] = a[row][j] - f * v;
            }
            let v = b[col];
            b[row] = b[row] - f * v;
        }
    }
    let mut x = b;
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s = s - a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Ok(x)
}
