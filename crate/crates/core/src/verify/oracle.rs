//! Independent single-observer determinant.
//!
//! For `d = 1` the classical construction attaches to each point `i` the
//! degree-`(n-1)` binary form with roots at the directions `t_ij`, `j != i`,
//! and takes the determinant of the coefficient matrix (coefficients
//! reversed with alternating signs, the symplectic dual). This oracle
//! expands those forms and assembles the matrix without touching the
//! dual-form, symmetric-product or row-weighting machinery — only the lift
//! table (the gauge choice) is shared — so agreement with the observer-mode
//! determinant at `d = 1` is a genuine cross-check.

use crate::error::{Error, Result};
use crate::geom::{build_lift_table, Configuration, Space};
use crate::scalar::{Real, C};
use num_complex::Complex;

pub fn classical_as_determinant<T: Real>(cfg: &Configuration<T>) -> Result<C<T>> {
    if cfg.space() == Space::Cp1 {
        return Err(Error::invalid(
            "classical_as_determinant needs a euclidean or hyperbolic configuration",
        ));
    }
    let n = cfg.len();
    let k = n - 1;
    let table = build_lift_table(cfg)?;

    let zero = Complex::new(T::zero(), T::zero());
    let mut matrix = vec![zero; n * n];
    for i in 0..n {
        // expand prod_{j != i} (u_ij v - v_ij u); coeffs[t] multiplies
        // u^(deg - t) v^t
        let mut coeffs = vec![Complex::new(T::one(), T::zero())];
        for j in 0..n {
            if j == i {
                continue;
            }
            let l = table.pair(i, j);
            let (a, b) = (-l.v, l.u); // coefficient of u, coefficient of v
            let mut next = vec![zero; coeffs.len() + 1];
            for (t, &ct) in coeffs.iter().enumerate() {
                next[t] += ct * a;
                next[t + 1] += ct * b;
            }
            coeffs = next;
        }
        // column i in the dual coordinates: row m picks up
        // (-1)^(k-m) coeffs[k-m]
        for row in 0..n {
            let mut entry = coeffs[k - row];
            if (k - row) % 2 == 1 {
                entry = -entry;
            }
            matrix[row * n + i] = entry;
        }
    }

    Ok(plain_determinant(&mut matrix, n))
}

/// Gaussian elimination with partial pivoting, plain pivot product. Local to
/// the oracle so the cross-check does not ride on the shared LU path.
fn plain_determinant<T: Real>(a: &mut [C<T>], n: usize) -> C<T> {
    let mut det = Complex::new(T::one(), T::zero());
    for col in 0..n {
        let mut piv = col;
        let mut mag = a[col * n + col].norm_sqr();
        for r in (col + 1)..n {
            let m = a[r * n + col].norm_sqr();
            if m > mag {
                mag = m;
                piv = r;
            }
        }
        if mag == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if piv != col {
            for cc in 0..n {
                a.swap(col * n + cc, piv * n + cc);
            }
            det = -det;
        }
        let pivot = a[col * n + col];
        det *= pivot;
        for r in (col + 1)..n {
            let f = a[r * n + col] / pivot;
            for cc in (col + 1)..n {
                let sub = f * a[col * n + cc];
                a[r * n + cc] -= sub;
            }
        }
    }
    det
}
