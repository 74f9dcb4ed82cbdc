//! Dense linear algebra on row-major square matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves `A x = b` for symmetric positive definite `A` (row-major, `n × n`).
/// Returns `None` when `A` is not positive definite.
pub fn cholesky_solve<T: Real>(a: &[T], b: &[T], n: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > T::zero()) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

/// Eigenvalues of a real symmetric matrix (row-major), unsorted.
///
/// Householder reduction to tridiagonal form followed by the implicit QL iteration.
pub fn symmetric_eigenvalues<T: Real>(mut a: Vec<T>, n: usize) -> Result<Vec<T>> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: a.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(d)
}

fn tridiagonalize<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale: T = (0..=l).map(|k| a[idx(i, k)].abs()).sum();
            if scale == T::zero() {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] = a[idx(i, k)] / scale;
                    h = h + a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[idx(i, l)] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g = g + a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g = g + a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] = a[idx(j, k)] - (f * e[k] + g * a[idx(i, k)]);
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[idx(i, i)];
    }
    // shift off-diagonal so that e[i] couples d[i] and d[i+1]
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    (d, e)
}

fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence { iterations: iter, residual: e[l].as_f64().abs() });
            }
            let two = T::lit(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_small() {
        let a = [4.0f64, 2.0, 2.0, 3.0];
        let x: Vec<f64> = cholesky_solve(&a, &[2.0, 1.0], 2).unwrap();
        assert!((4.0 * x[0] + 2.0 * x[1] - 2.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 1.0).abs() < 1e-14);
        assert!(cholesky_solve(&[1.0, 2.0, 2.0, 1.0], &[1.0, 1.0], 2).is_none());
    }

    #[test]
    fn eigenvalues_of_known_matrices() {
        let mut ev = symmetric_eigenvalues(vec![2.0f64, 1.0, 1.0, 2.0], 2).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        // path graph Laplacian: 2 - 2cos(kπ/n)
        let n = 7;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let mut ev = symmetric_eigenvalues(a, n).unwrap();
        ev.sort_by(f64::total_cmp);
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let single = symmetric_eigenvalues(vec![5.0f32], 1).unwrap();
        assert_eq!(single, vec![5.0]);
    }
}
