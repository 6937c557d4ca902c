//! Small numerical kernels shared by the physics layers: bracketed scalar
//! minimization, bisection, Gauss-Legendre nodes, least squares and a pivoted
//! 4x4 complex solver with a condition estimate.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - phi

/// Brent-style minimization of `f` on `[a, b]` (golden section with
/// parabolic steps). Returns `(x_min, f(x_min))` with `|x - x*| < xtol`.
///
/// `f` may return non-finite values; they are treated as "worse than
/// anything" so the search backs away from them.
pub fn brent_min<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let worse = |fu: f64, fx: f64| !fu.is_finite() || fu > fx;

    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d = 0.0_f64;
    let mut e = 0.0_f64;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = xtol.max(f64::EPSILON * x.abs());
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }

        let mut took_parabolic = false;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                took_parabolic = true;
            }
        }
        if !took_parabolic {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);

        if !worse(fu, fx) {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u >= x {
                b = u;
            } else {
                a = u;
            }
            if !worse(fu, fw) || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if !worse(fu, fv) || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Bisection on a sign-changing bracket. `fa` and `fb` must have opposite
/// signs; converges to `|b - a| < xtol`.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, xtol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..200 {
        if (b - a).abs() < xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // p_n(x) and p_{n-1}(x) by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

/// Shifts `raw` by the multiple of `period` that lands it nearest `anchor`.
pub fn unwrap_near(anchor: f64, raw: f64, period: f64) -> f64 {
    raw + period * libm::round((anchor - raw) / period)
}

/// Least-squares line through `(x_i, y_i)`; returns `(slope, intercept, rms)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        ss += r * r;
    }
    (slope, intercept, libm::sqrt(ss / n))
}

fn inf_norm4(m: &[[Complex64; 4]; 4]) -> f64 {
    let mut best = 0.0_f64;
    for row in m {
        let s: f64 = row.iter().map(|c| c.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Solves the 4x4 complex system `A x = rhs` by Gaussian elimination with
/// partial pivoting, simultaneously inverting `A` for a condition estimate.
///
/// Returns `(x, cond)` with `cond = ||A||_inf * ||A^{-1}||_inf`, or
/// [`Error::SingularSystem`] when a pivot vanishes outright.
pub fn solve4(a: &[[Complex64; 4]; 4], rhs: &[Complex64; 4]) -> Result<([Complex64; 4], f64)> {
    let norm_a = inf_norm4(a);
    // augmented [A | rhs | I]
    let mut m = [[Complex64::new(0.0, 0.0); 9]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i][j];
        }
        m[i][4] = rhs[i];
        m[i][5 + i] = Complex64::new(1.0, 0.0);
    }

    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if m[r][col].norm() > m[piv][col].norm() {
                piv = r;
            }
        }
        if m[piv][col].norm() == 0.0 {
            return Err(Error::SingularSystem {
                cond: f64::INFINITY,
            });
        }
        m.swap(col, piv);
        let d = m[col][col];
        for v in m[col].iter_mut().skip(col) {
            *v /= d;
        }
        let pivot_row = m[col];
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let factor = row[col];
                if factor.norm() != 0.0 {
                    for (v, p) in row.iter_mut().zip(pivot_row).skip(col) {
                        *v -= factor * p;
                    }
                }
            }
        }
    }

    let x = [m[0][4], m[1][4], m[2][4], m[3][4]];
    let mut inv = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            inv[i][j] = m[i][5 + j];
        }
    }
    Ok((x, norm_a * inf_norm4(&inv)))
}
