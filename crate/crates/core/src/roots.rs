//! Bracketed scalar root finding.
//!
//! The solver keeps a sign-changing bracket at all times and tries a secant
//! step first; a bisection step is taken whenever the secant estimate leaves
//! the bracket or the bracket fails to shrink fast enough.

use crate::error::{QhjError, Result};

pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Finds `x` in `[lo, hi]` with `f(x) = 0` given `f(lo)` and `f(hi)` of
/// opposite sign. Stops when the bracket width is at most `tol * (1 + |x|)`.
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(QhjError::Contract(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(QhjError::Contract(format!(
            "no sign change on [{a}, {b}]: f = ({fa}, {fb})"
        )));
    }
    let mut force_bisection = false;
    for it in 1..=MAX_ITERATIONS {
        let width = b - a;
        let mid = 0.5 * (a + b);
        if width <= tol * (1.0 + mid.abs()) {
            return Ok(Root {
                x: mid,
                iterations: it,
            });
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if !force_bisection && secant.is_finite() && secant > a && secant < b {
            // keep away from the endpoints so the bracket always shrinks
            let guard = 1e-3 * width;
            secant.clamp(a + guard, b - guard)
        } else {
            mid
        };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Root { x, iterations: it });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisection = b - a > 0.5 * width;
    }
    Err(QhjError::Convergence(MAX_ITERATIONS))
}

/// All sign changes of `f` on `[lo, hi]` found by scanning `samples`
/// uniform points, each refined by bisection to machine precision.
/// Exact zeros on the grid are reported once.
pub fn scan_roots<F>(f: F, lo: f64, hi: f64, samples: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let samples = samples.max(2);
    let h = (hi - lo) / (samples - 1) as f64;
    let mut roots = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        roots.push(lo);
    }
    for i in 1..samples {
        let x = if i == samples - 1 {
            hi
        } else {
            lo + h * i as f64
        };
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0
            && fx.is_finite()
            && f_prev.is_finite()
            && fx.signum() != f_prev.signum()
        {
            roots.push(bisect_to_precision(&f, x_prev, x, f_prev));
        }
        x_prev = x;
        f_prev = fx;
    }
    roots
}

fn bisect_to_precision<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_root(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
        assert!(r.iterations < 60);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let err = bracketed_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).unwrap_err();
        assert_eq!(err.code(), "contract");
    }

    #[test]
    fn steep_function_still_converges() {
        let r = bracketed_root(|x| Ok((50.0 * (x - 0.3)).tanh()), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn scan_finds_all_sine_zeros() {
        let r = scan_roots(|x| x.sin(), 0.5, 10.0, 1000);
        assert_eq!(r.len(), 3);
        for (k, x) in r.iter().enumerate() {
            assert!((x - std::f64::consts::PI * (k + 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 1.25).powi(2) + 3.0, -4.0, 5.0);
        assert!((x - 1.25).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-13);
    }
}
