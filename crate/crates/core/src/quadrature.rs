//! Adaptive Gauss-Kronrod (7/15) quadrature.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub n_evals: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            n_evals: 0,
        }
    }

    pub fn add(self, other: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            n_evals: self.n_evals + other.n_evals,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]`, repeatedly bisecting the sub-interval with
/// the largest error estimate until the summed estimate is below
/// `max(abs_tol, rel_tol*|I|)`, is at roundoff level, or `max_subdivisions`
/// bisections have been made.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadratureResult {
    if a == b {
        return QuadratureResult::zero();
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut pieces = vec![Piece {
        a,
        b,
        value: v,
        err: e,
    }];
    let mut evals = 15;
    for _ in 0..max_subdivisions {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        let tol = abs_tol.max(rel_tol * value.abs());
        if err <= tol
            || err <= 50.0 * f64::EPSILON * pieces.iter().map(|p| p.value.abs()).sum::<f64>()
        {
            break;
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let p = pieces.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            pieces.push(p);
            break;
        }
        let (lv, le) = kronrod15(&f, p.a, m);
        let (rv, re) = kronrod15(&f, m, p.b);
        evals += 30;
        pieces.push(Piece {
            a: p.a,
            b: m,
            value: lv,
            err: le,
        });
        pieces.push(Piece {
            a: m,
            b: p.b,
            value: rv,
            err: re,
        });
    }
    QuadratureResult {
        value: pieces.iter().map(|p| p.value).sum(),
        abs_error_estimate: pieces.iter().map(|p| p.err).sum(),
        n_evals: evals,
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integral of `g` over `[x1, x2]` where `g` vanishes like a square root at
/// both ends. Each half is mapped by `x = x_end ± t²`, which turns the
/// endpoint behaviour into a smooth integrand.
pub fn integrate_sqrt_endpoints<F: Fn(f64) -> f64>(
    g: F,
    x1: f64,
    x2: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadratureResult {
    if x2 <= x1 {
        return QuadratureResult::zero();
    }
    let mid = 0.5 * (x1 + x2);
    let span = (mid - x1).sqrt();
    let abs_tol = 1e-300;
    let left = integrate(
        |t| 2.0 * t * g(x1 + t * t),
        0.0,
        span,
        abs_tol,
        rel_tol,
        max_subdivisions,
    );
    let right = integrate(
        |t| 2.0 * t * g(x2 - t * t),
        0.0,
        span,
        abs_tol,
        rel_tol,
        max_subdivisions,
    );
    left.add(right)
}
