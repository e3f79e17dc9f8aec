//! WKB and SWKB integrals, their quantized levels, and the residue of the
//! classical momentum around a pole of the potential.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::catalog::{Endpoint, MaxLevel, PotentialSpec};
use crate::error::{QhjError, Result};
use crate::quadrature::{integrate_sqrt_endpoints, QuadratureResult};
use crate::quantizer::real_window;
use crate::residues::{fixed_poles, pole_x_location, PoleKind};
use crate::roots::{bracketed_root, scan_roots};

const REL_TOL: f64 = 1e-12;
const MAX_SUBDIVISIONS: usize = 400;

fn classical_interval(spec: &PotentialSpec, energy: f64) -> Result<(f64, f64)> {
    let tp = spec.turning_points(energy)?;
    match tp.as_slice() {
        [x1, x2] => Ok((*x1, *x2)),
        [] | [_] => Err(QhjError::NoClassicalRegion {
            energy,
            infimum: spec.potential_infimum().1,
        }),
        _ => Err(QhjError::Contract(format!(
            "{} turning points at E = {energy}; a single well is required",
            tp.len()
        ))),
    }
}

/// `∫ √(2m(E − V)) dx` between the two turning points (or walls).
pub fn wkb_integral(spec: &PotentialSpec, energy: f64) -> Result<QuadratureResult> {
    let (x1, x2) = classical_interval(spec, energy)?;
    let m2 = 2.0 * spec.units().mass;
    let inner = |x: f64| {
        let v = if x > x1 && x < x2 {
            spec.potential_value(x).unwrap_or(f64::INFINITY)
        } else {
            energy
        };
        (m2 * (energy - v)).max(0.0).sqrt()
    };
    Ok(integrate_sqrt_endpoints(
        inner,
        x1,
        x2,
        REL_TOL,
        MAX_SUBDIVISIONS,
    ))
}

/// `∫ √(2m(E − W²)) dx` between the zeros of `E − W²`. `E` is measured
/// from the bottom of the superpotential's partner, i.e. without the
/// ground-state shift.
pub fn swkb_integral(spec: &PotentialSpec, energy: f64) -> Result<QuadratureResult> {
    // the interval collapses at E = 0; energies within roundoff of it are
    // treated the same way rather than searched for two coincident roots
    let collapse = 1e-12 * spec.energy_scale();
    if energy < -collapse || energy.is_nan() {
        return Err(QhjError::NoClassicalRegion {
            energy,
            infimum: 0.0,
        });
    }
    if energy <= collapse {
        return Ok(QuadratureResult::zero());
    }
    let (lo, hi) = spec.scan_interval();
    let g = |x: f64| match spec.superpotential_value(x) {
        Ok(w) => energy - w * w,
        Err(_) => f64::NEG_INFINITY,
    };
    let roots = scan_roots(g, lo, hi, 20_000);
    let (x1, x2) = match roots.as_slice() {
        [x1, x2] => (*x1, *x2),
        _ => {
            return Err(QhjError::Contract(format!(
                "E − W² has {} zeros at E = {energy}; expected 2",
                roots.len()
            )))
        }
    };
    let m2 = 2.0 * spec.units().mass;
    let inner = |x: f64| {
        let w = spec.superpotential_value(x).unwrap_or(f64::INFINITY);
        (m2 * (energy - w * w)).max(0.0).sqrt()
    };
    Ok(integrate_sqrt_endpoints(
        inner,
        x1,
        x2,
        REL_TOL,
        MAX_SUBDIVISIONS,
    ))
}

/// Solves `integral(E) = target` by bracket expansion from `lo`.
fn solve_integral<F>(
    spec: &PotentialSpec,
    n: usize,
    lo: f64,
    target: f64,
    tol: f64,
    unshifted: bool,
    integral: F,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let window = real_window(spec);
    let shift = if unshifted {
        spec.ground_state_shift()?
    } else {
        0.0
    };
    let scale = spec.energy_scale();
    let cap = match spec.continuum_threshold() {
        Some(t) => (t - shift).min(window.e_hi) - 1e-12 * (scale + t.abs()),
        None => window.e_hi,
    };
    let f = |e: f64| integral(e).map(|v| v - target);
    let mut step = scale;
    let mut hi = lo + step;
    for _ in 0..200 {
        if hi >= cap {
            hi = cap;
            if f(hi)? < 0.0 {
                return Err(QhjError::NoBoundState {
                    n,
                    reason: "semiclassical integral stays below its target below the threshold"
                        .into(),
                });
            }
            return Ok(bracketed_root(f, lo, hi, tol)?.x);
        }
        if f(hi)? >= 0.0 {
            return Ok(bracketed_root(f, lo, hi, tol)?.x);
        }
        step *= 2.0;
        hi = lo + step;
    }
    Err(QhjError::Convergence(200))
}

fn check_level(spec: &PotentialSpec, n: usize) -> Result<()> {
    match spec.max_level() {
        MaxLevel::Finite(max) if n > max => Err(QhjError::NoBoundState {
            n,
            reason: format!("{} has bound levels only up to n = {max}", spec.family()),
        }),
        _ => Ok(()),
    }
}

/// SWKB level: `∫ √(2m(E − W²)) dx = nπħ`, with `E` measured without the
/// ground-state shift (add [`PotentialSpec::ground_state_shift`] to compare
/// with the spectrum). Exact for shape-invariant potentials; `n = 0` is 0.
pub fn swkb_level(spec: &PotentialSpec, n: usize, tol: f64) -> Result<f64> {
    check_level(spec, n)?;
    spec.ground_state_shift()?;
    if n == 0 {
        return Ok(0.0);
    }
    let target = n as f64 * PI * spec.units().hbar;
    let integral = |e: f64| {
        if e <= 0.0 {
            Ok(0.0)
        } else {
            swkb_integral(spec, e).map(|q| q.value)
        }
    };
    solve_integral(spec, n, 0.0, target, tol, true, integral)
}

/// Plain WKB level: `∫ p_c dx = πħ(n + μ/4)` with Maslov index `μ` counting
/// 1 per smooth turning point and 2 per hard end.
pub fn wkb_level(spec: &PotentialSpec, n: usize, tol: f64) -> Result<f64> {
    check_level(spec, n)?;
    let (l, r) = spec.endpoints();
    let hard = |e: Endpoint| match e {
        Endpoint::Regular { exponent, .. } if exponent == 1.0 => 2.0,
        _ => 1.0,
    };
    let maslov = hard(l) + hard(r);
    let target = PI * spec.units().hbar * (n as f64 + maslov / 4.0);
    let (_, vmin) = spec.potential_infimum();
    let integral = |e: f64| match wkb_integral(spec, e) {
        Ok(q) => Ok(q.value),
        // too close to the bottom for the scan to separate the turning points
        Err(QhjError::NoClassicalRegion { .. }) => Ok(0.0),
        Err(err) => Err(err),
    };
    solve_integral(spec, n, vmin, target, tol, false, integral)
}

/// `(1/2π)∮ √(2m(E − W²)) dx` on the counter-clockwise circle of `radius`
/// around `pole_x`, by the trapezoidal rule. The branch starts at the root
/// nearest `i√(2m)·W` and is continued by proximity; a jump larger than a
/// quarter of the modulus means the circle crossed a cut.
pub fn classical_integrand_residue(
    spec: &PotentialSpec,
    pole_x: Complex64,
    energy: f64,
    radius: f64,
) -> Result<Complex64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(QhjError::Contract(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let samples = 2048;
    let u = spec.units();
    let m2 = 2.0 * u.mass;
    let i_sqrt_2m = Complex64::new(0.0, u.sqrt_2m());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut first: Option<Complex64> = None;
    let mut prev: Option<Complex64> = None;
    for j in 0..samples {
        let d = radius * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64);
        let w = spec.superpotential_complex(pole_x + d)?;
        let root = (m2 * (energy - w * w)).sqrt();
        let reference = prev.unwrap_or(i_sqrt_2m * w);
        let p = if (root - reference).norm() <= (root + reference).norm() {
            root
        } else {
            -root
        };
        if let Some(pp) = prev {
            if (p - pp).norm() > 0.25 * p.norm().max(pp.norm()) {
                return Err(QhjError::BranchCrossing(radius));
            }
        }
        first.get_or_insert(p);
        prev = Some(p);
        sum += p * d;
    }
    if let (Some(f), Some(l)) = (first, prev) {
        if (f - l).norm() > 0.25 * f.norm().max(l.norm()) {
            return Err(QhjError::BranchCrossing(radius));
        }
    }
    // dx = i·d·dθ, so (1/2π)∮ p dx = i·mean(p·d)
    Ok(Complex64::new(0.0, 1.0) * sum / samples as f64)
}

/// [`classical_integrand_residue`] with the radius set to 5% of the distance
/// to the nearest other pole, halved up to four times on a branch crossing.
pub fn classical_integrand_residue_auto(
    spec: &PotentialSpec,
    pole_x: Complex64,
    energy: f64,
) -> Result<Complex64> {
    let mut radius = 0.05 * nearest_feature(spec, pole_x);
    let mut last = QhjError::BranchCrossing(radius);
    for _ in 0..5 {
        match classical_integrand_residue(spec, pole_x, energy, radius) {
            Err(e @ QhjError::BranchCrossing(_)) => {
                last = e;
                radius *= 0.5;
            }
            other => return other,
        }
    }
    Err(last)
}

fn nearest_feature(spec: &PotentialSpec, x0: Complex64) -> f64 {
    let period = match spec.susy_params() {
        Some((_, _, alpha)) if spec.family().is_trigonometric() => {
            Complex64::new(2.0 * PI / alpha, 0.0)
        }
        Some((_, _, alpha)) => Complex64::new(0.0, 2.0 * PI / alpha),
        None => Complex64::new(0.0, 0.0),
    };
    let mut best = spec.length_scale();
    for p in fixed_poles(spec) {
        if !matches!(
            p.kind,
            PoleKind::PotentialSingularity | PoleKind::BoundaryWall
        ) {
            continue;
        }
        let Some(xp) = pole_x_location(spec, &p) else {
            continue;
        };
        for k in -2..=2 {
            let d = (xp + period * k as f64 - x0).norm();
            if d > 1e-9 * best {
                best = best.min(d);
            }
        }
    }
    best
}
