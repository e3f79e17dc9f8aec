//! Action variable from residues and the quantization condition `J(E) = nħ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{EnergyWindow, Family, MaxLevel, PotentialSpec};
use crate::error::{QhjError, Result};
use crate::oracle::{oracle_eigenvalue, OracleConfig};
use crate::residues::{
    fixed_poles, gamma_contribution, infinity_contribution, FixedPole, PoleKind, VariableMapping,
};
use crate::roots::bracketed_root;
use crate::semiclassical::{swkb_level, wkb_level};

/// How the contour around the classical region is deformed:
///
/// ```text
/// multiplicity·J(E) = infinity_sign·I_Γ − Σ_p gamma_signs[p]·I_p + extra_constant
/// ```
///
/// where `I_Γ` is the contribution of the large circle and `I_p` those of
/// the enclosed fixed poles (in the order of [`fixed_poles`], infinity
/// excluded).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourScheme {
    pub multiplicity: f64,
    pub gamma_signs: Vec<f64>,
    pub infinity_sign: f64,
    pub extra_constant: f64,
}

impl ContourScheme {
    pub fn for_spec(spec: &PotentialSpec) -> Self {
        let enclosed = enclosed_poles(spec).len();
        let multiplicity = match spec.family() {
            // the large circle already encloses the whole real axis once
            Family::HarmonicOscillator | Family::SquareWell => 1.0,
            // the real segment is traversed on both sheets of y = exp(cx)
            _ => 2.0,
        };
        ContourScheme {
            multiplicity,
            gamma_signs: vec![1.0; enclosed],
            infinity_sign: 1.0,
            extra_constant: 0.0,
        }
    }

    /// Checks the scheme against the spec's pole list.
    pub fn validate(&self, spec: &PotentialSpec) -> Result<()> {
        let poles = enclosed_poles(spec).len();
        if self.gamma_signs.len() != poles {
            return Err(QhjError::Contract(format!(
                "scheme has {} signs for {poles} enclosed poles",
                self.gamma_signs.len()
            )));
        }
        let unit = |s: f64| s == 1.0 || s == -1.0;
        if !unit(self.infinity_sign) || !self.gamma_signs.iter().all(|&s| unit(s)) {
            return Err(QhjError::Contract("contour signs must be ±1".into()));
        }
        if !(self.multiplicity > 0.0 && self.extra_constant.is_finite()) {
            return Err(QhjError::Contract("multiplicity must be positive".into()));
        }
        Ok(())
    }
}

/// One quantized level, with whatever comparison values were requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: usize,
    pub e_qhj: f64,
    pub e_closed: f64,
    pub e_oracle: Option<f64>,
    pub e_wkb: Option<f64>,
    pub e_swkb: Option<f64>,
    /// `|J(e_qhj) − nħ|`.
    pub j_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub levels: Vec<EnergyLevel>,
    pub notices: Vec<String>,
}

fn enclosed_poles(spec: &PotentialSpec) -> Vec<FixedPole> {
    fixed_poles(spec)
        .into_iter()
        .filter(|p| p.kind != PoleKind::Infinity)
        .collect()
}

/// Interval of energies for which every contour term is real: bounded by
/// the branch points `E = W²` at `y = 0` and `y = ∞` where these are real.
pub fn real_window(spec: &PotentialSpec) -> EnergyWindow {
    let rate = VariableMapping::for_spec(spec).rate;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for p in fixed_poles(spec) {
        let regular = matches!(p.kind, PoleKind::Origin | PoleKind::Infinity) && p.c2.norm() == 0.0;
        let w2 = p.omega * p.omega;
        if !regular || w2.im != 0.0 {
            continue;
        }
        // I = i·a/c is real when a/c is imaginary
        if rate.re != 0.0 {
            hi = hi.min(w2.re);
        } else {
            lo = lo.max(w2.re);
        }
    }
    EnergyWindow { e_lo: lo, e_hi: hi }
}

/// `J(E)` before the reality check.
pub fn action_variable_complex(
    spec: &PotentialSpec,
    scheme: &ContourScheme,
    energy: f64,
) -> Result<Complex64> {
    scheme.validate(spec)?;
    let mut total = scheme.infinity_sign * infinity_contribution(spec, energy)?;
    for (p, s) in enclosed_poles(spec).iter().zip(&scheme.gamma_signs) {
        total -= *s * gamma_contribution(p, spec, energy)?;
    }
    Ok((total + scheme.extra_constant) / scheme.multiplicity)
}

/// The action variable `J(E) = (1/2π)∮ p dx`, evaluated from residues.
pub fn action_variable(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    action_variable_with(spec, &ContourScheme::for_spec(spec), energy)
}

pub fn action_variable_with(
    spec: &PotentialSpec,
    scheme: &ContourScheme,
    energy: f64,
) -> Result<f64> {
    let window = real_window(spec);
    if !energy.is_finite() || !(energy > window.e_lo && energy < window.e_hi) {
        return Err(QhjError::Window {
            energy,
            lo: window.e_lo,
            hi: window.e_hi,
        });
    }
    let j = action_variable_complex(spec, scheme, energy)?;
    let hbar = spec.units().hbar;
    if j.im.abs() > 1e-8 * (hbar + j.re.abs()) {
        return Err(QhjError::BranchInconsistency { energy, imag: j.im });
    }
    Ok(j.re)
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

/// Shape-invariant ground states sit at `E = 0` exactly; true when `J(0)`
/// vanishes to roundoff.
fn exact_ground_state(spec: &PotentialSpec) -> bool {
    if !spec.family().is_shape_invariant() {
        return false;
    }
    let hbar = spec.units().hbar;
    matches!(action_variable(spec, 0.0), Ok(j) if j.abs() <= 1e-12 * (hbar + spec.energy_scale().sqrt()))
}

/// A bracket `[e_lo, e_hi]` inside the real window with
/// `J(e_lo) < nħ ≤ J(e_hi)`, found by doubling from the bottom of the well.
pub fn energy_window(spec: &PotentialSpec, n: usize) -> Result<EnergyWindow> {
    check_level(spec, n)?;
    let target = n as f64 * spec.units().hbar;
    let scale = spec.energy_scale();
    let window = real_window(spec);
    let f = |e: f64| action_variable(spec, e).map(|j| j - target);

    let nudge = 1e-12 * (scale + window.e_lo.abs().min(1e300));
    let (_, vmin) = spec.potential_infimum();
    let lo = if window.e_lo.is_finite() {
        vmin.max(window.e_lo + nudge)
    } else {
        vmin
    };
    let f_lo = f(lo)?;
    if f_lo >= 0.0 {
        return Err(QhjError::NoBoundState {
            n,
            reason: format!(
                "J({lo}) = {} is not below {n}ħ at the bottom of the well",
                f_lo + target
            ),
        });
    }
    let cap = if window.e_hi.is_finite() {
        window.e_hi - 1e-12 * (window.e_hi.abs() + scale)
    } else {
        f64::INFINITY
    };
    let mut step = scale;
    for _ in 0..200 {
        let hi = lo + step;
        if hi >= cap {
            if f(cap)? < 0.0 {
                return Err(QhjError::NoBoundState {
                    n,
                    reason: format!("J stays below nħ up to the window edge {}", window.e_hi),
                });
            }
            return Ok(EnergyWindow {
                e_lo: lo,
                e_hi: cap,
            });
        }
        if f(hi)? >= 0.0 {
            return Ok(EnergyWindow { e_lo: lo, e_hi: hi });
        }
        step *= 2.0;
    }
    Err(QhjError::Convergence(200))
}

/// Solves `J(E) = nħ` for one level; `tol` bounds the relative width of the
/// final energy bracket. Only the QHJ energy and the closed form are filled.
pub fn solve_level(spec: &PotentialSpec, n: usize, tol: f64) -> Result<EnergyLevel> {
    check_level(spec, n)?;
    let target = n as f64 * spec.units().hbar;
    let e = if n == 0 && exact_ground_state(spec) {
        0.0
    } else {
        let bracket = energy_window(spec, n)?;
        let f = |e: f64| action_variable(spec, e).map(|j| j - target);
        bracketed_root(f, bracket.e_lo, bracket.e_hi, tol)?.x
    };
    let j = action_variable(spec, e)?;
    Ok(EnergyLevel {
        n,
        e_qhj: e,
        e_closed: spec.closed_form_energy(n)?,
        e_oracle: None,
        e_wkb: None,
        e_swkb: None,
        j_residual: (j - target).abs(),
    })
}

/// Which comparison values to compute alongside the QHJ energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumOptions {
    pub tol: f64,
    pub oracle: bool,
    pub wkb: bool,
    pub swkb: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol: 1e-13,
            oracle: false,
            wkb: false,
            swkb: false,
        }
    }
}

/// QHJ energies and closed forms for the first `count` levels. Levels that
/// do not exist are skipped with a notice.
pub fn spectrum(spec: &PotentialSpec, count: usize, tol: f64) -> Result<Spectrum> {
    spectrum_with(
        spec,
        count,
        &SpectrumOptions {
            tol,
            ..SpectrumOptions::default()
        },
    )
}

/// [`spectrum`] plus the requested comparison columns. A comparison that
/// fails for a level leaves its column empty and adds a notice.
pub fn spectrum_with(
    spec: &PotentialSpec,
    count: usize,
    options: &SpectrumOptions,
) -> Result<Spectrum> {
    let mut s = qhj_spectrum(spec, count, options.tol)?;
    let oracle_config = OracleConfig::default();
    let shift = spec.ground_state_shift();
    for level in s.levels.iter_mut() {
        let n = level.n;
        let mut note = |what: &str, r: Result<f64>| match r {
            Ok(e) => Some(e),
            Err(e) => {
                s.notices.push(format!("{what} for n = {n}: {e}"));
                None
            }
        };
        if options.oracle {
            level.e_oracle = note(
                "oracle",
                oracle_eigenvalue(spec, n, &oracle_config).map(|o| o.energy),
            );
        }
        if options.wkb {
            level.e_wkb = note("wkb", wkb_level(spec, n, options.tol));
        }
        if options.swkb {
            let e = shift
                .clone()
                .and_then(|c| swkb_level(spec, n, options.tol).map(|e| e + c));
            level.e_swkb = note("swkb", e);
        }
    }
    Ok(s)
}

fn qhj_spectrum(spec: &PotentialSpec, count: usize, tol: f64) -> Result<Spectrum> {
    let mut levels = Vec::with_capacity(count);
    let mut notices = Vec::new();
    for n in 0..count {
        match solve_level(spec, n, tol) {
            Ok(level) => levels.push(level),
            Err(e @ QhjError::NoBoundState { .. }) => notices.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(Spectrum { levels, notices })
}
