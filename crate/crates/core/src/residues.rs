//! Fixed poles of the quantum momentum function and their residues.
//!
//! Each family is written in a mapped variable `y(x)` in which the
//! superpotential is rational. Near a finite pole `y0` of `W` with residue
//! `r`, the momentum function behaves as `b/(y − y0)` where `b` solves
//!
//! ```text
//! b² + iħσb − c₂ = 0,   σ = dy/dx at y0,   c₂ = −2m(r² + kσr)
//! ```
//!
//! and the physical root is the one continuing `i√(2m)·r`. At `y = 0` and
//! `y = ∞` the momentum function is regular with `a² = 2m(E − W²)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{Family, PotentialSpec};
use crate::error::{QhjError, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MappingKind {
    /// `y = x`.
    Identity,
    /// `y = exp(αx)`.
    ExpReal,
    /// `y = exp(iαx)`.
    ExpImag,
    /// `z = exp(2πix/L)`.
    ExpSquareWell,
}

/// The change of variable `y = exp(c·x)` (or the identity) that makes the
/// superpotential rational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableMapping {
    pub kind: MappingKind,
    /// `α`, `2π/L`, or 1 for the identity.
    pub scale: f64,
    /// The constant `c` in `dy/dx = c·y`; 1 for the identity.
    pub rate: Complex64,
}

impl VariableMapping {
    pub fn for_spec(spec: &PotentialSpec) -> Self {
        match spec.family() {
            Family::HarmonicOscillator | Family::HalfLineOscillator => VariableMapping {
                kind: MappingKind::Identity,
                scale: 1.0,
                rate: c(1.0, 0.0),
            },
            Family::SquareWell => {
                let l = spec.width().expect("square well width");
                VariableMapping {
                    kind: MappingKind::ExpSquareWell,
                    scale: 2.0 * PI / l,
                    rate: c(0.0, 2.0 * PI / l),
                }
            }
            f => {
                let (_, _, alpha) = spec.susy_params().expect("shape-invariant parameters");
                if f.is_trigonometric() {
                    VariableMapping {
                        kind: MappingKind::ExpImag,
                        scale: alpha,
                        rate: c(0.0, alpha),
                    }
                } else {
                    VariableMapping {
                        kind: MappingKind::ExpReal,
                        scale: alpha,
                        rate: c(alpha, 0.0),
                    }
                }
            }
        }
    }

    pub fn to_y(&self, x: Complex64) -> Complex64 {
        match self.kind {
            MappingKind::Identity => x,
            _ => (self.rate * x).exp(),
        }
    }

    /// Principal preimage of `y`.
    pub fn to_x(&self, y: Complex64) -> Complex64 {
        match self.kind {
            MappingKind::Identity => y,
            _ => y.ln() / self.rate,
        }
    }

    /// `dy/dx` at `y`.
    pub fn sigma(&self, y: Complex64) -> Complex64 {
        match self.kind {
            MappingKind::Identity => c(1.0, 0.0),
            _ => self.rate * y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PoleKind {
    /// Pole of the superpotential (a singularity of V).
    PotentialSingularity,
    /// Infinite wall where ψ vanishes linearly.
    BoundaryWall,
    /// `y = 0` of an exponential mapping.
    Origin,
    /// The point at infinity of the mapped plane.
    Infinity,
}

impl fmt::Display for PoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PoleKind::PotentialSingularity => "potential-singularity",
            PoleKind::BoundaryWall => "boundary-wall",
            PoleKind::Origin => "origin",
            PoleKind::Infinity => "infinity",
        };
        f.write_str(s)
    }
}

/// A fixed (energy-independent) singular point of the momentum function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPole {
    pub kind: PoleKind,
    /// Location in the mapped plane; unused for `Infinity`.
    pub y: Complex64,
    /// Residue of `W` at a finite pole, or the limit of `W` at `Origin`
    /// and `Infinity` (the slope `√(m/2)·ω` for the oscillator's infinity).
    pub omega: Complex64,
    /// `dy/dx` at the pole.
    pub sigma: Complex64,
    /// Coefficient of the leading `1/(y − y0)²` term of `2m(E − V)`;
    /// for the oscillator's infinity, of the `x²` term.
    pub c2: Complex64,
    /// Sign applied to the principal square root at `Origin`/`Infinity`.
    pub branch_sign: f64,
}

impl FixedPole {
    pub fn label(&self) -> String {
        match self.kind {
            PoleKind::Origin => "y=0".to_string(),
            PoleKind::Infinity => "y=inf".to_string(),
            _ => format!("y={}", fmt_complex(self.y)),
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// The two roots of the indicial equation at a pole, the anchor used to
/// choose between them and the chosen one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaurentBranch {
    pub candidates: [Complex64; 2],
    /// Index into `candidates` of the physical root.
    pub selected_index: usize,
    pub anchor: Complex64,
    pub selected: Complex64,
}

fn finite_pole(
    spec: &PotentialSpec,
    map: &VariableMapping,
    kind: PoleKind,
    y: Complex64,
    r: Complex64,
) -> FixedPole {
    let u = spec.units();
    let sigma = map.sigma(y);
    let c2 = -2.0 * u.mass * (r * r + u.k() * sigma * r);
    FixedPole {
        kind,
        y,
        omega: r,
        sigma,
        c2,
        branch_sign: 1.0,
    }
}

fn regular_point(
    spec: &PotentialSpec,
    kind: PoleKind,
    w: Complex64,
    sign: Option<f64>,
) -> FixedPole {
    let m2 = 2.0 * spec.units().mass;
    let branch_sign = sign.unwrap_or_else(|| {
        // fix the sign so that the root at E = 0 equals i√(2m)·W
        let anchor = I * m2.sqrt() * w;
        let root = principal_sqrt(-m2 * w * w);
        if (root - anchor).norm() <= (root + anchor).norm() {
            1.0
        } else {
            -1.0
        }
    });
    FixedPole {
        kind,
        y: c(0.0, 0.0),
        omega: w,
        sigma: c(0.0, 0.0),
        c2: c(0.0, 0.0),
        branch_sign,
    }
}

/// Principal square root with a signed-zero imaginary part normalised to
/// `+0`, so that negative reals map to the positive imaginary axis.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex64::new(z.re, im).sqrt()
}

/// All fixed poles of the family, finite poles first, then `Origin`,
/// then `Infinity`.
pub fn fixed_poles(spec: &PotentialSpec) -> Vec<FixedPole> {
    let map = VariableMapping::for_spec(spec);
    let fam = spec.family();
    let one = c(1.0, 0.0);
    match fam {
        Family::HarmonicOscillator | Family::HalfLineOscillator => {
            let u = spec.units();
            let omega = spec.omega().expect("oscillator frequency");
            let slope = (u.mass / 2.0).sqrt() * omega;
            let inf = FixedPole {
                kind: PoleKind::Infinity,
                y: c(0.0, 0.0),
                omega: c(slope, 0.0),
                sigma: c(0.0, 0.0),
                c2: c(-u.mass * u.mass * omega * omega, 0.0),
                branch_sign: 1.0,
            };
            if fam == Family::HalfLineOscillator {
                let wall =
                    finite_pole(spec, &map, PoleKind::BoundaryWall, c(0.0, 0.0), c(0.0, 0.0));
                vec![wall, inf]
            } else {
                vec![inf]
            }
        }
        Family::SquareWell => vec![
            finite_pole(spec, &map, PoleKind::BoundaryWall, one, c(0.0, 0.0)),
            regular_point(spec, PoleKind::Origin, c(0.0, 0.0), Some(-1.0)),
            regular_point(spec, PoleKind::Infinity, c(0.0, 0.0), Some(1.0)),
        ],
        _ => {
            let (a, b, _) = spec.susy_params().expect("shape-invariant parameters");
            let s = PoleKind::PotentialSingularity;
            let (poles, w0, winf): (Vec<(Complex64, Complex64)>, Complex64, Complex64) = match fam {
                Family::Eckart => (
                    vec![(one, c(-a, 0.0)), (-one, c(a, 0.0))],
                    c(a + b / a, 0.0),
                    c(b / a - a, 0.0),
                ),
                Family::ScarfII => (vec![(I, c(b, a)), (-I, c(b, -a))], c(-a, 0.0), c(a, 0.0)),
                Family::RosenMorseII => (
                    vec![(I, c(0.0, a)), (-I, c(0.0, -a))],
                    c(-a + b / a, 0.0),
                    c(a + b / a, 0.0),
                ),
                Family::GenPoschlTeller => (
                    vec![(one, c(a - b, 0.0)), (-one, c(-a - b, 0.0))],
                    c(-a, 0.0),
                    c(a, 0.0),
                ),
                Family::ScarfI => (
                    vec![(I, c(a - b, 0.0)), (-I, c(-a - b, 0.0))],
                    c(0.0, a),
                    c(0.0, -a),
                ),
                Family::RosenMorseI => (
                    vec![(one, c(0.0, -a)), (-one, c(0.0, a))],
                    c(-b / a, a),
                    c(-b / a, -a),
                ),
                _ => unreachable!(),
            };
            let mut out: Vec<FixedPole> = poles
                .into_iter()
                .map(|(y, r)| finite_pole(spec, &map, s, y, r))
                .collect();
            out.push(regular_point(spec, PoleKind::Origin, w0, None));
            out.push(regular_point(spec, PoleKind::Infinity, winf, None));
            out
        }
    }
}

/// Location of a finite pole on the x-plane (principal branch).
pub fn pole_x_location(spec: &PotentialSpec, pole: &FixedPole) -> Option<Complex64> {
    match pole.kind {
        PoleKind::PotentialSingularity | PoleKind::BoundaryWall => {
            Some(VariableMapping::for_spec(spec).to_x(pole.y))
        }
        _ => None,
    }
}

/// The two roots of the indicial quadratic at a finite pole, or of
/// `b² = c₂` at the oscillator's infinity. Energy-independent.
pub fn residue_candidates(pole: &FixedPole, spec: &PotentialSpec) -> Result<[Complex64; 2]> {
    let hbar = spec.units().hbar;
    match pole.kind {
        PoleKind::PotentialSingularity | PoleKind::BoundaryWall => {
            let disc = -hbar * hbar * pole.sigma * pole.sigma + 4.0 * pole.c2;
            let root = principal_sqrt(disc);
            let scale = hbar * pole.sigma.norm() + pole.c2.norm().sqrt();
            if root.norm() <= 1e-13 * scale {
                return Err(QhjError::DegenerateResidue(pole.label()));
            }
            let base = -I * hbar * pole.sigma;
            Ok([(base + root) / 2.0, (base - root) / 2.0])
        }
        PoleKind::Infinity if pole.c2 != c(0.0, 0.0) => {
            let root = principal_sqrt(pole.c2);
            Ok([root, -root])
        }
        _ => Err(QhjError::Contract(format!(
            "{} at {} is a regular point; its expansion depends on the energy",
            pole.kind,
            pole.label()
        ))),
    }
}

/// Value the physical branch must continue: `i√(2m)·W` at the pole.
fn anchor(pole: &FixedPole, spec: &PotentialSpec) -> Complex64 {
    I * spec.units().sqrt_2m() * pole.omega
}

/// Chooses the physical root: at a wall the non-zero one, elsewhere the
/// one nearest the anchor `i√(2m)·r`.
pub fn select_branch(
    pole: &FixedPole,
    spec: &PotentialSpec,
    candidates: [Complex64; 2],
) -> Result<Complex64> {
    let [p, q] = candidates;
    if p == q {
        return Err(QhjError::DegenerateResidue(pole.label()));
    }
    let target = match pole.kind {
        PoleKind::BoundaryWall => c(0.0, 0.0),
        _ => anchor(pole, spec),
    };
    let (dp, dq) = ((p - target).norm(), (q - target).norm());
    if (dp - dq).abs() <= 1e-12 * (dp + dq) {
        return Err(QhjError::BranchSelection(pole.label()));
    }
    let nearer = if dp < dq { p } else { q };
    let other = if dp < dq { q } else { p };
    if pole.kind == PoleKind::BoundaryWall {
        return Ok(other);
    }
    if (nearer - target).norm() > 1e-9 * (1.0 + target.norm()) {
        return Err(QhjError::BranchSelection(pole.label()));
    }
    Ok(nearer)
}

/// Candidates, anchor and selected coefficient at any fixed pole. At
/// `Origin`/`Infinity` these are `±√(2m(E − W²))` and the sign-fixed root.
pub fn laurent_branch(
    pole: &FixedPole,
    spec: &PotentialSpec,
    energy: f64,
) -> Result<LaurentBranch> {
    match pole.kind {
        PoleKind::Origin | PoleKind::Infinity if pole.c2 == c(0.0, 0.0) => {
            let w = 2.0 * spec.units().mass * (energy - pole.omega * pole.omega);
            if w.norm() == 0.0 {
                return Err(QhjError::Window {
                    energy,
                    lo: energy,
                    hi: energy,
                });
            }
            let root = principal_sqrt(w);
            let selected = pole.branch_sign * root;
            Ok(LaurentBranch {
                candidates: [root, -root],
                selected_index: if pole.branch_sign > 0.0 { 0 } else { 1 },
                anchor: anchor(pole, spec),
                selected,
            })
        }
        _ => {
            let candidates = residue_candidates(pole, spec)?;
            let selected = select_branch(pole, spec, candidates)?;
            Ok(LaurentBranch {
                candidates,
                selected_index: if selected == candidates[0] { 0 } else { 1 },
                anchor: anchor(pole, spec),
                selected,
            })
        }
    }
}

/// `(1/2π)·∮ p dx` around one finite pole or around `y = 0`,
/// counter-clockwise in the mapped plane.
pub fn gamma_contribution(
    pole: &FixedPole,
    spec: &PotentialSpec,
    energy: f64,
) -> Result<Complex64> {
    match pole.kind {
        PoleKind::PotentialSingularity | PoleKind::BoundaryWall => {
            let b = laurent_branch(pole, spec, energy)?.selected;
            Ok(I * b / pole.sigma)
        }
        PoleKind::Origin => {
            let a0 = laurent_branch(pole, spec, energy)?.selected;
            Ok(I * a0 / VariableMapping::for_spec(spec).rate)
        }
        PoleKind::Infinity => Err(QhjError::Contract(
            "use infinity_contribution for the point at infinity".into(),
        )),
    }
}

/// `(1/2π)·∮ p dx` around a large counter-clockwise circle.
pub fn infinity_contribution(spec: &PotentialSpec, energy: f64) -> Result<Complex64> {
    let pole = fixed_poles(spec)
        .into_iter()
        .find(|p| p.kind == PoleKind::Infinity)
        .ok_or_else(|| QhjError::Contract("family has no pole at infinity".into()))?;
    if pole.c2 != c(0.0, 0.0) {
        // p = b₁x + a₀ + a₁/x + …  with a₀ = 0
        let b1 = laurent_branch(&pole, spec, energy)?.selected;
        let u = spec.units();
        let a1 = (2.0 * u.mass * energy + I * u.hbar * b1) / (2.0 * b1);
        Ok(I * a1)
    } else {
        let a = laurent_branch(&pole, spec, energy)?.selected;
        Ok(I * a / VariableMapping::for_spec(spec).rate)
    }
}

/// Factor used when reporting contributions: α for the shape-invariant
/// families (which makes them dimension-free in x), 1 otherwise.
pub fn report_scale(spec: &PotentialSpec) -> f64 {
    spec.susy_params().map(|(_, _, alpha)| alpha).unwrap_or(1.0)
}
