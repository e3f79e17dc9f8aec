//! The nine potential families: parameters, domains, superpotentials,
//! classical momentum, turning points and closed-form spectra.
//!
//! The six shape-invariant families are written in terms of
//! `k = ħ/√(2m)` and `a = α·k`; their potentials satisfy
//! `V = W² − k·W'` with a zero-energy ground state.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::{Complex64, ComplexFloat};
use serde::{Deserialize, Serialize};

use crate::error::{QhjError, Result, Violation};
use crate::roots::{golden_min, scan_roots};

/// Units of action and mass. Both default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let mut v = Vec::new();
        if !(hbar > 0.0 && hbar.is_finite()) {
            v.push(violation("hbar", "hbar > 0", hbar));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            v.push(violation("mass", "mass > 0", mass));
        }
        if v.is_empty() {
            Ok(UnitSystem { hbar, mass })
        } else {
            Err(QhjError::InvalidParameters(v))
        }
    }

    /// √(2m)
    pub fn sqrt_2m(&self) -> f64 {
        (2.0 * self.mass).sqrt()
    }

    /// ħ/√(2m), the factor in front of W' in V = W² − k W'.
    pub fn k(&self) -> f64 {
        self.hbar / self.sqrt_2m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    HarmonicOscillator,
    HalfLineOscillator,
    SquareWell,
    Eckart,
    ScarfII,
    RosenMorseII,
    GenPoschlTeller,
    ScarfI,
    RosenMorseI,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::HarmonicOscillator,
        Family::HalfLineOscillator,
        Family::SquareWell,
        Family::Eckart,
        Family::ScarfII,
        Family::RosenMorseII,
        Family::GenPoschlTeller,
        Family::ScarfI,
        Family::RosenMorseI,
    ];

    /// The five trigonometric/hyperbolic families of the tabulated set.
    pub const TABULATED: [Family; 5] = [
        Family::ScarfII,
        Family::RosenMorseII,
        Family::GenPoschlTeller,
        Family::ScarfI,
        Family::RosenMorseI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::HarmonicOscillator => "harmonic",
            Family::HalfLineOscillator => "half-harmonic",
            Family::SquareWell => "square-well",
            Family::Eckart => "eckart",
            Family::ScarfII => "scarf2",
            Family::RosenMorseII => "rosen-morse2",
            Family::GenPoschlTeller => "gen-poschl-teller",
            Family::ScarfI => "scarf1",
            Family::RosenMorseI => "rosen-morse1",
        }
    }

    pub fn from_name(name: &str) -> Result<Family> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let family = match key.as_str() {
            "harmonic" | "harmonicoscillator" | "oscillator" => Family::HarmonicOscillator,
            "halfharmonic" | "halflineoscillator" | "halfoscillator" | "halfline" => {
                Family::HalfLineOscillator
            }
            "squarewell" | "well" | "box" => Family::SquareWell,
            "eckart" => Family::Eckart,
            "scarf2" | "scarfii" => Family::ScarfII,
            "rosenmorse2" | "rosenmorseii" => Family::RosenMorseII,
            "genposchlteller" | "generalizedposchlteller" | "gpt" | "poschlteller" => {
                Family::GenPoschlTeller
            }
            "scarf1" | "scarfi" => Family::ScarfI,
            "rosenmorse1" | "rosenmorsei" => Family::RosenMorseI,
            _ => return Err(QhjError::UnknownFamily(name.to_string())),
        };
        Ok(family)
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            Family::HarmonicOscillator | Family::HalfLineOscillator => &["omega"],
            Family::SquareWell => &["L"],
            _ => &["A", "B", "alpha"],
        }
    }

    /// Families written through a superpotential with zero ground-state energy.
    pub fn is_shape_invariant(self) -> bool {
        !matches!(
            self,
            Family::HarmonicOscillator | Family::HalfLineOscillator | Family::SquareWell
        )
    }

    /// Families that use the mapping `y = exp(iαx)`.
    pub fn is_trigonometric(self) -> bool {
        matches!(self, Family::ScarfI | Family::RosenMorseI)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain {
    FullLine,
    HalfLine,
    Interval(f64, f64),
}

impl Domain {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Domain::FullLine => (f64::NEG_INFINITY, f64::INFINITY),
            Domain::HalfLine => (0.0, f64::INFINITY),
            Domain::Interval(a, b) => (a, b),
        }
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        let (lo, hi) = self.bounds();
        x > lo && x < hi
    }
}

/// Boundary behaviour of bound-state wavefunctions at one end of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// Infinite end; the wavefunction decays exponentially.
    Decaying,
    /// Finite end at `x` (a wall or an inverse-square singularity) where the
    /// regular solution behaves as `|x − x_end|^exponent`.
    Regular { x: f64, exponent: f64 },
}

/// Largest bound-state index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxLevel {
    Finite(usize),
    Unbounded,
}

impl MaxLevel {
    pub fn admits(self, n: usize) -> bool {
        match self {
            MaxLevel::Finite(m) => n <= m,
            MaxLevel::Unbounded => true,
        }
    }

    /// Number of levels among the first `wanted`.
    pub fn clamp_count(self, wanted: usize) -> usize {
        match self {
            MaxLevel::Finite(m) => wanted.min(m + 1),
            MaxLevel::Unbounded => wanted,
        }
    }
}

/// Closed energy interval in which the contour terms are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyWindow {
    pub e_lo: f64,
    pub e_hi: f64,
}

impl EnergyWindow {
    pub fn new(e_lo: f64, e_hi: f64) -> Result<Self> {
        if e_lo < e_hi {
            Ok(EnergyWindow { e_lo, e_hi })
        } else {
            Err(QhjError::Contract(format!(
                "empty energy window [{e_lo}, {e_hi}]"
            )))
        }
    }

    pub fn contains(&self, e: f64) -> bool {
        e >= self.e_lo && e <= self.e_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Params {
    Oscillator { omega: f64 },
    Well { l: f64 },
    Susy { a: f64, b: f64, alpha: f64 },
}

/// One validated catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    family: Family,
    params: Params,
    units: UnitSystem,
}

fn violation(parameter: &str, constraint: &str, value: f64) -> Violation {
    Violation {
        parameter: parameter.to_string(),
        constraint: constraint.to_string(),
        value,
    }
}

fn lit<T: ComplexFloat<Real = f64>>(v: f64) -> T {
    T::from(v).expect("f64 literal")
}

impl PotentialSpec {
    /// Builds and validates a spec from named parameters.
    pub fn new(family: Family, params: &BTreeMap<String, f64>, units: UnitSystem) -> Result<Self> {
        let units = UnitSystem::new(units.hbar, units.mass)?;
        for key in params.keys() {
            if !family.parameter_names().contains(&key.as_str()) {
                return Err(QhjError::Contract(format!(
                    "parameter `{key}` does not apply to {family}"
                )));
            }
        }
        let get = |name: &str| {
            params
                .get(name)
                .copied()
                .ok_or_else(|| QhjError::MissingParameter(name.to_string()))
        };
        let p = match family {
            Family::HarmonicOscillator | Family::HalfLineOscillator => Params::Oscillator {
                omega: get("omega")?,
            },
            Family::SquareWell => Params::Well { l: get("L")? },
            _ => Params::Susy {
                a: get("A")?,
                b: get("B")?,
                alpha: get("alpha")?,
            },
        };
        let spec = PotentialSpec {
            family,
            params: p,
            units,
        };
        let v = spec.violations();
        if v.is_empty() {
            Ok(spec)
        } else {
            Err(QhjError::InvalidParameters(v))
        }
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        Self::build(Family::HarmonicOscillator, &[("omega", omega)])
    }

    pub fn half_line_oscillator(omega: f64) -> Result<Self> {
        Self::build(Family::HalfLineOscillator, &[("omega", omega)])
    }

    pub fn square_well(l: f64) -> Result<Self> {
        Self::build(Family::SquareWell, &[("L", l)])
    }

    /// Any of the six shape-invariant families.
    pub fn shape_invariant(family: Family, a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !family.is_shape_invariant() {
            return Err(QhjError::Contract(format!(
                "{family} is not parameterised by A, B, alpha"
            )));
        }
        Self::build(family, &[("A", a), ("B", b), ("alpha", alpha)])
    }

    pub fn eckart(a: f64, b: f64, alpha: f64) -> Result<Self> {
        Self::shape_invariant(Family::Eckart, a, b, alpha)
    }

    fn build(family: Family, pairs: &[(&str, f64)]) -> Result<Self> {
        let params = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self::new(family, &params, UnitSystem::default())
    }

    /// Same family and parameters in different units (re-validated).
    pub fn with_units(&self, hbar: f64, mass: f64) -> Result<Self> {
        Self::new(self.family, &self.params(), UnitSystem { hbar, mass })
    }

    /// Same family and units with one parameter replaced (re-validated).
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut p = self.params();
        if !p.contains_key(name) {
            return Err(QhjError::Contract(format!(
                "{} has no parameter `{name}`",
                self.family
            )));
        }
        p.insert(name.to_string(), value);
        Self::new(self.family, &p, self.units)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self.params {
            Params::Oscillator { omega } => {
                m.insert("omega".to_string(), omega);
            }
            Params::Well { l } => {
                m.insert("L".to_string(), l);
            }
            Params::Susy { a, b, alpha } => {
                m.insert("A".to_string(), a);
                m.insert("B".to_string(), b);
                m.insert("alpha".to_string(), alpha);
            }
        }
        m
    }

    /// (A, B, α) for the shape-invariant families.
    pub fn susy_params(&self) -> Option<(f64, f64, f64)> {
        match self.params {
            Params::Susy { a, b, alpha } => Some((a, b, alpha)),
            _ => None,
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self.params {
            Params::Oscillator { omega } => Some(omega),
            _ => None,
        }
    }

    pub fn width(&self) -> Option<f64> {
        match self.params {
            Params::Well { l } => Some(l),
            _ => None,
        }
    }

    /// `α·ħ/√(2m)`, the level spacing parameter of the shape-invariant families.
    pub fn step(&self) -> f64 {
        match self.params {
            Params::Susy { alpha, .. } => alpha * self.units.k(),
            _ => 0.0,
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let finite = |name: &str, x: f64, v: &mut Vec<Violation>| {
            if !x.is_finite() {
                v.push(violation(name, "finite", x));
            }
        };
        match self.params {
            Params::Oscillator { omega } => {
                finite("omega", omega, &mut v);
                if !(omega > 0.0) {
                    v.push(violation("omega", "omega > 0", omega));
                }
            }
            Params::Well { l } => {
                finite("L", l, &mut v);
                if !(l > 0.0) {
                    v.push(violation("L", "L > 0", l));
                }
            }
            Params::Susy { a, b, alpha } => {
                finite("A", a, &mut v);
                finite("B", b, &mut v);
                finite("alpha", alpha, &mut v);
                if !(alpha > 0.0) {
                    v.push(violation("alpha", "alpha > 0", alpha));
                }
                if !(a > 0.0) {
                    v.push(violation("A", "A > 0", a));
                }
                if !v.is_empty() {
                    return v;
                }
                let s = self.step();
                match self.family {
                    Family::Eckart => {
                        if !(b > a * a) {
                            v.push(violation("B", "B > A^2", b));
                        }
                        if !(a > s) {
                            v.push(violation(
                                "A",
                                "A > alpha*hbar/sqrt(2m) (repulsive core)",
                                a,
                            ));
                        }
                    }
                    Family::RosenMorseII => {
                        if !(b.abs() < a * a) {
                            v.push(violation("B", "|B| < A^2", b));
                        }
                    }
                    Family::GenPoschlTeller => {
                        if !(b - a > s) {
                            v.push(violation(
                                "B",
                                "B - A > alpha*hbar/sqrt(2m) (normalisable ground state, repulsive core)",
                                b,
                            ));
                        }
                    }
                    Family::ScarfI => {
                        if !(a - b.abs() > s) {
                            v.push(violation(
                                "B",
                                "A - |B| > alpha*hbar/sqrt(2m) (repulsive walls)",
                                b,
                            ));
                        }
                    }
                    Family::RosenMorseI => {
                        if !(a > s) {
                            v.push(violation(
                                "A",
                                "A > alpha*hbar/sqrt(2m) (repulsive walls)",
                                a,
                            ));
                        }
                    }
                    _ => {}
                }
            }
        }
        v
    }

    pub fn domain(&self) -> Domain {
        match (self.family, self.params) {
            (Family::HarmonicOscillator | Family::ScarfII | Family::RosenMorseII, _) => {
                Domain::FullLine
            }
            (Family::HalfLineOscillator | Family::Eckart | Family::GenPoschlTeller, _) => {
                Domain::HalfLine
            }
            (Family::SquareWell, Params::Well { l }) => Domain::Interval(0.0, l),
            (Family::ScarfI, Params::Susy { alpha, .. }) => {
                Domain::Interval(-0.5 * PI / alpha, 0.5 * PI / alpha)
            }
            (Family::RosenMorseI, Params::Susy { alpha, .. }) => Domain::Interval(0.0, PI / alpha),
            _ => unreachable!("family/parameter mismatch"),
        }
    }

    /// Characteristic length: 1/α, the oscillator length, or the well width.
    pub fn length_scale(&self) -> f64 {
        match self.params {
            Params::Oscillator { omega } => (self.units.hbar / (self.units.mass * omega)).sqrt(),
            Params::Well { l } => l,
            Params::Susy { alpha, .. } => 1.0 / alpha,
        }
    }

    /// Characteristic energy used to size search steps.
    pub fn energy_scale(&self) -> f64 {
        match self.params {
            Params::Oscillator { omega } => self.units.hbar * omega,
            Params::Well { l } => {
                let u = self.units;
                PI * PI * u.hbar * u.hbar / (2.0 * u.mass * l * l)
            }
            Params::Susy { a, b, .. } => {
                let s = self.step();
                (a * a).max(b.abs()).max(s * s).max(s * a)
            }
        }
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        let d = self.domain();
        if d.contains_interior(x) {
            Ok(())
        } else {
            let (lo, hi) = d.bounds();
            Err(QhjError::Domain { x, lo, hi })
        }
    }

    /// V(x) in energy units.
    pub fn potential_value(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let v = match self.params {
            Params::Oscillator { omega } => 0.5 * self.units.mass * omega * omega * x * x,
            Params::Well { .. } => 0.0,
            Params::Susy { .. } => self.potential_generic::<f64>(x),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QhjError::Singularity(x))
        }
    }

    /// V at a complex point, for the shape-invariant families and oscillators.
    pub fn potential_complex(&self, z: Complex64) -> Result<Complex64> {
        match self.params {
            Params::Oscillator { omega } => Ok(0.5 * self.units.mass * omega * omega * z * z),
            Params::Well { .. } => Err(QhjError::Contract(
                "the square well has no analytic continuation off the real axis".into(),
            )),
            Params::Susy { .. } => Ok(self.potential_generic(z)),
        }
    }

    fn potential_generic<T: ComplexFloat<Real = f64>>(&self, x: T) -> T {
        let Params::Susy { a, b, alpha } = self.params else {
            unreachable!("shape-invariant families only")
        };
        let s = self.step();
        let ax = x * lit::<T>(alpha);
        let one = lit::<T>(1.0);
        match self.family {
            Family::Eckart => {
                let cosech = one / ax.sinh();
                let coth = one / ax.tanh();
                lit::<T>(a * a + b * b / (a * a)) + lit::<T>(a * (a - s)) * cosech * cosech
                    - lit::<T>(2.0 * b) * coth
            }
            Family::ScarfII => {
                let sech = one / ax.cosh();
                let tanh = ax.tanh();
                lit::<T>(a * a)
                    + lit::<T>(b * b - a * a - a * s) * sech * sech
                    + lit::<T>(b * (2.0 * a + s)) * sech * tanh
            }
            Family::RosenMorseII => {
                let sech = one / ax.cosh();
                lit::<T>(a * a + b * b / (a * a)) - lit::<T>(a * (a + s)) * sech * sech
                    + lit::<T>(2.0 * b) * ax.tanh()
            }
            Family::GenPoschlTeller => {
                let cosech = one / ax.sinh();
                let coth = one / ax.tanh();
                lit::<T>(a * a) + lit::<T>(b * b + a * a + a * s) * cosech * cosech
                    - lit::<T>(b * (2.0 * a + s)) * coth * cosech
            }
            Family::ScarfI => {
                let sec = one / ax.cos();
                let tan = ax.tan();
                lit::<T>(-a * a) + lit::<T>(a * a + b * b - a * s) * sec * sec
                    - lit::<T>(b * (2.0 * a - s)) * sec * tan
            }
            Family::RosenMorseI => {
                let cosec = one / ax.sin();
                let cot = one / ax.tan();
                lit::<T>(a * (a - s)) * cosec * cosec
                    + lit::<T>(-a * a + b * b / (a * a))
                    + lit::<T>(2.0 * b) * cot
            }
            _ => unreachable!(),
        }
    }

    /// (W, W') at a point, generic over real and complex arguments.
    fn superpotential_generic<T: ComplexFloat<Real = f64>>(&self, x: T) -> Result<(T, T)> {
        let one = lit::<T>(1.0);
        match self.params {
            Params::Oscillator { omega } => {
                let c = (self.units.mass / 2.0).sqrt() * omega;
                Ok((x * lit::<T>(c), lit::<T>(c)))
            }
            Params::Well { .. } => Err(QhjError::Contract(
                "the square well is not given through a superpotential".into(),
            )),
            Params::Susy { a, b, alpha } => {
                let ax = x * lit::<T>(alpha);
                let (ta, tb, tal) = (lit::<T>(a), lit::<T>(b), lit::<T>(alpha));
                let pair = match self.family {
                    Family::Eckart => {
                        let cosech = one / ax.sinh();
                        (
                            -ta / ax.tanh() + lit::<T>(b / a),
                            ta * tal * cosech * cosech,
                        )
                    }
                    Family::ScarfII => {
                        let sech = one / ax.cosh();
                        let tanh = ax.tanh();
                        (
                            ta * tanh + tb * sech,
                            tal * (ta * sech * sech - tb * sech * tanh),
                        )
                    }
                    Family::RosenMorseII => {
                        let sech = one / ax.cosh();
                        (ta * ax.tanh() + lit::<T>(b / a), ta * tal * sech * sech)
                    }
                    Family::GenPoschlTeller => {
                        let cosech = one / ax.sinh();
                        let coth = one / ax.tanh();
                        (
                            ta * coth - tb * cosech,
                            tal * (-ta * cosech * cosech + tb * cosech * coth),
                        )
                    }
                    Family::ScarfI => {
                        let sec = one / ax.cos();
                        let tan = ax.tan();
                        (ta * tan - tb * sec, tal * (ta * sec * sec - tb * sec * tan))
                    }
                    Family::RosenMorseI => {
                        let cosec = one / ax.sin();
                        (-ta / ax.tan() - lit::<T>(b / a), ta * tal * cosec * cosec)
                    }
                    _ => unreachable!(),
                };
                Ok(pair)
            }
        }
    }

    /// W(x). The oscillators use `W = √(m/2)·ω·x`, which reproduces V up to
    /// the shift ħω/2.
    pub fn superpotential_value(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let (w, _) = self.superpotential_generic(x)?;
        if w.is_finite() {
            Ok(w)
        } else {
            Err(QhjError::Singularity(x))
        }
    }

    /// dW/dx, by the analytic formula.
    pub fn superpotential_derivative(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        let (_, dw) = self.superpotential_generic(x)?;
        if dw.is_finite() {
            Ok(dw)
        } else {
            Err(QhjError::Singularity(x))
        }
    }

    pub fn superpotential_complex(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.superpotential_generic(z)?.0)
    }

    /// Constant `c` in `V = W² − k W' + c`: zero for the shape-invariant
    /// families, ħω/2 for the oscillators.
    pub fn ground_state_shift(&self) -> Result<f64> {
        match self.params {
            Params::Oscillator { omega } => Ok(0.5 * self.units.hbar * omega),
            Params::Well { .. } => Err(QhjError::Contract(
                "the square well is not given through a superpotential".into(),
            )),
            Params::Susy { .. } => Ok(0.0),
        }
    }

    /// p_c²(x, E) = 2m(E − V(x)); negative in forbidden regions.
    pub fn classical_momentum_sq(&self, energy: f64, x: f64) -> Result<f64> {
        Ok(2.0 * self.units.mass * (energy - self.potential_value(x)?))
    }

    /// Boundary behaviour at the two ends of the domain.
    pub fn endpoints(&self) -> (Endpoint, Endpoint) {
        let (lo, hi) = self.domain().bounds();
        let s = self.step();
        match (self.family, self.params) {
            (Family::HarmonicOscillator | Family::ScarfII | Family::RosenMorseII, _) => {
                (Endpoint::Decaying, Endpoint::Decaying)
            }
            (Family::HalfLineOscillator, _) => (
                Endpoint::Regular {
                    x: 0.0,
                    exponent: 1.0,
                },
                Endpoint::Decaying,
            ),
            (Family::SquareWell, _) => (
                Endpoint::Regular {
                    x: lo,
                    exponent: 1.0,
                },
                Endpoint::Regular {
                    x: hi,
                    exponent: 1.0,
                },
            ),
            (Family::Eckart, Params::Susy { a, .. }) => (
                Endpoint::Regular {
                    x: 0.0,
                    exponent: a / s,
                },
                Endpoint::Decaying,
            ),
            (Family::GenPoschlTeller, Params::Susy { a, b, .. }) => (
                Endpoint::Regular {
                    x: 0.0,
                    exponent: (b - a) / s,
                },
                Endpoint::Decaying,
            ),
            (Family::ScarfI, Params::Susy { a, b, .. }) => (
                Endpoint::Regular {
                    x: lo,
                    exponent: (a + b) / s,
                },
                Endpoint::Regular {
                    x: hi,
                    exponent: (a - b) / s,
                },
            ),
            (Family::RosenMorseI, Params::Susy { a, .. }) => (
                Endpoint::Regular {
                    x: lo,
                    exponent: a / s,
                },
                Endpoint::Regular {
                    x: hi,
                    exponent: a / s,
                },
            ),
            _ => unreachable!(),
        }
    }

    /// Bounded interval, inside the domain interior, on which numerical
    /// scans look for minima and turning points.
    pub fn scan_interval(&self) -> (f64, f64) {
        let (lo, hi) = self.domain().bounds();
        let ell = self.length_scale();
        let reach = match self.params {
            Params::Oscillator { .. } => 60.0 * ell,
            _ => 45.0 * ell,
        };
        let trim = 1e-9 * ell;
        let lo = if lo.is_finite() { lo + trim } else { -reach };
        let hi = if hi.is_finite() { hi - trim } else { reach };
        (lo, hi)
    }

    /// Energy above which states are no longer bound, for families with a
    /// continuum.
    pub fn continuum_threshold(&self) -> Option<f64> {
        let (a, b, _) = self.susy_params()?;
        match self.family {
            Family::Eckart => Some((b / a - a).powi(2)),
            Family::ScarfII | Family::GenPoschlTeller => Some(a * a),
            Family::RosenMorseII => Some((a - b.abs() / a).powi(2)),
            _ => None,
        }
    }

    /// (x_min, V_min) over the domain.
    pub fn potential_infimum(&self) -> (f64, f64) {
        match self.params {
            Params::Oscillator { .. } => (0.0, 0.0),
            Params::Well { l } => (0.5 * l, 0.0),
            Params::Susy { .. } => {
                let (lo, hi) = self.scan_interval();
                let n = 8000;
                let h = (hi - lo) / n as f64;
                let v = |x: f64| {
                    let y = self.potential_generic::<f64>(x);
                    if y.is_finite() {
                        y
                    } else {
                        f64::INFINITY
                    }
                };
                let (mut best_i, mut best_v) = (0usize, f64::INFINITY);
                for i in 0..=n {
                    let y = v(lo + h * i as f64);
                    if y < best_v {
                        best_v = y;
                        best_i = i;
                    }
                }
                if best_i == 0 || best_i == n {
                    // monotone towards an infinite end: the infimum is the asymptote
                    return (lo + h * best_i as f64, best_v);
                }
                let a = lo + h * (best_i - 1) as f64;
                let b = lo + h * (best_i + 1) as f64;
                let (x, fx) = golden_min(v, a, b);
                (x, fx.min(best_v))
            }
        }
    }

    /// Real zeros of p_c²(·, E) in the domain, ascending. The square well
    /// reports its walls.
    pub fn turning_points(&self, energy: f64) -> Result<Vec<f64>> {
        let (_, vmin) = self.potential_infimum();
        if !(energy > vmin) {
            return Err(QhjError::NoClassicalRegion {
                energy,
                infimum: vmin,
            });
        }
        let u = self.units;
        match self.params {
            Params::Oscillator { omega } => {
                let x2 = (2.0 * energy / (u.mass * omega * omega)).sqrt();
                if self.family == Family::HarmonicOscillator {
                    Ok(vec![-x2, x2])
                } else {
                    Ok(vec![0.0, x2])
                }
            }
            Params::Well { l } => Ok(vec![0.0, l]),
            Params::Susy { .. } => {
                let (lo, hi) = self.scan_interval();
                let f = |x: f64| energy - self.potential_generic::<f64>(x);
                Ok(scan_roots(f, lo, hi, 20_000))
            }
        }
    }

    pub fn max_level(&self) -> MaxLevel {
        let Params::Susy { a, b, .. } = self.params else {
            return MaxLevel::Unbounded;
        };
        let s = self.step();
        // last n satisfying a strict bound-state condition on s_n
        let last = |ok: &dyn Fn(f64) -> bool, shrink: bool| -> MaxLevel {
            let mut n = 0usize;
            loop {
                let next = n as f64 + 1.0;
                let sn = if shrink { a - next * s } else { a + next * s };
                if !ok(sn) {
                    return MaxLevel::Finite(n);
                }
                n += 1;
            }
        };
        match self.family {
            Family::Eckart => last(&|sn| sn * sn < b, false),
            Family::ScarfII | Family::GenPoschlTeller => last(&|sn| sn > 0.0, true),
            Family::RosenMorseII => last(&|sn| sn > 0.0 && sn * sn > b.abs(), true),
            _ => MaxLevel::Unbounded,
        }
    }

    /// Closed-form E_n, levels counted from n = 0.
    pub fn closed_form_energy(&self, n: usize) -> Result<f64> {
        if let MaxLevel::Finite(max) = self.max_level() {
            if n > max {
                return Err(QhjError::NoSuchLevel { n, max });
            }
        }
        let u = self.units;
        let nf = n as f64;
        let e = match self.params {
            Params::Oscillator { omega } => match self.family {
                Family::HarmonicOscillator => (nf + 0.5) * u.hbar * omega,
                _ => (2.0 * nf + 1.5) * u.hbar * omega,
            },
            Params::Well { l } => {
                PI * PI * u.hbar * u.hbar / (2.0 * u.mass * l * l) * (nf + 1.0).powi(2)
            }
            Params::Susy { a, b, .. } => {
                let s = self.step();
                match self.family {
                    Family::Eckart => {
                        let sn = nf * s + a;
                        a * a + b * b / (a * a) - b * b / (sn * sn) - sn * sn
                    }
                    Family::ScarfII | Family::GenPoschlTeller => a * a - (a - nf * s).powi(2),
                    Family::RosenMorseII => {
                        let sn = a - nf * s;
                        a * a + b * b / (a * a) - sn * sn - b * b / (sn * sn)
                    }
                    Family::ScarfI => (a + nf * s).powi(2) - a * a,
                    Family::RosenMorseI => {
                        let sn = a + nf * s;
                        sn * sn - a * a + b * b / (a * a) - b * b / (sn * sn)
                    }
                    _ => unreachable!(),
                }
            }
        };
        Ok(e)
    }
}

/// Wire form of a spec: `{"family", "params", "hbar", "mass"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecJson {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

fn one() -> f64 {
    1.0
}

impl From<&PotentialSpec> for SpecJson {
    fn from(s: &PotentialSpec) -> Self {
        SpecJson {
            family: s.family.name().to_string(),
            params: s.params(),
            hbar: s.units.hbar,
            mass: s.units.mass,
        }
    }
}

impl TryFrom<SpecJson> for PotentialSpec {
    type Error = QhjError;

    fn try_from(j: SpecJson) -> Result<Self> {
        let family = Family::from_name(&j.family)?;
        PotentialSpec::new(
            family,
            &j.params,
            UnitSystem {
                hbar: j.hbar,
                mass: j.mass,
            },
        )
    }
}

impl Serialize for PotentialSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PotentialSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SpecJson::deserialize(d)?;
        PotentialSpec::try_from(j).map_err(serde::de::Error::custom)
    }
}
