//! Independent eigenvalues from a direct numerical solution of the
//! Schrödinger equation: Numerov integration, Sturm node counting and a
//! matched-Wronskian refinement.

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{Endpoint, MaxLevel, PotentialSpec};
use crate::error::{QhjError, Result};
use crate::roots::bracketed_root;

/// Uniform grid `x_j = x_min + j·h`, `j = 0..n_points`; `n_points` is odd
/// and at least [`GridSpec::MIN_POINTS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 1001;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        let g = GridSpec {
            x_min,
            x_max,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(QhjError::Contract(format!(
                "grid needs x_min < x_max, got {self:?}"
            )));
        }
        if self.n_points < Self::MIN_POINTS || self.n_points % 2 == 0 {
            return Err(QhjError::Contract(format!(
                "grid needs an odd number of points ≥ {}, got {}",
                Self::MIN_POINTS,
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + self.step() * j as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MatchPointRule {
    /// Rightmost classical turning point, falling back to the midpoint
    /// when there is none (hard walls).
    RightTurningPoint,
    MidDomain,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Grid size; chosen from the energy and end behaviour when `None`.
    pub n_points: Option<usize>,
    /// `∫κ dx` from the outermost turning point to an open cut-off.
    pub decay_action: f64,
    /// Largest grid length in units of the family's length scale.
    pub max_length: f64,
    pub match_point_rule: MatchPointRule,
    /// Relative tolerance on the eigenvalue.
    pub energy_tol: f64,
    /// Cap on node-count bisections.
    pub max_bisections: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            n_points: None,
            decay_action: 20.0,
            max_length: 200.0,
            match_point_rule: MatchPointRule::RightTurningPoint,
            energy_tol: 1e-13,
            max_bisections: 400,
        }
    }
}

/// Matched solution on a grid, scaled so that `max |ψ| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wavefunction {
    pub grid: GridSpec,
    pub energy: f64,
    pub psi: Vec<f64>,
    pub match_index: usize,
    /// `ℓ·(ψ'/ψ)` of the outward minus the inward solution at the match
    /// point; zero at an eigenvalue.
    pub log_derivative_mismatch: f64,
}

impl Wavefunction {
    pub fn x(&self, j: usize) -> f64 {
        self.grid.x(j)
    }

    /// Sign changes of ψ.
    pub fn nodes(&self) -> Vec<usize> {
        sign_changes(&self.psi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    pub energy: f64,
    pub grid: GridSpec,
    pub bisections: usize,
}

#[derive(Debug, Clone)]
enum Start {
    /// ψ = 0 at the first grid point: an open cut-off or a hard wall.
    Open,
    /// Frobenius series ψ = t^λ Σ c_j t^j about an inverse-square end,
    /// with `d` the Taylor coefficients of `2m·V·t²/ħ²`.
    Series { lambda: f64, d: Vec<f64> },
}

/// Depth, in length scales, at which a series start hands over to Numerov.
const SERIES_DEPTH: f64 = 0.2;
const SERIES_FIT: usize = 12;
const SERIES_TERMS: usize = 24;

impl Start {
    fn series(lambda: f64, d: &[f64], m2h_e: f64, t: f64) -> f64 {
        let mut c = vec![0.0; SERIES_TERMS];
        c[0] = 1.0;
        let coeff = |i: usize| {
            if i == 2 {
                d.get(2).copied().unwrap_or(0.0) - m2h_e
            } else {
                d.get(i).copied().unwrap_or(0.0)
            }
        };
        let mut sum = 1.0;
        let mut tp = 1.0;
        for j in 1..SERIES_TERMS {
            let acc: f64 = (1..=j).map(|i| coeff(i) * c[j - i]).sum();
            c[j] = acc / (j as f64 * (2.0 * lambda + j as f64 - 1.0));
            tp *= t;
            sum += c[j] * tp;
        }
        sum
    }
}

/// Grid with the energy-independent part of `f = 2m(V − E)/ħ²` tabulated.
struct Mesh {
    spec: GridSpec,
    h: f64,
    fv: Vec<f64>,
    inv_hbar2: f64,
    left: Start,
    right: Start,
    depth: usize,
}

impl Mesh {
    fn f(&self, j: usize, energy: f64) -> f64 {
        self.fv[j] - self.inv_hbar2 * energy
    }

    fn len(&self) -> usize {
        self.fv.len()
    }
}

fn sign_changes(psi: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last = 0.0f64;
    for (j, &p) in psi.iter().enumerate() {
        if p != 0.0 {
            if last != 0.0 && p.signum() != last.signum() {
                out.push(j);
            }
            last = p;
        }
    }
    out
}

fn start_for(spec: &PotentialSpec, end: Endpoint, inward: f64) -> Start {
    match end {
        Endpoint::Decaying => Start::Open,
        Endpoint::Regular { exponent, .. } if exponent == 1.0 => Start::Open,
        Endpoint::Regular { x, exponent } => {
            let u = spec.units();
            let m2h = 2.0 * u.mass / (u.hbar * u.hbar);
            let d0 = exponent * (exponent - 1.0);
            // interpolate (f·t² − d₀)/t at Chebyshev nodes in s = t/T
            let t_fit = 2.0 * SERIES_DEPTH * spec.length_scale();
            let n = SERIES_FIT;
            let nodes: Vec<f64> = (0..n)
                .map(|i| 0.5 * (1.0 + (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos()))
                .collect();
            let mut rows = vec![vec![0.0; n]; n];
            let mut rhs = vec![0.0; n];
            for (i, &sn) in nodes.iter().enumerate() {
                let t = t_fit * sn;
                let v = spec.potential_value(x + inward * t).unwrap_or(f64::NAN);
                rhs[i] = (m2h * v * t * t - d0) / t;
                let mut p = 1.0;
                for r in rows[i].iter_mut() {
                    *r = p;
                    p *= sn;
                }
            }
            let mut d = vec![d0];
            match solve_dense(rows, rhs) {
                Some(q) if q.iter().all(|c| c.is_finite()) => {
                    let mut scale = 1.0;
                    for qi in q {
                        d.push(qi / scale);
                        scale *= t_fit;
                    }
                }
                _ => {}
            }
            Start::Series {
                lambda: exponent,
                d,
            }
        }
    }
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs()))?;
        a.swap(c, p);
        b.swap(c, p);
        if a[c][c] == 0.0 {
            return None;
        }
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

fn decay_cutoff(
    spec: &PotentialSpec,
    from: f64,
    dir: f64,
    energy: f64,
    action: f64,
    max_len: f64,
) -> f64 {
    let u = spec.units();
    let ell = spec.length_scale();
    let dx = ell / 200.0;
    let mut x = from;
    let mut acc = 0.0;
    while acc < action && (x - from).abs() < max_len {
        let v = spec
            .potential_value(x + 0.5 * dir * dx)
            .unwrap_or(f64::INFINITY);
        let k2 = 2.0 * u.mass * (v - energy) / (u.hbar * u.hbar);
        acc += k2.max(0.0).sqrt() * dx;
        x += dir * dx;
    }
    x
}

/// Grid suited to energies up to `energy`: open ends are cut where the
/// WKB decay integral reaches `config.decay_action`; the step resolves the
/// local wavelength and the power-law behaviour at singular ends.
pub fn grid_for(spec: &PotentialSpec, energy: f64, config: &OracleConfig) -> Result<GridSpec> {
    let ell = spec.length_scale();
    let max_len = config.max_length * ell;
    let (le, re) = spec.endpoints();
    let tp = spec.turning_points(energy)?;
    let (t_lo, t_hi) = match (tp.first(), tp.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => {
            let (x, _) = spec.potential_infimum();
            (x, x)
        }
    };
    let x_min = match le {
        Endpoint::Regular { x, .. } => x,
        Endpoint::Decaying => decay_cutoff(spec, t_lo, -1.0, energy, config.decay_action, max_len),
    };
    let x_max = match re {
        Endpoint::Regular { x, .. } => x,
        Endpoint::Decaying => decay_cutoff(spec, t_hi, 1.0, energy, config.decay_action, max_len),
    };
    let n_points = match config.n_points {
        Some(n) => n.max(GridSpec::MIN_POINTS) | 1,
        None => {
            let u = spec.units();
            let (_, vmin) = spec.potential_infimum();
            let kmax = (2.0 * u.mass * (energy - vmin).max(0.0)).sqrt() / u.hbar;
            let mut h = (0.02 / kmax.max(1e-300)).min(ell / 500.0);
            let lambda_min = [le, re]
                .iter()
                .filter_map(|e| match e {
                    Endpoint::Regular { exponent, .. } if *exponent != 1.0 => Some(*exponent),
                    _ => None,
                })
                .fold(f64::INFINITY, f64::min);
            if lambda_min.is_finite() {
                h = h.min(1e-3 * ell);
            }
            (((x_max - x_min) / h).ceil() as usize + 1).clamp(2001, 2_000_001) | 1
        }
    };
    Ok(GridSpec {
        x_min,
        x_max,
        n_points,
    })
}

fn mesh(spec: &PotentialSpec, grid: GridSpec) -> Result<Mesh> {
    grid.validate()?;
    let u = spec.units();
    let inv_hbar2 = 2.0 * u.mass / (u.hbar * u.hbar);
    let mut fv: Vec<f64> = (0..grid.n_points)
        .map(|j| match spec.potential_value(grid.x(j)) {
            Ok(v) => inv_hbar2 * v,
            Err(_) => f64::INFINITY,
        })
        .collect();
    // hard walls: ψ vanishes there, so the limit from inside keeps the
    // recurrence finite and the sign of ψ at the wall meaningful
    let last = fv.len() - 1;
    if !fv[0].is_finite() {
        fv[0] = fv[1];
    }
    if !fv[last].is_finite() {
        fv[last] = fv[last - 1];
    }
    let (le, re) = spec.endpoints();
    let trim = |e: Endpoint, at: f64| match e {
        Endpoint::Regular { x, .. } if x == at => e,
        _ => Endpoint::Decaying,
    };
    Ok(Mesh {
        spec: grid,
        h: grid.step(),
        fv,
        inv_hbar2,
        depth: (SERIES_DEPTH * spec.length_scale() / grid.step()).round() as usize,
        left: start_for(spec, trim(le, grid.x_min), 1.0),
        right: start_for(spec, trim(re, grid.x_max), -1.0),
    })
}

/// Index (in sweep order) of the first point where the Numerov weights are
/// well conditioned, `h²|f|/12 < 1/2`.
fn first_regular(m: &Mesh, energy: f64, idx: &dyn Fn(usize) -> usize) -> usize {
    let h2 = m.h * m.h;
    (1..m.len())
        .find(|&k| {
            let f = m.f(idx(k), energy);
            f.is_finite() && h2 * f.abs() / 12.0 < 0.5
        })
        .unwrap_or(m.len() - 1)
}

/// Sweep index where a series start hands over to Numerov.
fn series_start(m: &Mesh, energy: f64, idx: &dyn Fn(usize) -> usize) -> usize {
    first_regular(m, energy, idx).max(m.depth)
}

/// Numerov sweep from one end. Returns ψ in sweep order for `k = 0..=until`.
fn sweep(m: &Mesh, energy: f64, from_left: bool, until: usize) -> Vec<f64> {
    sweep_counted(m, energy, from_left, until).0
}

/// [`sweep`] plus the number of sign changes, counted as the sweep goes:
/// rescaling after overflow can flush early values to zero.
fn sweep_counted(m: &Mesh, energy: f64, from_left: bool, until: usize) -> (Vec<f64>, usize) {
    let n = m.len();
    let idx = |k: usize| if from_left { k } else { n - 1 - k };
    let start = if from_left { &m.left } else { &m.right };
    let h2 = m.h * m.h;
    let mut psi = vec![0.0; until + 1];
    let k0 = match start {
        Start::Open => {
            if until >= 1 {
                psi[1] = 1e-30;
            }
            1
        }
        Start::Series { lambda, d } => {
            let k0 = series_start(m, energy, &idx)
                .min(until.saturating_sub(1))
                .max(1);
            let t0 = m.h * k0 as f64;
            let m2h_e = m.inv_hbar2 * energy;
            for (k, p) in psi.iter_mut().enumerate().take(k0 + 2).skip(1) {
                let t = m.h * k as f64;
                *p = (t / t0).powf(*lambda) * Start::series(*lambda, d, m2h_e, t);
            }
            k0 + 1
        }
    };
    let mut changes = 0;
    let mut last = 0.0f64;
    for &p in psi.iter().take(k0 + 1) {
        if p != 0.0 {
            if last != 0.0 && p.signum() != last {
                changes += 1;
            }
            last = p.signum();
        }
    }
    let w = |k: usize| 1.0 - h2 * m.f(idx(k), energy) / 12.0;
    for k in k0..until {
        let fk = m.f(idx(k), energy);
        let prev = if psi[k - 1] == 0.0 {
            0.0
        } else {
            w(k - 1) * psi[k - 1]
        };
        let next = (2.0 * w(k) * psi[k] + h2 * fk * psi[k] - prev) / w(k + 1);
        psi[k + 1] = next;
        if next != 0.0 {
            if last != 0.0 && next.signum() != last {
                changes += 1;
            }
            last = next.signum();
        }
        if next.abs() > 1e150 {
            for p in psi.iter_mut().take(k + 2) {
                *p *= 1e-150;
            }
        }
    }
    (psi, changes)
}

/// Sweep end for an outward integration: the last well-conditioned point.
fn outward_limit(m: &Mesh, energy: f64) -> usize {
    match m.right {
        Start::Open => m.len() - 1,
        Start::Series { .. } => {
            let n = m.len();
            n - 1 - first_regular(m, energy, &|k| n - 1 - k)
        }
    }
}

/// Number of sign changes of the outward solution across the grid, which
/// equals the number of eigenvalues of the truncated problem below `energy`.
pub fn count_nodes(spec: &PotentialSpec, energy: f64, grid: &GridSpec) -> Result<usize> {
    let m = mesh(spec, *grid)?;
    Ok(count_on(&m, energy))
}

fn count_on(m: &Mesh, energy: f64) -> usize {
    let limit = outward_limit(m, energy);
    sweep_counted(m, energy, true, limit).1
}

fn match_index(spec: &PotentialSpec, m: &Mesh, energy: f64, rule: MatchPointRule) -> usize {
    let g = m.spec;
    let mid = 0.5 * (g.x_min + g.x_max);
    let x = match rule {
        MatchPointRule::Fixed(x) => x,
        MatchPointRule::MidDomain => mid,
        MatchPointRule::RightTurningPoint => match spec.family() {
            crate::catalog::Family::SquareWell => mid,
            _ => spec
                .turning_points(energy)
                .ok()
                .and_then(|t| t.last().copied())
                .unwrap_or(mid),
        },
    };
    let j = ((x - g.x_min) / m.h).round();
    (j.max(3.0) as usize).min(m.len() - 4)
}

fn derivative(psi: &[f64], j: usize, h: f64) -> f64 {
    (psi[j - 2] - 8.0 * psi[j - 1] + 8.0 * psi[j + 1] - psi[j + 2]) / (12.0 * h)
}

/// Outward and inward solutions meeting at `j`, each in grid order.
fn both_sides(m: &Mesh, energy: f64, j: usize) -> (Vec<f64>, Vec<f64>) {
    let n = m.len();
    let out = sweep(m, energy, true, (j + 2).min(n - 1));
    let mut inw = sweep(m, energy, false, n - 1 - (j - 2));
    inw.reverse();
    let mut full_in = vec![0.0; j - 2];
    full_in.extend(inw);
    (out, full_in)
}

/// Wronskian of the outward and inward solutions at the match point,
/// normalised by their amplitudes; vanishes exactly at eigenvalues and has
/// no poles.
fn mismatch(m: &Mesh, energy: f64, j: usize, k: f64) -> f64 {
    let (o, i) = both_sides(m, energy, j);
    let (po, pi) = (o[j], i[j]);
    let (dpo, dpi) = (derivative(&o, j, m.h), derivative(&i, j, m.h));
    let no = po.hypot(dpo / k);
    let ni = pi.hypot(dpi / k);
    ((dpo / no) * (pi / ni) - (po / no) * (dpi / ni)) / k
}

/// Solution at `energy` matched at the right turning point; see
/// [`integrate_wavefunction_matched`].
pub fn integrate_wavefunction(
    spec: &PotentialSpec,
    energy: f64,
    grid: &GridSpec,
) -> Result<Wavefunction> {
    integrate_wavefunction_matched(spec, energy, grid, MatchPointRule::RightTurningPoint)
}

/// Solution at `energy` matched at the rule's point; the inward piece is
/// scaled to the outward value there. Away from eigenvalues ψ' jumps at the
/// match point, recorded in `log_derivative_mismatch`.
pub fn integrate_wavefunction_matched(
    spec: &PotentialSpec,
    energy: f64,
    grid: &GridSpec,
    rule: MatchPointRule,
) -> Result<Wavefunction> {
    let m = mesh(spec, *grid)?;
    let j = match_index(spec, &m, energy, rule);
    let (o, i) = both_sides(&m, energy, j);
    let scale_ref = o[j - 1].abs().max(o[j + 1].abs());
    if i[j].abs() < 1e-12 * i[j - 1].abs().max(i[j + 1].abs()) || o[j].abs() < 1e-12 * scale_ref {
        return Err(QhjError::NearNode(grid.x(j)));
    }
    let ell = spec.length_scale();
    let log_derivative_mismatch =
        ell * (derivative(&o, j, m.h) / o[j] - derivative(&i, j, m.h) / i[j]);
    if !log_derivative_mismatch.is_finite() {
        return Err(QhjError::Oracle(format!(
            "overflow integrating at E = {energy}"
        )));
    }
    // least-squares fit of (ψ, ψ'/k) so that a match point close to a node
    // still fixes the sign of the inward piece
    let k = 1.0 / ell;
    let (dpo, dpi) = (derivative(&o, j, m.h) / k, derivative(&i, j, m.h) / k);
    let ratio = (o[j] * i[j] + dpo * dpi) / (i[j] * i[j] + dpi * dpi);
    let mut psi: Vec<f64> = (0..m.len())
        .map(|k| if k <= j { o[k] } else { i[k] * ratio })
        .collect();
    let peak = psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    if !peak.is_finite() {
        return Err(QhjError::Oracle(format!(
            "overflow integrating at E = {energy}"
        )));
    }
    if peak > 0.0 {
        psi.iter_mut().for_each(|p| *p /= peak);
    }
    Ok(Wavefunction {
        grid: *grid,
        energy,
        psi,
        match_index: j,
        log_derivative_mismatch,
    })
}

/// Eigenvalue `n` of the Schrödinger equation, found without any closed
/// form: bracket expansion and bisection on the node count, then a root of
/// the matching Wronskian.
pub fn oracle_eigenvalue(
    spec: &PotentialSpec,
    n: usize,
    config: &OracleConfig,
) -> Result<OracleSolution> {
    if let MaxLevel::Finite(max) = spec.max_level() {
        if n > max {
            return Err(QhjError::Oracle(format!(
                "level {n} exceeds the highest bound level {max}"
            )));
        }
    }
    let scale = spec.energy_scale();
    let (_, vmin) = spec.potential_infimum();
    let cap = spec
        .continuum_threshold()
        .map(|t| t - 1e-9 * (scale + t.abs()));
    let lo0 = vmin + 1e-12 * scale;

    // expand until at least n + 1 states lie below e_hi
    let mut step = scale;
    let mut e_hi;
    let mut grid;
    let mut m;
    let mut expansions = 0;
    loop {
        e_hi = lo0 + step;
        let capped = matches!(cap, Some(c) if e_hi >= c);
        if let Some(c) = cap {
            e_hi = e_hi.min(c);
        }
        grid = grid_for(spec, e_hi, config)?;
        m = mesh(spec, grid)?;
        if count_on(&m, e_hi) > n {
            break;
        }
        if capped {
            return Err(QhjError::Oracle(format!(
                "fewer than {} bound states below the continuum",
                n + 1
            )));
        }
        step *= 2.0;
        expansions += 1;
        if expansions > 100 {
            return Err(QhjError::Convergence(expansions));
        }
    }
    let mut lo = lo0;
    let mut hi = e_hi;
    if count_on(&m, lo) > n {
        return Err(QhjError::Oracle(
            "node count already exceeds n at the bottom of the well".into(),
        ));
    }

    let k = 1.0 / spec.length_scale();
    if !(config.energy_tol > 0.0) {
        return Err(QhjError::Contract("energy_tol must be positive".into()));
    }
    let tol = config.energy_tol.max(1e-15);
    let mut bisections = 0;
    let coarse = 1e-3 * (hi - lo);
    while hi - lo > coarse || bisections < 8 {
        let mid = 0.5 * (lo + hi);
        if count_on(&m, mid) > n {
            hi = mid;
        } else {
            lo = mid;
        }
        bisections += 1;
    }
    let j = match_index(spec, &m, 0.5 * (lo + hi), config.match_point_rule);
    let (d_lo, d_hi) = (mismatch(&m, lo, j, k), mismatch(&m, hi, j, k));
    let energy = if d_lo.signum() != d_hi.signum() && d_lo.is_finite() && d_hi.is_finite() {
        bracketed_root(|e| Ok(mismatch(&m, e, j, k)), lo, hi, tol)?.x
    } else {
        while hi - lo > tol * (1.0 + lo.abs().max(hi.abs())) && bisections < config.max_bisections {
            let mid = 0.5 * (lo + hi);
            if count_on(&m, mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
            bisections += 1;
        }
        0.5 * (lo + hi)
    };
    Ok(OracleSolution {
        energy,
        grid,
        bisections,
    })
}

/// `p = −iħ ψ'/ψ` at `x`, from the solution at `energy` on `grid`. ψ and
/// its fourth-order difference derivative are interpolated from the four
/// nearest grid points.
pub fn momentum_function_on_axis(
    spec: &PotentialSpec,
    energy: f64,
    x: f64,
    grid: &GridSpec,
) -> Result<Complex64> {
    let h = grid.step();
    if !(x > grid.x_min + 3.0 * h && x < grid.x_max - 3.0 * h) {
        return Err(QhjError::Domain {
            x,
            lo: grid.x_min + 3.0 * h,
            hi: grid.x_max - 3.0 * h,
        });
    }
    let wf = integrate_wavefunction(spec, energy, grid)?;
    let j0 = (((x - grid.x_min) / h).floor() as usize)
        .saturating_sub(1)
        .clamp(2, wf.psi.len() - 6);
    let idx: Vec<usize> = (j0..j0 + 4).collect();
    let lagrange = |vals: &dyn Fn(usize) -> f64| {
        idx.iter()
            .map(|&a| {
                let w: f64 = idx
                    .iter()
                    .filter(|&&b| b != a)
                    .map(|&b| (x - grid.x(b)) / (grid.x(a) - grid.x(b)))
                    .product();
                vals(a) * w
            })
            .sum::<f64>()
    };
    let psi = lagrange(&|k| wf.psi[k]);
    if psi.abs() < 1e-12 {
        return Err(QhjError::NearNode(x));
    }
    let dpsi = lagrange(&|k| derivative(&wf.psi, k, h));
    Ok(Complex64::new(0.0, -spec.units().hbar * dpsi / psi))
}

/// `p = −iħ ψ'/ψ` on the grid points `2..len−2` of a computed solution;
/// `None` where ψ vanishes.
pub fn momentum_function_samples(
    spec: &PotentialSpec,
    wf: &Wavefunction,
) -> Vec<(f64, Option<Complex64>)> {
    let hbar = spec.units().hbar;
    let h = wf.grid.step();
    (2..wf.psi.len() - 2)
        .map(|j| {
            let psi = wf.psi[j];
            let p =
                (psi != 0.0).then(|| Complex64::new(0.0, -hbar * derivative(&wf.psi, j, h) / psi));
            (wf.x(j), p)
        })
        .collect()
}

/// A node of ψ and the fitted residue of `p` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeResidue {
    pub x: f64,
    pub residue: Complex64,
}

/// Fits `p ≈ R/(x − x₀) + c₀ + c₁(x − x₀)` at grid points two to four steps
/// either side of every interior node. The exact residue is `−iħ`.
pub fn node_residues(spec: &PotentialSpec, wf: &Wavefunction) -> Vec<NodeResidue> {
    let hbar = spec.units().hbar;
    let h = wf.grid.step();
    let psi = &wf.psi;
    let mut out = Vec::new();
    for j in wf.nodes() {
        if j < 7 || j + 6 >= psi.len() {
            continue;
        }
        // node from the cubic through j−2..j+1
        let xs: Vec<f64> = (j - 2..=j + 1).map(|k| wf.x(k)).collect();
        let ys: Vec<f64> = (j - 2..=j + 1).map(|k| psi[k]).collect();
        let cubic = |x: f64| {
            (0..4)
                .map(|a| {
                    let l: f64 = (0..4)
                        .filter(|&b| b != a)
                        .map(|b| (x - xs[b]) / (xs[a] - xs[b]))
                        .product();
                    ys[a] * l
                })
                .sum::<f64>()
        };
        let Ok(root) = bracketed_root(|x| Ok(cubic(x)), wf.x(j - 1), wf.x(j), 1e-15) else {
            continue;
        };
        let x0 = root.x;
        let near = ((x0 - wf.grid.x_min) / h).round() as usize;
        let mut rows = Vec::new();
        for off in [-4i64, -3, -2, 2, 3, 4] {
            let k = (near as i64 + off) as usize;
            let d = wf.x(k) - x0;
            let q = derivative(psi, k, h) / psi[k];
            rows.push(([1.0 / d, 1.0, d], q));
        }
        let Some([r, _, _]) = least_squares3(&rows) else {
            continue;
        };
        out.push(NodeResidue {
            x: x0,
            residue: Complex64::new(0.0, -hbar * r),
        });
    }
    out
}

fn least_squares3(rows: &[([f64; 3], f64)]) -> Option<[f64; 3]> {
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (r, y) in rows {
        for i in 0..3 {
            b[i] += r[i] * y;
            for k in 0..3 {
                a[i][k] += r[i] * r[k];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs()))?;
        a.swap(c, p);
        b.swap(c, p);
        if a[c][c] == 0.0 {
            return None;
        }
        for r in c + 1..3 {
            let f = a[r][c] / a[c][c];
            for k in c..3 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 3];
    for c in (0..3).rev() {
        let s: f64 = (c + 1..3).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}
