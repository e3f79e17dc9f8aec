mod common;

use common::{expected_energy, matrix};
use num_complex::Complex64;
use qhj::oracle::{
    count_nodes, grid_for, integrate_wavefunction, integrate_wavefunction_matched,
    momentum_function_on_axis, node_residues, oracle_eigenvalue, GridSpec, MatchPointRule,
    OracleConfig,
};
use qhj::PotentialSpec;

fn grid_energy(spec: &PotentialSpec, top: usize) -> f64 {
    let e = expected_energy(spec, top);
    let above = e + 0.25
        * (e - expected_energy(spec, top.saturating_sub(1)))
            .abs()
            .max(1.0);
    match spec.continuum_threshold() {
        Some(t) => above.min(e + 0.5 * (t - e)),
        None => above,
    }
}

#[test]
fn oracle_matches_closed_forms() {
    for spec in matrix() {
        for n in 0..spec.max_level().clamp_count(4) {
            let sol = oracle_eigenvalue(&spec, n, &OracleConfig::default()).unwrap();
            let want = expected_energy(&spec, n);
            let tol = 1e-6 * want.abs().max(spec.energy_scale());
            assert!(
                (sol.energy - want).abs() <= tol,
                "{} n={n}: {} vs {want}",
                spec.family(),
                sol.energy
            );
        }
    }
}

#[test]
fn node_count_between_levels() {
    for spec in matrix() {
        let top = spec.max_level().clamp_count(6);
        let cfg = OracleConfig::default();
        let grid = grid_for(&spec, grid_energy(&spec, top - 1), &cfg).unwrap();
        let e0 = expected_energy(&spec, 0);
        let below = e0 - 1e-3 * spec.energy_scale().max(e0.abs());
        assert_eq!(
            count_nodes(&spec, below, &grid).unwrap(),
            0,
            "{}",
            spec.family()
        );
        for n in 0..top - 1 {
            let mid = 0.5 * (expected_energy(&spec, n) + expected_energy(&spec, n + 1));
            assert_eq!(
                count_nodes(&spec, mid, &grid).unwrap(),
                n + 1,
                "{} between {n} and {}",
                spec.family(),
                n + 1
            );
        }
    }
}

#[test]
fn grid_refinement_is_converged() {
    let spec = PotentialSpec::harmonic(1.0).unwrap();
    for n in [0, 3] {
        let coarse = OracleConfig {
            n_points: Some(4001),
            ..OracleConfig::default()
        };
        let fine = OracleConfig {
            n_points: Some(8001),
            ..OracleConfig::default()
        };
        let a = oracle_eigenvalue(&spec, n, &coarse).unwrap().energy;
        let b = oracle_eigenvalue(&spec, n, &fine).unwrap().energy;
        assert!((a - b).abs() <= 1e-8, "n={n}: {a} vs {b}");
    }
}

#[test]
fn node_residues_are_minus_i_hbar() {
    let cases = [
        (PotentialSpec::harmonic(1.0).unwrap(), 3),
        (
            PotentialSpec::harmonic(1.5)
                .unwrap()
                .with_units(0.6, 1.2)
                .unwrap(),
            4,
        ),
        (PotentialSpec::square_well(1.0).unwrap(), 3),
        (PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap(), 1),
    ];
    for (spec, n) in cases {
        let hbar = spec.units().hbar;
        let e = oracle_eigenvalue(&spec, n, &OracleConfig::default())
            .unwrap()
            .energy;
        let grid = grid_for(&spec, e, &OracleConfig::default()).unwrap();
        let wf = integrate_wavefunction(&spec, e, &grid).unwrap();
        let res = node_residues(&spec, &wf);
        assert_eq!(res.len(), n, "{}", spec.family());
        for r in res {
            let want = Complex64::new(0.0, -hbar);
            assert!(
                (r.residue - want).norm() <= 0.05 * hbar,
                "{} at {}: {}",
                spec.family(),
                r.x,
                r.residue
            );
        }
    }
}

#[test]
fn spec_examples() {
    let half = PotentialSpec::half_line_oscillator(1.0).unwrap();
    let e = oracle_eigenvalue(&half, 0, &OracleConfig::default())
        .unwrap()
        .energy;
    assert!((e - 1.5).abs() < 1e-6, "{e}");

    let osc = PotentialSpec::harmonic(1.0).unwrap();
    let grid = grid_for(&osc, 4.0, &OracleConfig::default()).unwrap();
    assert_eq!(count_nodes(&osc, 2.0, &grid).unwrap(), 2);

    let eckart = PotentialSpec::eckart(1.0, 4.0, 1.0).unwrap();
    assert_eq!(
        oracle_eigenvalue(&eckart, 2, &OracleConfig::default())
            .unwrap_err()
            .code(),
        "oracle_failure"
    );
}

#[test]
fn match_point_does_not_move_the_eigenfunction() {
    let spec = PotentialSpec::harmonic(1.0).unwrap();
    let grid = grid_for(&spec, 2.0, &OracleConfig::default()).unwrap();
    let a = integrate_wavefunction_matched(&spec, 1.5, &grid, MatchPointRule::RightTurningPoint)
        .unwrap();
    let b = integrate_wavefunction_matched(&spec, 1.5, &grid, MatchPointRule::Fixed(-0.7)).unwrap();
    let worst = a
        .psi
        .iter()
        .zip(&b.psi)
        .map(|(x, y)| (x.abs() - y.abs()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-7, "{worst}");
    assert_eq!(a.nodes().len(), 1);
}

#[test]
fn momentum_function_is_the_log_derivative() {
    // ground state of the oscillator: p = iħ·mωx/ħ… = i m ω x
    let spec = PotentialSpec::harmonic(2.0)
        .unwrap()
        .with_units(1.0, 1.5)
        .unwrap();
    let e = expected_energy(&spec, 0);
    let grid = grid_for(&spec, e, &OracleConfig::default()).unwrap();
    for x in [-0.8, 0.3, 1.1] {
        let p = momentum_function_on_axis(&spec, e, x, &grid).unwrap();
        assert!((p - Complex64::new(0.0, 3.0 * x)).norm() < 1e-6, "{x}: {p}");
    }
    let far = grid.x_max;
    assert_eq!(
        momentum_function_on_axis(&spec, e, far, &grid)
            .unwrap_err()
            .code(),
        "domain"
    );
}

#[test]
fn grid_contract() {
    assert_eq!(
        GridSpec::new(0.0, 1.0, 1002).unwrap_err().code(),
        "contract"
    );
    assert_eq!(
        GridSpec::new(1.0, 0.0, 2001).unwrap_err().code(),
        "contract"
    );
    let g = GridSpec::new(-1.0, 1.0, 2001).unwrap();
    assert_eq!(g.x(1000), 0.0);
    assert!((g.step() - 1e-3).abs() < 1e-15);
}
