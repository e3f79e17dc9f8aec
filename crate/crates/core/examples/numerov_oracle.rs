//! Independent Numerov shooting eigenvalues against the closed forms.

use qhj::oracle::{grid_for, integrate_wavefunction, oracle_eigenvalue, OracleConfig};
use qhj::{Family, PotentialSpec};

fn main() -> qhj::Result<()> {
    let specs = [
        PotentialSpec::harmonic(1.0)?,
        PotentialSpec::square_well(1.0)?,
        PotentialSpec::eckart(2.0, 9.0, 0.5)?,
        PotentialSpec::shape_invariant(Family::ScarfI, 1.5, 0.5, 1.0)?,
    ];
    let cfg = OracleConfig::default();
    for spec in &specs {
        for n in 0..spec.max_level().clamp_count(4) {
            let sol = oracle_eigenvalue(spec, n, &cfg)?;
            let exact = spec.closed_form_energy(n)?;
            let grid = grid_for(spec, sol.energy, &cfg)?;
            let nodes = integrate_wavefunction(spec, sol.energy, &grid)?
                .nodes()
                .len();
            println!(
                "{:<12} n={n} E={:.10} err={:.1e} nodes={nodes}",
                spec.family().name(),
                sol.energy,
                (sol.energy - exact).abs()
            );
        }
    }
    Ok(())
}
