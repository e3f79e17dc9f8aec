//! Wavefunction nodes are simple poles of the momentum function with residue −iħ.

use qhj::oracle::{
    grid_for, integrate_wavefunction, node_residues, oracle_eigenvalue, OracleConfig,
};
use qhj::PotentialSpec;

fn main() -> qhj::Result<()> {
    let cfg = OracleConfig::default();
    for (spec, n) in [
        (PotentialSpec::harmonic(1.0)?, 3),
        (PotentialSpec::eckart(1.0, 4.0, 1.0)?, 1),
    ] {
        let e = oracle_eigenvalue(&spec, n, &cfg)?.energy;
        let grid = grid_for(&spec, e, &cfg)?;
        let wf = integrate_wavefunction(&spec, e, &grid)?;
        for r in node_residues(&spec, &wf) {
            println!(
                "{} n={n} node x={:+.6} residue={:.5}",
                spec.family(),
                r.x,
                r.residue
            );
        }
    }
    Ok(())
}
