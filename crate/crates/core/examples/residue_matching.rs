//! Circle integrals of the classical SWKB integrand around complex poles of
//! the superpotential reproduce the fixed-pole terms.

use qhj::residues::{fixed_poles, gamma_contribution, pole_x_location, PoleKind};
use qhj::semiclassical::{classical_integrand_residue, classical_integrand_residue_auto};
use qhj::{Family, PotentialSpec};

fn main() -> qhj::Result<()> {
    let spec = PotentialSpec::shape_invariant(Family::ScarfII, 2.0, 1.0, 1.0)?;
    let e = spec.closed_form_energy(1)?;
    for pole in fixed_poles(&spec) {
        if pole.kind != PoleKind::PotentialSingularity {
            continue;
        }
        let x = pole_x_location(&spec, &pole).expect("finite pole");
        let engine = gamma_contribution(&pole, &spec, e)?;
        let circle = classical_integrand_residue_auto(&spec, x, e)?;
        println!(
            "{} at x={x:.6}: engine {engine:.12} circle {circle:.12}",
            pole.label()
        );
        for r in [0.2, 0.1, 0.05] {
            let c = classical_integrand_residue(&spec, x, e, r)?;
            println!("  radius {r}: {c:.12}");
        }
    }
    Ok(())
}
