//! Fixed-pole contributions for every shape-invariant family.

use qhj::residues::{
    fixed_poles, gamma_contribution, infinity_contribution, report_scale, PoleKind,
};
use qhj::{Family, PotentialSpec};

fn main() -> qhj::Result<()> {
    let points = [
        (Family::ScarfII, 2.0, 1.0, 1.0),
        (Family::RosenMorseII, 1.5, 0.5, 1.0),
        (Family::GenPoschlTeller, 0.5, 1.5, 1.0),
        (Family::ScarfI, 1.5, 0.5, 1.0),
        (Family::RosenMorseI, 1.5, 0.5, 1.0),
        (Family::Eckart, 1.0, 4.0, 1.0),
    ];
    for (f, a, b, alpha) in points {
        let spec = PotentialSpec::shape_invariant(f, a, b, alpha)?;
        let top = spec.max_level().clamp_count(2) - 1;
        let e = spec.closed_form_energy(top)?;
        let scale = report_scale(&spec);
        println!("{f} A={a} B={b} alpha={alpha}  E{top}={e:.10}");
        for pole in fixed_poles(&spec) {
            let g = match pole.kind {
                PoleKind::Infinity => infinity_contribution(&spec, e)?,
                _ => gamma_contribution(&pole, &spec, e)?,
            };
            println!("  {:<14} scaled I = {:.10}", pole.label(), g * scale);
        }
    }
    Ok(())
}
