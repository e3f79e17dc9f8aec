//! SWKB is exact for shape-invariant potentials; plain WKB is not.

use qhj::semiclassical::{swkb_level, wkb_level};
use qhj::{Family, PotentialSpec};

fn main() -> qhj::Result<()> {
    let specs = [
        PotentialSpec::eckart(2.0, 9.0, 0.5)?,
        PotentialSpec::shape_invariant(Family::RosenMorseII, 2.0, 3.0, 0.5)?,
        PotentialSpec::shape_invariant(Family::ScarfI, 1.5, 0.5, 1.0)?,
    ];
    for spec in &specs {
        println!("{}", spec.family());
        for n in 0..spec.max_level().clamp_count(4) {
            let exact = spec.closed_form_energy(n)?;
            let swkb = swkb_level(spec, n, 1e-13)?;
            let wkb = wkb_level(spec, n, 1e-13)?;
            println!(
                "  n={n} exact={exact:.10} swkb err={:.1e} wkb err={:.1e}",
                (swkb - exact).abs(),
                (wkb - exact).abs()
            );
        }
    }
    Ok(())
}
