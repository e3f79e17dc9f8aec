//! Infinite square well: the walls are fixed poles of the momentum function.

use qhj::quantizer::solve_level;
use qhj::residues::{fixed_poles, gamma_contribution, infinity_contribution, PoleKind};
use qhj::PotentialSpec;

fn main() -> qhj::Result<()> {
    let spec = PotentialSpec::square_well(1.0)?;
    for pole in fixed_poles(&spec) {
        let g = match pole.kind {
            PoleKind::Infinity => infinity_contribution(&spec, 10.0)?,
            _ => gamma_contribution(&pole, &spec, 10.0)?,
        };
        println!("{:<10} I = {g}", pole.label());
    }
    for n in 0..6 {
        let l = solve_level(&spec, n, 1e-14)?;
        println!("n={n} E={:.12} closed={:.12}", l.e_qhj, l.e_closed);
    }
    Ok(())
}
