//! Oscillator levels from the quantum action variable J(E) = nħ.

use qhj::quantizer::{action_variable, solve_level};
use qhj::PotentialSpec;

fn main() -> qhj::Result<()> {
    let spec = PotentialSpec::harmonic(1.0)?;
    println!("{:>2} {:>18} {:>12}", "n", "E", "J(E)");
    for n in 0..10 {
        let level = solve_level(&spec, n, 1e-14)?;
        let j = action_variable(&spec, level.e_qhj)?;
        println!("{n:>2} {:>18.12} {j:>12.2e}", level.e_qhj);
    }

    // half-line: the wall at the origin adds its own pole term
    let half = PotentialSpec::half_line_oscillator(1.0)?;
    for n in 0..5 {
        println!(
            "half-line n={n}: {:.12}",
            solve_level(&half, n, 1e-14)?.e_qhj
        );
    }
    Ok(())
}
