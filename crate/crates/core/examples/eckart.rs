//! Eckart well: a finite spectrum, with requests past the last level refused.

use qhj::quantizer::{solve_level, spectrum};
use qhj::PotentialSpec;

fn main() -> qhj::Result<()> {
    let spec = PotentialSpec::eckart(1.0, 4.0, 1.0)?;
    println!("max level: {:?}", spec.max_level());
    println!("threshold: {:?}", spec.continuum_threshold());
    let s = spectrum(&spec, 5, 1e-13)?;
    for l in &s.levels {
        println!("n={} E={:.14} closed={:.14}", l.n, l.e_qhj, l.e_closed);
    }
    for notice in &s.notices {
        println!("notice: {notice}");
    }
    match solve_level(&spec, 2, 1e-13) {
        Err(e) => println!("n=2: {} ({})", e, e.code()),
        Ok(l) => println!("n=2 unexpectedly bound at {}", l.e_qhj),
    }
    Ok(())
}
