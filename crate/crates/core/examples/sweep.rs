//! Levels as one parameter moves, driven through the CLI descriptor.

use qhj::cli::{run, RunDescriptor};

fn main() {
    let d: RunDescriptor = serde_json::from_value(serde_json::json!({
        "command": "sweep",
        "spec": {"family": "eckart", "params": {"A": 1.0, "B": 4.0, "alpha": 1.0}},
        "levels": 3,
        "format": "csv",
        "sweep": {"param": "B", "from": 2.0, "to": 8.0, "steps": 4}
    }))
    .expect("descriptor");
    match run(&d) {
        Ok(report) => print!("{}", report.text),
        Err(e) => eprintln!("{e}"),
    }
}
