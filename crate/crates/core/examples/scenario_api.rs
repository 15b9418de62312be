//! Running a JSON scenario from code instead of through the binary.
//!
//! cargo run --example scenario_api

use gyrocasimir::cli::{csv, execute, load_str, provenance, LoadError};

const SCENARIO: &str = r#"{
  "command": "benchmark",
  "gaps": {"values": [1e-6]}
}"#;

fn main() {
    let overrides = ["gaps.values=[5e-7,1e-6,2e-6]".to_string()];
    let scenario = match load_str(SCENARIO, &overrides) {
        Ok(s) => s,
        Err(LoadError::Schema(v)) => {
            for x in v {
                eprintln!("invalid: {x}");
            }
            std::process::exit(1);
        }
        Err(LoadError::Io(m)) => panic!("{m}"),
    };
    let out = execute(&scenario);
    for (_, table) in &out.tables {
        print!("{}", csv::render(&provenance(&scenario, "main"), table));
    }
    println!("all converged: {}", out.all_converged);

    // schema problems come back with dotted paths
    if let Err(LoadError::Schema(v)) = load_str(SCENARIO, &["gaps.values.0=-1".to_string()]) {
        for x in v {
            println!("rejected: {x}");
        }
    }
}
