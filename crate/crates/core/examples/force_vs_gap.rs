//! Force between InSb plates with opposite fields, split into the diagonal
//! and off-diagonal parts of the reflection matrices.
//!
//! cargo run --release --example force_vs_gap

use gyrocasimir::force::{force_sweep, insb_half_space, GapSetup, KernelDecomposition, SweepVariable};
use gyrocasimir::quadrature::QuadratureConfig;

fn main() {
    let template = GapSetup::new(insb_half_space(20.0), insb_half_space(-20.0), 1e-6);
    let gaps: Vec<f64> = (0..6).map(|i| 1e-8 * 10f64.powi(i)).collect();
    let quad = QuadratureConfig::with_rel_tol(1e-5);
    let decomps = [
        KernelDecomposition::Full,
        KernelDecomposition::DiagonalOnly,
        KernelDecomposition::OffDiagonalOnly,
    ];
    let sweeps: Vec<_> = decomps
        .iter()
        .map(|&d| force_sweep(&template, SweepVariable::GapL, &gaps, d, &quad))
        .collect();
    println!("{:>10} {:>16} {:>16} {:>16}", "L[m]", "full", "diagonal", "off-diagonal");
    for (i, l) in gaps.iter().enumerate() {
        let cell = |s: &Vec<gyrocasimir::force::SweepPoint>| match &s[i].result {
            Ok(r) => format!("{:+.6e}", r.force_density),
            Err(e) => format!("error: {e}"),
        };
        println!("{l:>10.1e} {:>16} {:>16} {:>16}", cell(&sweeps[0]), cell(&sweeps[1]), cell(&sweeps[2]));
    }
}
