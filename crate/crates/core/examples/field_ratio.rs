//! Suppression of the force by a bias field: f(B = 0) / f(B) against the gap
//! for same and opposite field orientations.
//!
//! cargo run --release --example field_ratio

use gyrocasimir::force::{casimir_force, insb_half_space, FieldConfig, GapSetup, KernelDecomposition};
use gyrocasimir::quadrature::QuadratureConfig;
use rayon::prelude::*;

fn main() -> gyrocasimir::Result<()> {
    let b = 20.0;
    let quad = QuadratureConfig::with_rel_tol(1e-6);
    let gaps: Vec<f64> = (0..=10).map(|i| 1e-8 * 10f64.powf(0.5 * i as f64)).collect();
    let force = |bl: f64, br: f64, l: f64| {
        casimir_force(&GapSetup::new(insb_half_space(bl), insb_half_space(br), l), KernelDecomposition::Full, &quad)
            .map(|r| r.force_density)
    };
    let rows: Vec<_> = gaps
        .par_iter()
        .map(|&l| -> gyrocasimir::Result<(f64, f64, f64)> {
            let f0 = force(0.0, 0.0, l)?;
            let same = f0 / force(b, FieldConfig::Same.sign() * b, l)?;
            let opposite = f0 / force(b, FieldConfig::Opposite.sign() * b, l)?;
            Ok((l, same, opposite))
        })
        .collect();
    println!("B = {b} T\n{:>10} {:>10} {:>10}", "L[m]", "same", "opposite");
    for row in rows {
        let (l, s, o) = row?;
        println!("{l:>10.2e} {s:>10.4} {o:>10.4}");
    }
    Ok(())
}
