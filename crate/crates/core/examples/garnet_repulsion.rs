//! Garnet plates: the pressure changes sign in a window of gaps when the
//! right plate's gyrotropy is reversed.
//!
//! cargo run --release --example garnet_repulsion

use gyrocasimir::force::{force_sweep, GapSetup, KernelDecomposition, SweepVariable};
use gyrocasimir::materials::{GarnetParams, HalfSpaceSpec};
use gyrocasimir::quadrature::QuadratureConfig;

fn main() {
    let g = GarnetParams {
        omega_0: 8.168140899333462e10,
        omega_e: 48380526865282.81,
    };
    let gaps: Vec<f64> = (0..9).map(|i| 2.2e-7 * 10f64.powf(0.32 * i as f64)).collect();
    let quad = QuadratureConfig::with_rel_tol(1e-5);
    for (name, right) in [("same", g), ("opposite", g.flipped())] {
        let template = GapSetup::new(HalfSpaceSpec::garnet(g), HalfSpaceSpec::garnet(right), 1e-6);
        println!("{name}:");
        for p in force_sweep(&template, SweepVariable::GapL, &gaps, KernelDecomposition::Full, &quad) {
            match p.result {
                Ok(r) => println!(
                    "  L = {:.3e} m  F = {:+.4e} N/m^2  {}{}",
                    p.value,
                    r.force_density,
                    if r.force_density > 0.0 { "repulsive" } else { "attractive" },
                    if r.converged { "" } else { " (not converged)" }
                ),
                Err(e) => println!("  L = {:.3e} m  error: {e}", p.value),
            }
        }
    }
}
