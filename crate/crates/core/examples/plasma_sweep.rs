//! Nonretarded force suppression as a function of the plasma frequency.
//!
//! cargo run --release --example plasma_sweep

use gyrocasimir::materials::InSbParams;
use gyrocasimir::modes::plasma_frequency_sweep;
use gyrocasimir::quadrature::QuadratureConfig;

fn main() -> gyrocasimir::Result<()> {
    let grid: Vec<f64> = (0..8).map(|i| 1e13 * 10f64.powf(0.25 * i as f64)).collect();
    let rows = plasma_frequency_sweep(&InSbParams::default(), &[0.0, 20.0], 1e-8, &grid, &QuadratureConfig::with_rel_tol(1e-7));
    println!("{:>12} {:>14}", "omega_p", "f(0)/f(20 T)");
    for pair in rows.chunks(2) {
        let f0 = pair[0].result.clone()?.force_density;
        let fb = pair[1].result.clone()?.force_density;
        println!("{:>12.3e} {:>14.4}", pair[0].omega_p, f0 / fb);
    }
    Ok(())
}
