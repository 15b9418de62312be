//! Near-field spectral density of the gap, the coupled surface-polariton
//! branch, and the field at which the hyperbolic region I disappears.
//!
//! cargo run --release --example modes_map

use gyrocasimir::materials::InSbParams;
use gyrocasimir::modes::{region_one_vanishing_field, spectral_map, RegionLabel};

fn main() -> gyrocasimir::Result<()> {
    let p = InSbParams::default();
    let (b, l) = (5.0, 1e-8);
    let omega: Vec<f64> = (0..60).map(|i| 2e13 + 4e11 * i as f64).collect();
    let kx: Vec<f64> = (0..40).map(|j| 1e6 * 10f64.powf(3.0 * j as f64 / 39.0)).collect();
    let map = spectral_map(&p, b, l, &omega, &kx)?;
    let mut last = RegionLabel::None;
    for (i, w) in omega.iter().enumerate() {
        if map.region[i] != last {
            println!("omega >= {w:.3e}: region {}", map.region[i].as_str());
            last = map.region[i];
        }
    }
    println!("peak spectral density {:.3e} 1/m", map.max_value());
    for d in map.dispersion.iter().step_by(4) {
        println!("SPhP branch: omega = {:.4e} rad/s, k_x = {:.4e} rad/m", d.omega, d.kx);
    }
    let b_star = region_one_vanishing_field(&p, 0.0, 40.0, 0.01)?;
    println!("region I vanishes above B = {b_star:.2} T");
    Ok(())
}
