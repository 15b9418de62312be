//! Reflection matrix of a magnetized InSb half-space on the imaginary axis.
//!
//! cargo run --example reflection

use gyrocasimir::force::insb_half_space;
use gyrocasimir::reflection::half_space_reflection;

fn main() -> gyrocasimir::Result<()> {
    let xi = 2e13;
    println!("xi = {xi:e} rad/s");
    for b in [0.0, 20.0, -20.0] {
        for k in [1e4, 1e6, 1e8] {
            let r = half_space_reflection(&insb_half_space(b), xi, k)?;
            println!(
                "B = {b:>5} T  k = {k:.0e}  r_ss = {:+.6}  r_pp = {:+.6}  r_sp = {:.3e}  r_ps = {:.3e}  |R| = {:.6}",
                r.r_ss.re,
                r.r_pp.re,
                r.r_sp,
                r.r_ps,
                r.spectral_norm()
            );
        }
    }
    Ok(())
}
