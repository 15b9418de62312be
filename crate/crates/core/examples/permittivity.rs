//! InSb permittivity at real frequencies and the hyperbolic-region label.
//!
//! cargo run --example permittivity

use gyrocasimir::materials::{eps_insb, plasma_frequency, InSbParams};
use gyrocasimir::modes::classify_region;
use gyrocasimir::CODATA;
use num_complex::Complex64;

fn main() -> gyrocasimir::Result<()> {
    let p = InSbParams::default();
    println!("omega_p = {:.4e} rad/s", plasma_frequency(&p, &CODATA));
    println!("{:>6} {:>10} {:>24} {:>24} {:>24} {:>6}", "B[T]", "omega", "eps_xx", "eps_zz", "eps_xy", "region");
    for b in [0.0, 5.0, 20.0] {
        for omega in [1e13, 3e13, 3.7e13, 5e13, 1e14] {
            let e = eps_insb(&p, b, Complex64::new(omega, 0.0), &CODATA)?;
            let region = classify_region(&p, b, omega)?;
            println!(
                "{b:>6} {omega:>10.2e} {:>24.4} {:>24.4} {:>24.4} {:>6}",
                e.eps_xx,
                e.eps_zz,
                e.eps_xy,
                region.as_str()
            );
        }
    }
    // On the imaginary axis the tensor is real apart from eps_xy, which is
    // odd in the field.
    let xi = 1e13;
    let up = eps_insb(&p, 10.0, Complex64::new(0.0, xi), &CODATA)?;
    let down = eps_insb(&p, -10.0, Complex64::new(0.0, xi), &CODATA)?;
    println!("xi = {xi:e}: eps_xy(+B) = {:.4e}, eps_xy(-B) = {:.4e}", up.eps_xy, down.eps_xy);
    Ok(())
}
