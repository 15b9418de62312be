//! Short-distance limit: the nonretarded force falls with the field and its
//! suppression ratio saturates at large B.
//!
//! cargo run --release --example nonretarded_saturation

use gyrocasimir::asymptotics::nonretarded_force;
use gyrocasimir::force::{casimir_force, insb_half_space, GapSetup, KernelDecomposition};
use gyrocasimir::quadrature::QuadratureConfig;

fn main() -> gyrocasimir::Result<()> {
    let l = 1e-9;
    let quad = QuadratureConfig::with_rel_tol(1e-8);
    let f0 = nonretarded_force(&insb_half_space(0.0), &insb_half_space(0.0), l, &quad)?.force_density;
    println!("L = {l:e} m, f_nret(0) = {f0:+.6e} N/m^2");
    println!("{:>6} {:>16} {:>10}", "B[T]", "f_nret(B)", "f(0)/f(B)");
    for b in [1.0, 5.0, 10.0, 20.0, 40.0, 60.0] {
        let f = nonretarded_force(&insb_half_space(b), &insb_half_space(b), l, &quad)?.force_density;
        println!("{b:>6} {f:>+16.6e} {:>10.4}", f0 / f);
    }
    // the full integral approaches the limit as L shrinks
    for l in [1e-9, 1e-8, 1e-7] {
        let setup = GapSetup::new(insb_half_space(20.0), insb_half_space(-20.0), l);
        let full = casimir_force(&setup, KernelDecomposition::Full, &QuadratureConfig::with_rel_tol(1e-7))?;
        let nret = nonretarded_force(&setup.left, &setup.right, l, &quad)?;
        println!(
            "L = {l:.0e}: full {:+.6e}, nonretarded {:+.6e}, rel diff {:.2e}",
            full.force_density,
            nret.force_density,
            (full.force_density / nret.force_density - 1.0).abs()
        );
    }
    Ok(())
}
