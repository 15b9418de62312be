//! Far-field limit with constant tensors: a large enough opposite off-diagonal
//! response turns attraction into repulsion.
//!
//! cargo run --release --example retarded_static

use gyrocasimir::asymptotics::retarded_static_force;
use gyrocasimir::materials::StaticParams;
use gyrocasimir::quadrature::QuadratureConfig;

fn main() -> gyrocasimir::Result<()> {
    let quad = QuadratureConfig::with_rel_tol(1e-7);
    let l = 1e-2;
    for (xx, zz) in [(1.0, 1.0), (3.0, 3.0)] {
        println!("eps_xx0 = {xx}, eps_zz0 = {zz}");
        for xy in [0.0, 1.0, 2.0, 4.0, 8.0] {
            let left = StaticParams { eps_xx0: xx, eps_zz0: zz, eps_xy0: xy };
            let same = retarded_static_force(&left, &left, l, &quad)?;
            let opposite = retarded_static_force(&left, &StaticParams { eps_xy0: -xy, ..left }, l, &quad)?;
            println!(
                "  |eps_xy0| = {xy:>3}: same {:+.4e}  opposite {:+.4e} N/m^2",
                same.force_density, opposite.force_density
            );
        }
    }
    Ok(())
}
