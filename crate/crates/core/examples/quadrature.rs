//! The adaptive integrator and the trilogarithm on their own.
//!
//! cargo run --example quadrature

use gyrocasimir::asymptotics::polylog3;
use gyrocasimir::quadrature::{integrate_adaptive, Domain, QuadratureConfig};

fn main() -> gyrocasimir::Result<()> {
    let cfg = QuadratureConfig::with_rel_tol(1e-12);
    // int_0^inf x^3 / (e^x - 1) dx = pi^4 / 15
    let bose = integrate_adaptive(|x| Ok(x.powi(3) / x.exp_m1()), &Domain::semi_infinite(0.0, 1.0), &cfg)?;
    let exact = std::f64::consts::PI.powi(4) / 15.0;
    println!(
        "Bose integral {:.15} (exact {exact:.15}), error estimate {:.1e}, {} evaluations",
        bose.value, bose.abs_error, bose.evaluations
    );
    // a kink is integrated efficiently when declared as a breakpoint
    let kinked = Domain::new(0.0, 2.0).with_breakpoints([1.0]);
    let v = integrate_adaptive(|x| Ok((x - 1.0).abs()), &kinked, &cfg)?;
    println!("int_0^2 |x - 1| dx = {} with {} evaluations", v.value, v.evaluations);
    for x in [0.0, 0.25, 0.5, 0.9, 1.0] {
        println!("Li_3({x}) = {:.15}", polylog3(x)?);
    }
    Ok(())
}
