//! The full integrator against the three ideal-mirror closed forms.
//!
//! cargo run --example mirror_benchmarks

use gyrocasimir::asymptotics::{perfect_mirror_value, LimitKind};
use gyrocasimir::force::{casimir_force, GapSetup, KernelDecomposition};
use gyrocasimir::materials::HalfSpaceSpec;
use gyrocasimir::quadrature::QuadratureConfig;
use gyrocasimir::reflection::ReflectionMatrix;

fn main() -> gyrocasimir::Result<()> {
    let cases = [
        ("pec", ReflectionMatrix::pec(), ReflectionMatrix::pec(), LimitKind::Pec),
        ("boyer", ReflectionMatrix::pec(), ReflectionMatrix::pmc(), LimitKind::Boyer),
        (
            "nonreciprocal",
            ReflectionMatrix::nonreciprocal_mirror(),
            ReflectionMatrix::nonreciprocal_mirror(),
            LimitKind::NonreciprocalMirror,
        ),
    ];
    let quad = QuadratureConfig::with_rel_tol(1e-8);
    for (name, left, right, kind) in cases {
        for l in [5e-7, 1e-6, 2e-6] {
            let setup = GapSetup::new(HalfSpaceSpec::perfect_mirror(left), HalfSpaceSpec::perfect_mirror(right), l);
            let f = casimir_force(&setup, KernelDecomposition::Full, &quad)?;
            let exact = perfect_mirror_value(kind, l)?;
            println!(
                "{name:>14} L = {l:.1e} m  F = {:+.10e}  exact = {exact:+.10e}  rel = {:.1e}",
                f.force_density,
                (f.force_density - exact).abs() / exact.abs()
            );
        }
    }
    Ok(())
}
