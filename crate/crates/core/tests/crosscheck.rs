//! Dense linear algebra cross-checks against nalgebra.

use gyrocasimir::materials::{eps_insb, eps_static, DielectricTensor, InSbParams, StaticParams};
use gyrocasimir::modes::hyperbolic_kperp;
use gyrocasimir::reflection::{interface_solution, l_matrix, BranchPolicy};
use gyrocasimir::CODATA;
use nalgebra::{Matrix3, Matrix4, Vector4};
use num_complex::Complex64;

const C: f64 = 299_792_458.0;

fn tensors() -> Vec<(String, DielectricTensor, f64)> {
    let p = InSbParams::default();
    let mut out = Vec::new();
    for b in [0.0, 3.0, -20.0, 60.0] {
        for xi in [1e11, 3e12, 4e13, 1e15] {
            let e = eps_insb(&p, b, Complex64::new(0.0, xi), &CODATA).unwrap();
            out.push((format!("insb B={b} xi={xi:e}"), e, xi));
        }
    }
    let s = StaticParams {
        eps_xx0: 2.5,
        eps_zz0: 7.0,
        eps_xy0: 1.5,
    };
    out.push(("static".into(), eps_static(&s), 2e14));
    out
}

fn l_of(l: [[Complex64; 4]; 4]) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| l[i][j])
}

/// Each mode's tangential field is an eigenvector of `L` with eigenvalue
/// `+-q`, and the spectrum of `L` is exactly `{+-q_1, +-q_2}`.
#[test]
fn mode_fields_are_l_eigenvectors() {
    for (name, eps, xi) in tensors() {
        for k_par in [0.0, 1e3, 1e5, 1e7, 1e9] {
            let l = l_of(l_matrix(&eps, xi, k_par).unwrap());
            let sol = interface_solution(&eps, xi, k_par, BranchPolicy::Retry).unwrap();
            let modes = sol.modes;
            let scale = l.norm().max(1.0);
            for m in 0..2 {
                let f = Vector4::from_fn(|i, _| modes.fields[m][i]);
                let lf = l * f;
                let resid = [modes.q[m], -modes.q[m]]
                    .into_iter()
                    .map(|lam| (lf - f * lam).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(resid <= 1e-9 * scale * f.norm(), "{name} k={k_par:e} mode {m}: residual {resid:e}");
            }
            // {+-q1, +-q2} is fixed by det L = (q1 q2)^2 and tr L^2 = 2 (q1^2 + q2^2)
            let (q1s, q2s) = (modes.q[0] * modes.q[0], modes.q[1] * modes.q[1]);
            let det = l.determinant();
            let tr2 = (l * l).trace();
            let mag = (q1s.norm() + q2s.norm()).max(1.0);
            assert!((det - q1s * q2s).norm() <= 1e-9 * mag * mag, "{name} k={k_par:e}: det {det} vs {}", q1s * q2s);
            assert!((tr2 - (q1s + q2s) * 2.0).norm() <= 1e-9 * mag, "{name} k={k_par:e}: tr L^2 {tr2}");
        }
    }
}

/// The boundary amplitudes from the in-crate elimination match an LU solve of
/// the continuity system assembled from the public mode fields.
#[test]
fn boundary_solve_matches_lu() {
    for (name, eps, xi) in tensors() {
        for k_par in [0.0, 1e4, 1e6, 1e8] {
            let sol = interface_solution(&eps, xi, k_par, BranchPolicy::Retry).unwrap();
            let [f1, f2] = sol.modes.fields;
            let qv = Complex64::new((C * k_par / xi).hypot(1.0), 0.0);
            let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
            let m = Matrix4::new(
                -one, zero, f1[1], f2[1], //
                qv, zero, -f1[2], -f2[2], //
                zero, qv, f1[0], f2[0], //
                zero, -one, f1[3], f2[3],
            );
            let lu = m.lu();
            let xs = lu.solve(&Vector4::new(one, qv, zero, zero)).unwrap();
            let xp = lu.solve(&Vector4::new(zero, zero, qv, one)).unwrap();
            let r = sol.r;
            for (got, want) in [(r.r_ss, xs[0]), (r.r_ps, xs[1]), (r.r_sp, xp[0]), (r.r_pp, xp[1])] {
                assert!((got - want).norm() <= 1e-12, "{name} k={k_par:e}: {got} vs {want}");
            }
        }
    }
}

/// The exact 3x3 wave-equation determinant, an even quadratic in `k_z^2`,
/// has roots that approach the near-field hyperbolic forms at large `k_x`.
#[test]
fn full_quartic_approaches_near_field_roots() {
    let p = InSbParams::default();
    for b in [1.0, 5.0, 12.0] {
        for omega in [2e13, 3.5e13, 3.8e13, 6e13] {
            let e = eps_insb(&p, b, Complex64::new(omega, 0.0), &CODATA).unwrap();
            let eps = e.to_matrix();
            let k0 = omega / C;
            let kx = 1e3 * k0;
            let det_at = |t: Complex64| -> Complex64 {
                // k = (kx, 0, kz) with kz^2 = t; the x-z coupling enters as kx^2 t
                let kz = t.sqrt();
                let k = [Complex64::new(kx, 0.0), Complex64::new(0.0, 0.0), kz];
                let k2 = k[0] * k[0] + k[2] * k[2];
                let m = Matrix3::from_fn(|i, j| {
                    let delta = if i == j { k2 } else { Complex64::new(0.0, 0.0) };
                    eps[i][j] * k0 * k0 - delta + k[i] * k[j]
                });
                m.determinant()
            };
            let s = kx * kx;
            let (d0, dp, dm) = (
                det_at(Complex64::new(0.0, 0.0)),
                det_at(Complex64::new(s, 0.0)),
                det_at(Complex64::new(-s, 0.0)),
            );
            // det = a t^2 + b t + c with t in units of s
            let c = d0;
            let a = (dp + dm) * 0.5 - c;
            let bq = (dp - dm) * 0.5;
            let disc = (bq * bq - a * c * 4.0).sqrt();
            let mut roots = [(-bq + disc) / (a * 2.0) * s, (-bq - disc) / (a * 2.0) * s];
            let h = hyperbolic_kperp(&p, b, omega, kx).unwrap();
            let near = [h.kperp_1 * h.kperp_1, h.kperp_2 * h.kperp_2];
            for want in near {
                let (i, rel) = roots
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (i, (t - want).norm() / want.norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .unwrap();
                assert!(rel < 1e-2, "B={b} w={omega:e}: near-field root {want} off by {rel:e}");
                roots[i] = Complex64::new(f64::NAN, f64::NAN);
            }
        }
    }
}
