//! Test-side reference implementations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const QE: f64 = 1.602_176_634e-19;
pub const ME: f64 = 9.109_383_701_5e-31;

/// Double-exponential rule on `(0, 1)` (`finite`) or `(0, inf)`, halving the
/// step until two levels agree to `tol`.
pub fn de_integrate(f: &dyn Fn(f64) -> f64, finite: bool, tol: f64) -> f64 {
    let node = |t: f64| -> (f64, f64) {
        if finite {
            let u = 0.5 * PI * t.sinh();
            let ch = u.cosh();
            let x = 0.5 * (1.0 + u.tanh());
            (x, 0.25 * PI * t.cosh() / (ch * ch))
        } else {
            let x = (0.5 * PI * t.sinh()).exp();
            (x, 0.5 * PI * t.cosh() * x)
        }
    };
    let t_max = if finite { 3.2 } else { 4.5 };
    let sum_at = |h: f64, odd_only: bool| -> f64 {
        let n = (t_max / h).ceil() as i64;
        let mut s = 0.0;
        for i in -n..=n {
            if odd_only && i % 2 == 0 {
                continue;
            }
            let (x, w) = node(i as f64 * h);
            if x > 0.0 && x.is_finite() && (!finite || x < 1.0) && w > 0.0 {
                let v = f(x);
                if v != 0.0 {
                    s += w * v;
                }
            }
        }
        s
    };
    let mut h = 0.5;
    let mut raw = sum_at(h, false);
    let mut est = h * raw;
    for _ in 0..12 {
        h *= 0.5;
        raw += sum_at(h, true);
        let next = h * raw;
        if (next - est).abs() <= tol * next.abs() {
            return next;
        }
        est = next;
    }
    panic!("double-exponential rule did not reach {tol}");
}

/// Isotropic InSb permittivity on the imaginary axis with `eps_inf = 1`.
pub fn insb_eps_iso(xi: f64) -> f64 {
    let (wl, wt, gph, gc, n, mr) = (3.62e13, 3.39e13, 5.65e11, 3.39e12, 1.07e23, 0.022);
    let wp2 = n * QE * QE / (mr * ME * EPS0);
    1.0 + (wl * wl - wt * wt) / (wt * wt + xi * xi + gph * xi) + wp2 / (xi * (xi + gc))
}

/// Two-polarization Lifshitz pressure between identical isotropic
/// half-spaces, in the variables `x = 2 kappa L`, `t = xi / (c kappa)`:
/// `f = -hbar c / (32 pi^2 L^4) int dx x^3 int_0^1 dt sum r^2 e^-x / (1 - r^2 e^-x)`.
pub fn scalar_lifshitz(eps: &dyn Fn(f64) -> f64, gap_l: f64, tol: f64) -> f64 {
    let inner = |x: f64| -> f64 {
        let kappa = x / (2.0 * gap_l);
        let e = (-x).exp();
        let one_minus_e = -(-x).exp_m1();
        let g = |t: f64| -> f64 {
            let xi = C * kappa * t;
            let ep = eps(xi);
            let q2 = (ep - 1.0) * (xi / C).powi(2);
            let km = (kappa * kappa + q2).sqrt();
            // 1 + r_s and 1 - r_p in closed form so 1 - r^2 keeps its digits
            let rs_plus = 2.0 * kappa / (kappa + km);
            let rp_minus = 2.0 * km / (ep * kappa + km);
            let (rs, rp) = (rs_plus - 1.0, 1.0 - rp_minus);
            let one_minus = [rs_plus * (2.0 - rs_plus), rp_minus * (2.0 - rp_minus)];
            [rs, rp]
                .iter()
                .zip(one_minus)
                .map(|(r, om)| r * r * e / (one_minus_e + e * om))
                .sum()
        };
        // the inner integral is O(1/x) and enters with x^3: only x^2 of its
        // relative error reaches the outer value
        let inner_tol = (tol * 0.1 / x.min(1.0).powi(2)).min(1e-3);
        x.powi(3) * de_integrate(&g, true, inner_tol)
    };
    -HBAR * C / (32.0 * PI * PI * gap_l.powi(4)) * de_integrate(&inner, false, tol)
}

pub fn pec_pressure(gap_l: f64) -> f64 {
    -PI * PI * HBAR * C / (240.0 * gap_l.powi(4))
}
