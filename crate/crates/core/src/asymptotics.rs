//! Closed-form limits: ideal mirrors, the static-permittivity far field, and
//! the near-field (nonretarded) trilogarithm formula.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C, CODATA, HBAR};
use crate::error::{Error, Result};
use crate::force::{casimir_force, ForceResult, GapSetup, KernelDecomposition};
use crate::materials::{HalfSpaceSpec, MaterialModel, StaticParams};
use crate::quadrature::{integrate_adaptive, Domain, QuadratureConfig};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    RetardedStatic,
    Nonretarded,
    Pec,
    Boyer,
    NonreciprocalMirror,
}

/// Ideal-mirror force per unit area [N/m^2].
pub fn perfect_mirror_value(kind: LimitKind, gap_l: f64) -> Result<f64> {
    if !(gap_l.is_finite() && gap_l > 0.0) {
        return Err(Error::invalid("gap_L", "must be finite and > 0"));
    }
    let l4 = gap_l.powi(4);
    match kind {
        // s <-> p conversion on both plates gives the same a, b as two conductors
        LimitKind::Pec | LimitKind::NonreciprocalMirror => Ok(-PI * PI * HBAR * C / (240.0 * l4)),
        LimitKind::Boyer => Ok(7.0 * PI * PI * HBAR * C / (1920.0 * l4)),
        other => Err(Error::invalid(
            "kind",
            format!("{other:?} has no ideal-mirror closed form"),
        )),
    }
}

/// `E_3(z)` for `z >= 0`.
fn expint3(z: f64) -> f64 {
    const N: f64 = 3.0;
    if z == 0.0 {
        return 1.0 / (N - 1.0);
    }
    if z > 1.0 {
        // modified Lentz on the continued fraction
        let tiny = 1e-300;
        let mut b = z + N;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let i = i as f64;
            let an = -i * (N - 1.0 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        return h * (-z).exp();
    }
    // series; the k = n - 1 term carries the logarithm
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let psi3 = 1.5 - EULER_GAMMA;
    let mut ans = 1.0 / (N - 1.0);
    let mut fact = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        fact *= -z / kf;
        let del = if k == 2 {
            fact * (-z.ln() + psi3)
        } else {
            -fact / (kf - N + 1.0)
        };
        ans += del;
        if del.abs() < ans.abs() * 1e-17 {
            break;
        }
    }
    ans
}

/// `k`-th derivative of `e^{-mu t} / t^3` at `t`.
fn tail_term_derivative(k: usize, mu: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
        }
        // d^j t^-3 = (-1)^j (j+2)! / 2 t^{-3-j}
        let fall: f64 = (1..=j).map(|i| (i + 2) as f64).product();
        let pow_part = if j % 2 == 0 { fall } else { -fall } * t.powi(-3 - j as i32);
        let exp_part = (-mu).powi((k - j) as i32);
        sum += binom * exp_part * pow_part;
    }
    sum * (-mu * t).exp()
}

/// `Li_3(x) = sum_{n>=1} x^n / n^3` on `[0, 1]`.
///
/// Below 1/2 the defining series converges geometrically. Above, the first
/// `N - 1` terms are summed and the rest, `sum_{n>=N} e^{-mu n} / n^3` with
/// `mu = -ln x`, is replaced by its Euler-Maclaurin expansion: the integral
/// `E_3(mu N) / N^2`, the half end-point term and three Bernoulli corrections.
pub fn polylog3(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError {
            x,
            domain: "[0, 1]",
        });
    }
    if x <= 0.5 {
        let mut sum = 0.0;
        let mut p = 1.0;
        for n in 1..200 {
            p *= x;
            let t = p / (n as f64).powi(3);
            sum += t;
            if t < 1e-18 * sum {
                break;
            }
        }
        return Ok(sum);
    }
    const N: usize = 40;
    let mu = -x.ln();
    let nf = N as f64;
    let mut head = 0.0;
    let mut p = 1.0;
    for n in 1..N {
        p *= x;
        head += p / (n as f64).powi(3);
    }
    // B2/2!, B4/4!, B6/6!
    const BERNOULLI: [f64; 3] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0];
    let mut tail = expint3(mu * nf) / (nf * nf) + 0.5 * tail_term_derivative(0, mu, nf);
    for (i, b) in BERNOULLI.iter().enumerate() {
        tail -= b * tail_term_derivative(2 * i + 1, mu, nf);
    }
    Ok(head + tail)
}

/// Near-field reflection strength `(g - 1) / (g + 1)`, `g = eps_xx / sqrt(eps_xx / eps_zz)`.
///
/// On the imaginary axis `g = sqrt(eps_xx eps_zz)`; written this way the
/// principal roots also give the right branch at real frequency.
pub fn nonretarded_rpp(eps_xx: Complex64, eps_zz: Complex64) -> Complex64 {
    let g = eps_xx / (eps_xx / eps_zz).sqrt();
    (g - 1.0) / (g + 1.0)
}

fn same_diagonal(a: &HalfSpaceSpec, b: &HalfSpaceSpec) -> bool {
    match (a.model, b.model) {
        (MaterialModel::InSb(p), MaterialModel::InSb(q)) => {
            p == q && a.projected_b.abs() == b.projected_b.abs()
        }
        (MaterialModel::Garnet(p), MaterialModel::Garnet(q)) => {
            p.omega_0 * p.omega_e == q.omega_0 * q.omega_e && p.omega_0.abs() == q.omega_0.abs()
        }
        (MaterialModel::Static(p), MaterialModel::Static(q)) => {
            p.eps_xx0 == q.eps_xx0 && p.eps_zz0 == q.eps_zz0
        }
        _ => false,
    }
}

/// `-hbar / (8 pi^2 L^3) int_0^inf dxi Li_3(r^2)` for two half-spaces with the
/// same diagonal response. The off-diagonal entry and the relative field sign
/// drop out of this limit.
pub fn nonretarded_force(
    left: &HalfSpaceSpec,
    right: &HalfSpaceSpec,
    gap_l: f64,
    cfg: &QuadratureConfig,
) -> Result<ForceResult> {
    if !(gap_l.is_finite() && gap_l > 0.0) {
        return Err(Error::invalid("gap_L", "must be finite and > 0"));
    }
    cfg.validate()?;
    left.validate()?;
    right.validate()?;
    if !same_diagonal(left, right) {
        return Err(Error::invalid(
            "right",
            "the nonretarded limit needs identical diagonal permittivities on both sides",
        ));
    }
    let mut freqs = left.characteristic_frequencies(&CODATA);
    if let MaterialModel::Static(_) = left.model {
        return Err(Error::invalid(
            "left",
            "a frequency-independent tensor has no convergent nonretarded integral",
        ));
    }
    freqs.sort_by(f64::total_cmp);
    let scale = freqs.last().copied().unwrap_or(1e14);
    let pref = -HBAR / (8.0 * PI * PI * gap_l.powi(3));
    let integrand = |xi: f64| -> Result<f64> {
        let eps = left
            .permittivity_imaginary(xi, &CODATA)?
            .expect("mirrors are rejected above");
        let r = nonretarded_rpp(eps.eps_xx, eps.eps_zz);
        let r2 = r * r;
        if r2.im.abs() > 1e-10 * r2.norm().max(1e-300) {
            return Err(Error::DomainError {
                x: r2.re,
                domain: "real r^2 on the imaginary axis",
            });
        }
        polylog3(r2.re)
    };
    let cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / pref.abs(),
        ..*cfg
    };
    let est = integrate_adaptive(integrand, &Domain::semi_infinite(0.0, scale).with_breakpoints(freqs), &cfg)?;
    Ok(ForceResult {
        force_density: pref * est.value,
        abs_error_estimate: pref.abs() * est.abs_error,
        evaluations: est.evaluations,
        converged: est.converged,
    })
}

/// Full double integral with constant tensors, the far-field estimate.
pub fn retarded_static_force(
    left: &StaticParams,
    right: &StaticParams,
    gap_l: f64,
    cfg: &QuadratureConfig,
) -> Result<ForceResult> {
    let setup = GapSetup::new(
        HalfSpaceSpec::static_tensor(*left),
        HalfSpaceSpec::static_tensor(*right),
        gap_l,
    );
    casimir_force(&setup, KernelDecomposition::Full, cfg)
}
