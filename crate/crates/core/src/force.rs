//! Two-plate multiple-reflection kernel and the imaginary-frequency force
//! integral.
//!
//! With `x = exp(-2 kappa L)` the force per unit area is
//!
//! ```text
//!     f = -hbar / (4 pi^2) int_0^inf dxi int_0^inf dk k kappa x
//!             Re Tr[R- (1 - x R+ R-)^-1 R+ + R+ (1 - x R- R+)^-1 R-].
//! ```
//!
//! It is evaluated in `w = 2 xi L / c` and `y = 2 kappa L` (so `k dk = kappa
//! dkappa` removes the square-root kink at `k = 0`):
//!
//! ```text
//!     f = -hbar c / (64 pi^2 L^4) int_0^inf dw int_w^inf dy y^2 e^-y T(w, y).
//! ```

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use twofloat::TwoFloat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C, CODATA, HBAR};
use crate::error::{Error, Result};
use crate::materials::{HalfSpaceSpec, InSbParams, MaterialModel};
use crate::quadrature::{integrate_2d_nested, Domain, QuadratureConfig};
use crate::reflection::{half_space_reflection_with, BranchPolicy, ReflectionMatrix};

pub type Matrix2 = [[Complex64; 2]; 2];

/// `|det D|` below which the round-trip resummation is refused.
pub const ROUND_TRIP_DET_FLOOR: f64 = 1e-14;
/// Absolute floor on the dimensionless force integral. The perfect-mirror
/// value is `4 pi^4 / 15 ~ 26`; contributions below this are round-off.
pub const DIMENSIONLESS_ABS_FLOOR: f64 = 1e-13;
/// Absolute accuracy assumed for computed reflection coefficients.
pub const REFLECTION_ROUNDOFF: f64 = 1e-12;
/// Largest tolerated `|Im T| / |T|` when every transmitted mode decays.
pub const KERNEL_IMAG_TOLERANCE: f64 = 1e-10;

/// Plate geometry: `left` fills `z < 0`, `right` fills `z > L`. Each
/// half-space carries its own outward-normal field projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSetup {
    pub left: HalfSpaceSpec,
    pub right: HalfSpaceSpec,
    /// [m]
    pub gap_l: f64,
    /// Accept InSb with `eps_inf != 1` in force integrals.
    pub allow_eps_inf_override: bool,
}

impl GapSetup {
    pub fn new(left: HalfSpaceSpec, right: HalfSpaceSpec, gap_l: f64) -> Self {
        Self {
            left,
            right,
            gap_l,
            allow_eps_inf_override: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap_l.is_finite() && self.gap_l > 0.0) {
            return Err(Error::invalid("gap_L", format!("must be finite and > 0, got {}", self.gap_l)));
        }
        for side in [&self.left, &self.right] {
            side.validate()?;
            if let MaterialModel::InSb(p) = side.model {
                if p.eps_inf != 1.0 && !self.allow_eps_inf_override {
                    return Err(Error::invalid(
                        "eps_inf",
                        "force integrals need eps_inf = 1 (the response must return to vacuum at \
                         large xi for convergence); set the override flag to force it",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Left and right exchanged; the integrand is symmetric in the pair.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelDecomposition {
    #[default]
    Full,
    /// `r_sp = r_ps = 0` on both plates.
    DiagonalOnly,
    /// `r_ss = r_pp = 0` on both plates.
    #[serde(rename = "offdiagonal_only")]
    OffDiagonalOnly,
}

impl KernelDecomposition {
    pub fn apply(&self, r: ReflectionMatrix) -> ReflectionMatrix {
        match self {
            KernelDecomposition::Full => r,
            KernelDecomposition::DiagonalOnly => r.diagonal_part(),
            KernelDecomposition::OffDiagonalOnly => r.off_diagonal_part(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    /// [N/m^2]; negative is attractive.
    pub force_density: f64,
    /// [N/m^2]
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn mat(r: &ReflectionMatrix) -> Matrix2 {
    r.as_array()
}

// The kernel algebra runs in double-double. Near a sign change of the kernel
// its terms cancel to ~1e-5 of their size, which in plain f64 leaves ~1e-11
// relative error and lets the two equivalent forms drift apart.
type Cdd = Complex<TwoFloat>;
type Dd2 = [[Cdd; 2]; 2];

fn dd(z: Complex64) -> Cdd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn rounded(z: Cdd) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

fn dd_mat(r: &ReflectionMatrix) -> Dd2 {
    r.as_array().map(|row| row.map(dd))
}

fn rounded_mat(m: &Dd2) -> Matrix2 {
    m.map(|row| row.map(rounded))
}

fn mul(a: &Dd2, b: &Dd2) -> Dd2 {
    let mut out = [[Cdd::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn det(m: &Dd2) -> Cdd {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// `delta I + x (I - M)`, which equals `I - x M` for `x = 1 - delta` but keeps
/// its accuracy when `x -> 1`.
fn round_trip(m: &Dd2, x: TwoFloat, delta: TwoFloat) -> Dd2 {
    let mut d = [[Cdd::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            d[i][j] = -m[i][j] * x;
        }
        d[i][i] += Cdd::new(x + delta, TwoFloat::from(0.0));
    }
    d
}

fn inverse(d: &Dd2) -> Result<Dd2> {
    let det = det(d);
    let mag = rounded(det).norm();
    if mag < ROUND_TRIP_DET_FLOOR {
        return Err(Error::NearSingularRoundTrip { det: mag });
    }
    Ok([[d[1][1] / det, -d[0][1] / det], [-d[1][0] / det, d[0][0] / det]])
}

/// `x = exp(-y)` and `1 - x` without cancellation.
/// The smaller of the two is taken from libm and the other derived from it,
/// so `x + delta == 1` holds in double-double and both kernel forms see the
/// same damping.
fn damping(y: f64) -> (TwoFloat, TwoFloat) {
    let one = TwoFloat::from(1.0);
    if y < std::f64::consts::LN_2 {
        let delta = TwoFloat::from(-(-y).exp_m1());
        (one - delta, delta)
    } else {
        let x = TwoFloat::from((-y).exp());
        (x, one - x)
    }
}

/// `[1 - R+ R- x]^-1` and `[1 - R- R+ x]^-1` with `x = exp(-2 kappa L)`.
pub fn neumann_denominators(
    rm: &ReflectionMatrix,
    rp: &ReflectionMatrix,
    kappa_perp: f64,
    gap_l: f64,
) -> Result<(Matrix2, Matrix2)> {
    let (x, delta) = damping(2.0 * kappa_perp * gap_l);
    let (m, p) = (dd_mat(rm), dd_mat(rp));
    let dp = round_trip(&mul(&p, &m), x, delta);
    let dm = round_trip(&mul(&m, &p), x, delta);
    Ok((rounded_mat(&inverse(&dp)?), rounded_mat(&inverse(&dm)?)))
}

fn frob(m: &Matrix2) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Complex trace together with the round-off level it carries: reflection
/// entries are good to about `REFLECTION_ROUNDOFF` absolute, so a kernel built
/// from tiny coefficients is dominated by that noise.
struct Trace {
    value: Complex64,
    scale: f64,
}

/// `Tr[R- D+^-1 R+ + R+ D-^-1 R-]`.
fn trace_kernel(rm: &ReflectionMatrix, rp: &ReflectionMatrix, y: f64) -> Result<Trace> {
    let (x, delta) = damping(y);
    let (m, p) = (dd_mat(rm), dd_mat(rp));
    let dp_inv = inverse(&round_trip(&mul(&p, &m), x, delta))?;
    let dm_inv = inverse(&round_trip(&mul(&m, &p), x, delta))?;
    let t1 = mul(&m, &mul(&dp_inv, &p));
    let t2 = mul(&p, &mul(&dm_inv, &m));
    Ok(Trace {
        value: rounded(t1[0][0] + t1[1][1] + t2[0][0] + t2[1][1]),
        scale: (frob(&mat(rm)) + frob(&mat(rp))) * (frob(&rounded_mat(&dp_inv)) + frob(&rounded_mat(&dm_inv))),
    })
}

/// Real part of the trace; an imaginary part above both the relative
/// tolerance and the round-off level is a branch or conjugation bug.
fn checked_real(t: &Trace) -> Result<f64> {
    let im = t.value.im.abs();
    if im > KERNEL_IMAG_TOLERANCE * t.value.norm() && im > REFLECTION_ROUNDOFF * t.scale {
        return Err(Error::NonRealKernel {
            real: t.value.re,
            imag: t.value.im,
        });
    }
    Ok(t.value.re)
}

/// `k kappa x Re Tr[R- D+^-1 R+ + R+ D-^-1 R-]` [1/m^2].
pub fn force_integrand_trace(
    rm: &ReflectionMatrix,
    rp: &ReflectionMatrix,
    k_par: f64,
    kappa_perp: f64,
    gap_l: f64,
) -> Result<f64> {
    let y = 2.0 * kappa_perp * gap_l;
    let t = checked_real(&trace_kernel(rm, rp, y)?)?;
    Ok(k_par * kappa_perp * (-y).exp() * t)
}

/// The same kernel written through the scalars
/// `a = Tr(R- R+)` and `b = det R- det R+`:
/// `2 k kappa x (a - 2 x b) / (1 - x a + x^2 b)`.
pub fn force_integrand_ab(
    rm: &ReflectionMatrix,
    rp: &ReflectionMatrix,
    k_par: f64,
    kappa_perp: f64,
    gap_l: f64,
) -> Result<f64> {
    let (m, p) = (dd_mat(rm), dd_mat(rp));
    let a = m[0][0] * p[0][0] + m[1][1] * p[1][1] + m[1][0] * p[0][1] + m[0][1] * p[1][0];
    let b = det(&m) * det(&p);
    let (xd, dd_delta) = damping(2.0 * kappa_perp * gap_l);
    let two = TwoFloat::from(2.0);
    // 1 - x a + x^2 b expanded around x = 1
    let den = (Cdd::one() - a + b) + (a - b * two) * dd_delta + b * (dd_delta * dd_delta);
    let den_mag = rounded(den).norm();
    if den_mag < ROUND_TRIP_DET_FLOOR {
        return Err(Error::NearSingularRoundTrip { det: den_mag });
    }
    let scale = 4.0 * (frob(&mat(rm)) + frob(&mat(rp))) / den_mag;
    let t = checked_real(&Trace {
        value: rounded((a - b * (two * xd)) * two / den),
        scale,
    })?;
    Ok(k_par * kappa_perp * f64::from(xd) * t)
}

/// `-hbar c / (64 pi^2 L^4)`.
pub fn force_prefactor(gap_l: f64) -> f64 {
    -HBAR * C / (64.0 * std::f64::consts::PI.powi(2) * gap_l.powi(4))
}

/// Dimensionless integrand `y^2 e^-y T` at `(w, y)`.
fn dimensionless_integrand(setup: &GapSetup, decomp: KernelDecomposition, w: f64, y: f64) -> Result<f64> {
    let l = setup.gap_l;
    let xi = C * w / (2.0 * l);
    let k_par = ((y - w).max(0.0) * (y + w)).sqrt() / (2.0 * l);
    let (rm, tm) = half_space_reflection_with(&setup.left, xi, k_par, BranchPolicy::TieBreak)?;
    let (rp, tp) = half_space_reflection_with(&setup.right, xi, k_par, BranchPolicy::TieBreak)?;
    let (rm, rp) = (decomp.apply(rm), decomp.apply(rp));
    let t = trace_kernel(&rm, &rp, y)?;
    // A tie-broken (non-decaying) mode makes the kernel complex; its real part
    // equals the average over both branch choices.
    let t = if tm || tp { t.value.re } else { checked_real(&t)? };
    Ok(y * y * (-y).exp() * t)
}

fn outer_domain(setup: &GapSetup) -> Domain {
    let to_w = |omega: f64| 2.0 * omega * setup.gap_l / C;
    let mut pts: Vec<f64> = setup
        .left
        .characteristic_frequencies(&CODATA)
        .into_iter()
        .chain(setup.right.characteristic_frequencies(&CODATA))
        .map(to_w)
        .filter(|w| *w < 1.0)
        .collect();
    pts.sort_by(f64::total_cmp);
    Domain::semi_infinite(0.0, 1.0).with_breakpoints(pts)
}

fn inner_domain(w: f64) -> Domain {
    let cuts = [2.0, 10.0, 1e2, 1e3, 1e4]
        .into_iter()
        .map(|f| f * w)
        .filter(|y| *y < w + 1.0);
    Domain::semi_infinite(w, 1.0).with_breakpoints(cuts)
}

/// Force per unit area on the right plate.
pub fn casimir_force(
    setup: &GapSetup,
    decomp: KernelDecomposition,
    quad: &QuadratureConfig,
) -> Result<ForceResult> {
    setup.validate()?;
    quad.validate()?;
    let pref = force_prefactor(setup.gap_l);
    let cfg = QuadratureConfig {
        abs_tol: (quad.abs_tol / pref.abs()).max(DIMENSIONLESS_ABS_FLOOR),
        ..*quad
    };
    let est = integrate_2d_nested(
        |w, y| dimensionless_integrand(setup, decomp, w, y),
        &outer_domain(setup),
        inner_domain,
        &cfg,
    )?;
    Ok(ForceResult {
        force_density: pref * est.value,
        abs_error_estimate: pref.abs() * est.abs_error,
        evaluations: est.evaluations,
        converged: est.converged,
    })
}

/// How the bias field enters the two plates in a field sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldConfig {
    /// `B+ = B-`
    Same,
    /// `B+ = -B-`
    Opposite,
}

impl FieldConfig {
    pub fn sign(&self) -> f64 {
        match self {
            FieldConfig::Same => 1.0,
            FieldConfig::Opposite => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variable")]
pub enum SweepVariable {
    /// Grid of gap widths [m].
    GapL,
    /// Grid of fields [T]; left gets `B`, right gets `sign * B`.
    B { config: FieldConfig },
    /// Grid of plasma frequencies [rad/s] applied to every InSb plate by
    /// rescaling its carrier density.
    OmegaP,
    /// Grid of signs (+1 / -1) applied to the right garnet plate.
    GarnetSign,
}

impl SweepVariable {
    pub fn column(&self) -> &'static str {
        match self {
            SweepVariable::GapL => "gap_L[m]",
            SweepVariable::B { .. } => "B[T]",
            SweepVariable::OmegaP => "omega_p[rad/s]",
            SweepVariable::GarnetSign => "garnet_sign[1]",
        }
    }

    /// The setup for grid value `v`.
    pub fn apply(&self, template: &GapSetup, v: f64) -> Result<GapSetup> {
        let mut s = *template;
        match *self {
            SweepVariable::GapL => s.gap_l = v,
            SweepVariable::B { config } => {
                s.left.projected_b = v;
                s.right.projected_b = config.sign() * v;
            }
            SweepVariable::OmegaP => {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid("omega_p", "must be > 0"));
                }
                for side in [&mut s.left, &mut s.right] {
                    if let MaterialModel::InSb(p) = side.model {
                        side.model = MaterialModel::InSb(p.with_plasma_frequency(v, &CODATA));
                    }
                }
            }
            SweepVariable::GarnetSign => {
                if v != 1.0 && v != -1.0 {
                    return Err(Error::invalid("garnet_sign", "must be +1 or -1"));
                }
                if let MaterialModel::Garnet(g) = template.right.model {
                    if v < 0.0 {
                        s.right.model = MaterialModel::Garnet(g.flipped());
                    }
                }
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<ForceResult>,
}

/// Evaluates every grid point in parallel; the output order matches `grid`,
/// and a failed point does not stop the others.
pub fn force_sweep(
    template: &GapSetup,
    variable: SweepVariable,
    grid: &[f64],
    decomp: KernelDecomposition,
    quad: &QuadratureConfig,
) -> Vec<SweepPoint> {
    grid.par_iter()
        .map(|&v| SweepPoint {
            value: v,
            result: variable
                .apply(template, v)
                .and_then(|s| casimir_force(&s, decomp, quad)),
        })
        .collect()
}

/// InSb half-space with the given projected field and default constants.
pub fn insb_half_space(projected_b: f64) -> HalfSpaceSpec {
    HalfSpaceSpec::insb(InSbParams::default(), projected_b)
}
