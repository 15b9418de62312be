//! Vacuum / gyrotropic-medium interface on the imaginary frequency axis.
//!
//! Everything is solved in dimensionless form. With `omega = i xi` and the
//! in-plane wavevector along x, let
//!
//! ```text
//!     s = c k_par / xi,        q_vac = sqrt(1 + s^2) = c kappa_vac / xi,
//! ```
//!
//! and let `q` be the dimensionless decay constant of a transmitted mode, so a
//! field `~ exp(i k_perp z)` has `k_perp = i xi q / c` and decays for `Re q > 0`.
//! The 4x4 matrix `L` acts on `(e_x, e_y, h_x, h_y)`; its eigenvalues are `+-q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, C};
use crate::error::{Error, Result};
use crate::linalg;
use crate::materials::{DielectricTensor, HalfSpaceSpec, MaterialModel};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|eps_zz|` below which the z components cannot be eliminated.
pub const EPS_ZZ_FLOOR: f64 = 1e-12;
/// A mode whose decay part is below this fraction of `|q|` is grazing.
pub const GRAZING_TOLERANCE: f64 = 1e-10;
/// Below this relative cross product the two planar mode vectors are taken
/// as coincident (degenerate roots) and replaced by the s/p basis.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;
/// Relative pivot floor of the boundary solve.
pub const BOUNDARY_PIVOT_FLOOR: f64 = 1e-14;
/// Relative size of the single `k_par` nudge used by [`BranchPolicy::Retry`].
pub const GRAZING_NUDGE: f64 = 1e-8;

/// `[[r_ss, r_sp], [r_ps, r_pp]]`. The second index is the incident
/// polarization, the first the reflected one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionMatrix {
    pub r_ss: Complex64,
    pub r_sp: Complex64,
    pub r_ps: Complex64,
    pub r_pp: Complex64,
}

impl ReflectionMatrix {
    pub const ZERO: Self = Self {
        r_ss: ZERO,
        r_sp: ZERO,
        r_ps: ZERO,
        r_pp: ZERO,
    };

    pub fn new(r_ss: Complex64, r_sp: Complex64, r_ps: Complex64, r_pp: Complex64) -> Self {
        Self { r_ss, r_sp, r_ps, r_pp }
    }

    pub fn real(r_ss: f64, r_sp: f64, r_ps: f64, r_pp: f64) -> Self {
        Self::new(r_ss.into(), r_sp.into(), r_ps.into(), r_pp.into())
    }

    /// Perfect electric conductor.
    pub fn pec() -> Self {
        Self::real(-1.0, 0.0, 0.0, 1.0)
    }

    /// Perfect magnetic conductor (infinitely permeable mirror).
    pub fn pmc() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    /// Ideal mirror that converts s into p and back.
    pub fn nonreciprocal_mirror() -> Self {
        Self::real(0.0, -1.0, -1.0, 0.0)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.r_ss, self.r_sp, self.r_ps, self.r_pp]
    }

    pub fn as_array(&self) -> [[Complex64; 2]; 2] {
        [[self.r_ss, self.r_sp], [self.r_ps, self.r_pp]]
    }

    pub fn from_array(m: [[Complex64; 2]; 2]) -> Self {
        Self::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn det(&self) -> Complex64 {
        self.r_ss * self.r_pp - self.r_sp * self.r_ps
    }

    pub fn trace(&self) -> Complex64 {
        self.r_ss + self.r_pp
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.r_ss * o.r_ss + self.r_sp * o.r_ps,
            self.r_ss * o.r_sp + self.r_sp * o.r_pp,
            self.r_ps * o.r_ss + self.r_pp * o.r_ps,
            self.r_ps * o.r_sp + self.r_pp * o.r_pp,
        )
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self::new(self.r_ss * f, self.r_sp * f, self.r_ps * f, self.r_pp * f)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        // sigma_max^2 is the top eigenvalue of the Hermitian R^H R.
        let f2: f64 = self.entries().iter().map(|z| z.norm_sqr()).sum();
        let d = self.det().norm();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        (0.5 * (f2 + disc)).sqrt()
    }

    pub fn diagonal_part(&self) -> Self {
        Self::new(self.r_ss, ZERO, ZERO, self.r_pp)
    }

    pub fn off_diagonal_part(&self) -> Self {
        Self::new(ZERO, self.r_sp, self.r_ps, ZERO)
    }
}

/// One point of the imaginary-axis spectral domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// [rad/s], > 0.
    pub xi: f64,
    /// [rad/m], >= 0.
    pub k_par: f64,
    /// `sqrt(k_par^2 + xi^2/c^2)` [rad/m].
    pub kappa_perp_vac: f64,
}

impl SpectralPoint {
    pub fn new(xi: f64, k_par: f64) -> Result<Self> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(Error::invalid("xi", format!("must be finite and > 0, got {xi}")));
        }
        if !(k_par.is_finite() && k_par >= 0.0) {
            return Err(Error::invalid("k_par", format!("must be finite and >= 0, got {k_par}")));
        }
        Ok(Self {
            xi,
            k_par,
            kappa_perp_vac: k_par.hypot(xi / C),
        })
    }

    /// `c k_par / xi`.
    pub fn s(&self) -> f64 {
        C * self.k_par / self.xi
    }
}

/// What to do with a transmitted mode that neither decays nor grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    /// Report [`Error::BranchAmbiguity`].
    Strict,
    /// Nudge `k_par` by [`GRAZING_NUDGE`] once, then report.
    #[default]
    Retry,
    /// Keep the root with negative imaginary part (the positive-real-part rule
    /// written for real frequencies). Lossless media whose `q^2` is negative
    /// real over a whole band (the garnet model) need this.
    TieBreak,
}

/// Transmitted modes of one medium at one spectral point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumModes {
    /// Dimensionless decay constants `q_m`, `Re q_m >= 0`.
    pub q: [Complex64; 2],
    /// `k_perp = i xi q / c` [rad/m].
    pub kperp: [Complex64; 2],
    /// `(e_x, e_y, h_x, h_y)` per mode, scaled so the largest entry has modulus 1.
    pub fields: [[Complex64; 4]; 2],
    /// Set when a grazing root was resolved by [`BranchPolicy::TieBreak`].
    pub tie_broken: bool,
}

impl MediumModes {
    /// Ratios `(alpha, beta, gamma) = (e_y, h_x, h_y) / e_x` for mode `m`, or
    /// `None` when the mode has (numerically) no `e_x` component.
    pub fn ratios(&self, m: usize) -> Option<(Complex64, Complex64, Complex64)> {
        let f = self.fields[m];
        if f[0].norm() < 1e-12 {
            return None;
        }
        Some((f[1] / f[0], f[2] / f[0], f[3] / f[0]))
    }
}

struct Reduced {
    p: Complex64,
    eps_xx: Complex64,
    eps_xy: Complex64,
    eps_zz: Complex64,
    b: Complex64,
}


fn reduced(eps: &DielectricTensor, s: f64) -> Result<Reduced> {
    if eps.eps_zz.norm() < EPS_ZZ_FLOOR {
        return Err(Error::DegenerateEpsZZ {
            magnitude: eps.eps_zz.norm(),
        });
    }
    let s2 = s * s;
    Ok(Reduced {
        p: ONE + s2 / eps.eps_zz,
        eps_xx: eps.eps_xx,
        eps_xy: eps.eps_xy,
        eps_zz: eps.eps_zz,
        b: eps.eps_xx + s2,
    })
}

/// Dimensionless `L` at `omega = i xi`: the z components are eliminated, and
/// the common factor `omega / c` is divided out so the eigenvalues are
/// `-+ c k_perp / omega = +-q`.
pub fn l_matrix(eps: &DielectricTensor, xi: f64, k_par: f64) -> Result<[[Complex64; 4]; 4]> {
    let pt = SpectralPoint::new(xi, k_par)?;
    let r = reduced(eps, pt.s())?;
    Ok([
        [ZERO, ZERO, ZERO, -r.p],
        [ZERO, ZERO, ONE, ZERO],
        [-r.eps_xy, r.b, ZERO, ZERO],
        [-r.eps_xx, -r.eps_xy, ZERO, ZERO],
    ])
}

/// Roots `Q = q^2` of the reduced 2x2 problem
///
/// ```text
///     (Q - P eps_xx) e_x - P eps_xy e_y = 0
///     -eps_xy e_x + (eps_xx + s^2 - Q) e_y = 0
/// ```
///
/// together with the diagonal entries `(Q - P eps_xx, eps_xx + s^2 - Q)` of
/// each root. Those entries are built so that neither suffers cancellation:
/// with `h = s^2 (1 - eps_xx / eps_zz) / 2`, `C = P eps_xy^2` and
/// `D = sqrt(h^2 - C)`, one entry is `h + D` and the other follows from their
/// product `C`. The small root comes from Vieta.
struct Roots {
    q2: [Complex64; 2],
    diag: [(Complex64, Complex64); 2],
}

fn q_squared(r: &Reduced, s: f64) -> Roots {
    let a = r.p * r.eps_xx;
    let c = r.p * r.eps_xy * r.eps_xy;
    let h = 0.5 * s * s * (ONE - r.eps_xx / r.eps_zz);
    let mut d = (h * h - c).sqrt();
    // h and d aligned so h + d carries no cancellation
    if (h.conj() * d).re < 0.0 {
        d = -d;
    }
    let mean = 0.5 * (a + r.b);
    let (hi, lo) = (mean + d, mean - d);
    let (big, small_first) = if hi.norm() >= lo.norm() { (hi, false) } else { (lo, true) };
    let prod = a * r.b + c;
    let small = if big == ZERO { ZERO } else { prod / big };

    let long = h + d;
    let short = if long == ZERO { ZERO } else { c / long };
    // root mean + d: (Q - A, B - Q) = (h + d, h - d) = (long, short)
    let plus = (long, short);
    let minus = (short, long);
    if small_first {
        Roots {
            q2: [big, small],
            diag: [minus, plus],
        }
    } else {
        Roots {
            q2: [big, small],
            diag: [plus, minus],
        }
    }
}

fn decaying_root(q2: Complex64, k_par: f64, policy: BranchPolicy) -> Result<(Complex64, bool)> {
    let q = q2.sqrt();
    if q.re > GRAZING_TOLERANCE * q.norm() {
        return Ok((q, false));
    }
    match policy {
        BranchPolicy::TieBreak => Ok((Complex64::new(q.re.abs(), -q.im.abs()), true)),
        _ => Err(Error::BranchAmbiguity { k_par, re_q: q.re }),
    }
}

/// Decaying roots `k_perp_1, k_perp_2` [rad/m] at `omega = i xi`.
pub fn dispersion_roots(
    eps: &DielectricTensor,
    xi: f64,
    k_par: f64,
) -> Result<(Complex64, Complex64)> {
    let m = medium_modes(eps, xi, k_par, BranchPolicy::Strict)?;
    Ok((m.kperp[0], m.kperp[1]))
}

/// `(alpha, beta, gamma)` of the mode `kperp` read off the entries of `l`:
///
/// ```text
///     alpha = L23 L31 / (lambda^2 - L23 L32),  beta = lambda alpha / L23,
///     gamma = (L41 + L42 alpha) / lambda,      lambda = -c k_perp / omega.
/// ```
pub fn mode_ratios(
    l: &[[Complex64; 4]; 4],
    kperp: Complex64,
    xi: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let omega = Complex64::new(0.0, xi);
    let lambda = -C * kperp / omega;
    let (l23, l31, l32, l41, l42) = (l[1][2], l[2][0], l[2][1], l[3][0], l[3][1]);
    let lam2 = lambda * lambda;
    let denom = lam2 - l23 * l32;
    let scale = lam2.norm().max((l23 * l32).norm());
    if denom.norm() <= 1e-12 * scale {
        return Err(Error::RatioSingular {
            magnitude: denom.norm(),
        });
    }
    let alpha = l23 * l31 / denom;
    let beta = lambda * alpha / l23;
    let gamma = (l41 + l42 * alpha) / lambda;
    Ok((alpha, beta, gamma))
}

/// Null vector `(e_x, e_y)` of `[[a, b], [c, d]]`, taken from whichever row
/// gives the better conditioned candidate.
fn null_vector(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 2] {
    let v1 = [-b, a];
    let v2 = [d, -c];
    let n1 = v1[0].norm() + v1[1].norm();
    let n2 = v2[0].norm() + v2[1].norm();
    if n1 >= n2 {
        v1
    } else {
        v2
    }
}

fn normalized(mut v: [Complex64; 4]) -> [Complex64; 4] {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m > 0.0 {
        for z in v.iter_mut() {
            *z /= m;
        }
    }
    v
}

pub fn medium_modes(
    eps: &DielectricTensor,
    xi: f64,
    k_par: f64,
    policy: BranchPolicy,
) -> Result<MediumModes> {
    let pt = SpectralPoint::new(xi, k_par)?;
    let r = reduced(eps, pt.s())?;
    let roots = q_squared(&r, pt.s());
    let (qa, ta) = decaying_root(roots.q2[0], k_par, policy)?;
    let (qb, tb) = decaying_root(roots.q2[1], k_par, policy)?;
    let q = [qa, qb];

    let mut planar = [[ZERO; 2]; 2];
    for (m, &(a, d)) in roots.diag.iter().enumerate() {
        planar[m] = null_vector(a, -r.p * r.eps_xy, -r.eps_xy, d);
    }
    let [v1, v2] = planar;
    let cross = (v1[0] * v2[1] - v1[1] * v2[0]).norm();
    let size = (v1[0].norm() + v1[1].norm()) * (v2[0].norm() + v2[1].norm());
    if cross <= DEGENERACY_TOLERANCE * size || size == 0.0 {
        // Coincident roots with no coupling: any basis of the plane is a pair
        // of eigenvectors.
        planar = [[ONE, ZERO], [ZERO, ONE]];
    }

    let mut fields = [[ZERO; 4]; 2];
    for m in 0..2 {
        let [ex, ey] = planar[m];
        if q[m].norm() == 0.0 {
            return Err(Error::RatioSingular { magnitude: 0.0 });
        }
        let hx = -q[m] * ey;
        let hy = (r.eps_xx * ex + r.eps_xy * ey) / q[m];
        fields[m] = normalized([ex, ey, hx, hy]);
    }
    let i_xi_over_c = Complex64::new(0.0, xi / C);
    Ok(MediumModes {
        q,
        kperp: [i_xi_over_c * qa, i_xi_over_c * qb],
        fields,
        tie_broken: ta || tb,
    })
}

/// Reflection matrix together with the modes that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSolution {
    pub r: ReflectionMatrix,
    pub modes: MediumModes,
}

/// Boundary system for the amplitudes `(r_s, r_p, t_1, t_2)`; tangential
/// `e` and `h` are continuous at `z = 0`.
pub(crate) fn boundary_system(
    q_vac: f64,
    modes: &MediumModes,
) -> ([[Complex64; 4]; 4], [[Complex64; 4]; 2]) {
    let qi = Complex64::new(q_vac, 0.0);
    let [f1, f2] = modes.fields;
    let m = [
        [-ONE, ZERO, f1[1], f2[1]],
        [qi, ZERO, -f1[2], -f2[2]],
        [ZERO, qi, f1[0], f2[0]],
        [ZERO, -ONE, f1[3], f2[3]],
    ];
    let s_incident = [ONE, qi, ZERO, ZERO];
    let p_incident = [ZERO, ZERO, qi, ONE];
    (m, [s_incident, p_incident])
}

pub fn interface_solution(
    eps: &DielectricTensor,
    xi: f64,
    k_par: f64,
    policy: BranchPolicy,
) -> Result<InterfaceSolution> {
    let modes = match medium_modes(eps, xi, k_par, policy) {
        Err(Error::BranchAmbiguity { .. }) if policy == BranchPolicy::Retry => {
            let nudged = if k_par == 0.0 {
                GRAZING_NUDGE * xi / C
            } else {
                k_par * (1.0 + GRAZING_NUDGE)
            };
            medium_modes(eps, xi, nudged, BranchPolicy::Strict)?
        }
        other => other?,
    };
    let q_vac = (C * k_par / xi).hypot(1.0);
    let (m, rhs) = boundary_system(q_vac, &modes);
    let [xs, xp] = linalg::solve(m, rhs, BOUNDARY_PIVOT_FLOOR)
        .ok_or(Error::SingularBoundarySystem { xi, k_par })?;
    Ok(InterfaceSolution {
        r: ReflectionMatrix::new(xs[0], xp[0], xs[1], xp[1]),
        modes,
    })
}

/// Reflection matrix of the vacuum/medium interface at `omega = i xi`.
/// Grazing transmitted modes are nudged once and then reported.
pub fn reflection_matrix(eps: &DielectricTensor, xi: f64, k_par: f64) -> Result<ReflectionMatrix> {
    interface_solution(eps, xi, k_par, BranchPolicy::Retry).map(|s| s.r)
}

/// Reflection matrix of a half-space as seen from the gap, with the bias field
/// projected on that half-space's outward normal.
pub fn half_space_reflection(spec: &HalfSpaceSpec, xi: f64, k_par: f64) -> Result<ReflectionMatrix> {
    half_space_reflection_with(spec, xi, k_par, BranchPolicy::Retry).map(|(r, _)| r)
}

/// As [`half_space_reflection`] with an explicit branch policy; the flag
/// reports whether a tie-break was needed.
pub fn half_space_reflection_with(
    spec: &HalfSpaceSpec,
    xi: f64,
    k_par: f64,
    policy: BranchPolicy,
) -> Result<(ReflectionMatrix, bool)> {
    if let MaterialModel::PerfectMirror(r) = spec.model {
        return Ok((r, false));
    }
    let k = PhysicalConstants::default();
    let eps = spec
        .permittivity_imaginary(xi, &k)?
        .expect("non-mirror models always have a permittivity");
    let sol = interface_solution(&eps, xi, k_par, policy)?;
    Ok((sol.r, sol.modes.tie_broken))
}
