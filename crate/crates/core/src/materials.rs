//! Gyrotropic permittivity models.
//!
//! Every model produces the three independent entries of the tensor
//!
//! ```text
//!     | eps_xx   eps_xy  0      |
//!     | -eps_xy  eps_xx  0      |
//!     | 0        0       eps_zz |
//! ```
//!
//! at a complex angular frequency. Casimir integrals only need the imaginary
//! axis `omega = i xi`; the mode analysis evaluates the same formulas at real
//! `omega`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::reflection::ReflectionMatrix;

/// Frequencies below this magnitude are rejected by models with a 1/omega pole.
pub const FREQUENCY_FLOOR: f64 = 1e-6;

/// Finite stand-in for `eps_zz -> infinity` in static tensors.
pub const EPS_ZZ_INFINITY_CAP: f64 = 1e8;

/// Relative distance to `+-omega_0` at which the garnet model reports a pole.
pub const GARNET_POLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyKind {
    Real,
    Imaginary,
    Complex,
    Static,
}

impl FrequencyKind {
    fn of(freq: Complex64) -> Self {
        if freq.im == 0.0 {
            FrequencyKind::Real
        } else if freq.re == 0.0 {
            FrequencyKind::Imaginary
        } else {
            FrequencyKind::Complex
        }
    }
}

/// `omega = i xi` as a complex frequency.
pub fn imaginary(xi: f64) -> Complex64 {
    Complex64::new(0.0, xi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DielectricTensor {
    pub eps_xx: Complex64,
    pub eps_zz: Complex64,
    pub eps_xy: Complex64,
    pub frequency_kind: FrequencyKind,
}

impl DielectricTensor {
    pub fn new(eps_xx: Complex64, eps_zz: Complex64, eps_xy: Complex64, kind: FrequencyKind) -> Self {
        Self {
            eps_xx,
            eps_zz,
            eps_xy,
            frequency_kind: kind,
        }
    }

    pub fn vacuum() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, one, Complex64::new(0.0, 0.0), FrequencyKind::Static)
    }

    /// Full 3x3 tensor, row major.
    pub fn to_matrix(&self) -> [[Complex64; 3]; 3] {
        let z = Complex64::new(0.0, 0.0);
        [
            [self.eps_xx, self.eps_xy, z],
            [-self.eps_xy, self.eps_xx, z],
            [z, z, self.eps_zz],
        ]
    }

    /// Same tensor with the off-diagonal entry negated (time reversal).
    pub fn reversed(&self) -> Self {
        Self {
            eps_xy: -self.eps_xy,
            ..*self
        }
    }
}

/// Parameters of the doped-InSb magneto-optical model. Missing JSON fields
/// take the [`Default`] values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InSbParams {
    /// Longitudinal optical phonon frequency [rad/s].
    pub omega_l: f64,
    /// Transverse optical phonon frequency [rad/s].
    pub omega_t: f64,
    /// Phonon damping [rad/s].
    pub gamma_phonon: f64,
    /// Free-carrier damping [rad/s].
    pub gamma_carrier: f64,
    /// Carrier density [1/m^3].
    pub carrier_density: f64,
    /// m*/m_e.
    pub effective_mass_ratio: f64,
    pub eps_inf: f64,
}

impl Default for InSbParams {
    /// Measured n-doped InSb constants with `eps_inf = 1`.
    fn default() -> Self {
        Self {
            omega_l: 3.62e13,
            omega_t: 3.39e13,
            gamma_phonon: 5.65e11,
            gamma_carrier: 3.39e12,
            carrier_density: 1.07e23,
            effective_mass_ratio: 0.022,
            eps_inf: 1.0,
        }
    }
}

impl InSbParams {
    /// High-frequency permittivity quoted with the measured constants. The force
    /// integrals do not converge with it; see [`crate::force::GapSetup`].
    pub const MEASURED_EPS_INF: f64 = 15.7;

    pub fn validate(&self) -> Result<()> {
        let freqs = [
            ("omega_l", self.omega_l),
            ("omega_t", self.omega_t),
            ("gamma_phonon", self.gamma_phonon),
            ("gamma_carrier", self.gamma_carrier),
        ];
        for (name, v) in freqs {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if self.omega_l < self.omega_t {
            return Err(Error::invalid("omega_l", "must not be below omega_t"));
        }
        if !(self.carrier_density.is_finite() && self.carrier_density > 0.0) {
            return Err(Error::invalid("carrier_density", "must be > 0"));
        }
        if !(self.effective_mass_ratio.is_finite() && self.effective_mass_ratio > 0.0) {
            return Err(Error::invalid("effective_mass_ratio", "must be > 0"));
        }
        if !(self.eps_inf.is_finite() && self.eps_inf >= 1.0) {
            return Err(Error::invalid("eps_inf", "must be >= 1"));
        }
        Ok(())
    }

    /// Copy with the carrier density rescaled so that the plasma frequency
    /// equals `omega_p` (effective mass unchanged).
    pub fn with_plasma_frequency(&self, omega_p: f64, k: &PhysicalConstants) -> Self {
        let current = plasma_frequency(self, k);
        let scale = (omega_p / current).powi(2);
        Self {
            carrier_density: self.carrier_density * scale,
            ..*self
        }
    }
}

/// `omega_p = sqrt(n q^2 / (eps_inf m* eps0))`.
pub fn plasma_frequency(p: &InSbParams, k: &PhysicalConstants) -> f64 {
    let m_eff = p.effective_mass_ratio * k.electron_mass;
    (p.carrier_density * k.electron_charge * k.electron_charge / (p.eps_inf * m_eff * k.eps0)).sqrt()
}

/// `omega_c = B q / m*`, odd in `B`.
pub fn cyclotron_frequency(b_field: f64, p: &InSbParams, k: &PhysicalConstants) -> f64 {
    b_field * k.electron_charge / (p.effective_mass_ratio * k.electron_mass)
}

pub fn eps_insb(
    p: &InSbParams,
    b_field: f64,
    freq: Complex64,
    k: &PhysicalConstants,
) -> Result<DielectricTensor> {
    if freq.norm() < FREQUENCY_FLOOR {
        return Err(Error::DegenerateFrequency {
            magnitude: freq.norm(),
        });
    }
    let wp2 = plasma_frequency(p, k).powi(2);
    let wc = cyclotron_frequency(b_field, p, k);
    let i = Complex64::i();
    let w = freq;
    let wg = w + i * p.gamma_carrier;
    let gyro = w * (wc * wc - wg * wg);
    let phonon = (p.omega_l * p.omega_l - p.omega_t * p.omega_t)
        / (-i * p.gamma_phonon * w + p.omega_t * p.omega_t - w * w);

    let eps_xx = p.eps_inf * (wp2 * wg / gyro + phonon + 1.0);
    let eps_zz = p.eps_inf * (-wp2 / (w * wg) + phonon + 1.0);
    let eps_xy = i * p.eps_inf * wc * wp2 / gyro;
    Ok(DielectricTensor::new(eps_xx, eps_zz, eps_xy, FrequencyKind::of(freq)))
}

/// Resonance model of an iron-garnet-like gyrotropic medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GarnetParams {
    /// Signed resonance frequency [rad/s].
    pub omega_0: f64,
    /// Signed resonance strength [rad/s].
    pub omega_e: f64,
}

impl GarnetParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_0.is_finite() && self.omega_e.is_finite()) {
            return Err(Error::invalid("omega_0", "must be finite"));
        }
        if self.omega_0 * self.omega_e <= 0.0 {
            return Err(Error::invalid("omega_0", "omega_0 * omega_e must be > 0"));
        }
        Ok(())
    }

    /// Both signs flipped: negates `eps_xy`, keeps the diagonal.
    pub fn flipped(&self) -> Self {
        Self {
            omega_0: -self.omega_0,
            omega_e: -self.omega_e,
        }
    }
}

pub fn eps_garnet(p: &GarnetParams, freq: Complex64) -> Result<DielectricTensor> {
    let w0 = p.omega_0;
    if freq.im == 0.0 && (freq.re.abs() - w0.abs()).abs() <= GARNET_POLE_TOLERANCE * w0.abs() {
        return Err(Error::ResonancePole { frequency: freq.re });
    }
    let denom = freq * freq - w0 * w0;
    let one = Complex64::new(1.0, 0.0);
    let eps_xx = one - w0 * p.omega_e / denom;
    let eps_xy = freq * p.omega_e / denom;
    Ok(DielectricTensor::new(eps_xx, one, eps_xy, FrequencyKind::of(freq)))
}

/// Frequency-independent tensor used for far-field estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticParams {
    pub eps_xx0: f64,
    pub eps_zz0: f64,
    pub eps_xy0: f64,
}

impl StaticParams {
    pub fn validate(&self) -> Result<()> {
        if !self.eps_xx0.is_finite() || !self.eps_zz0.is_finite() || !self.eps_xy0.is_finite() {
            return Err(Error::invalid("eps_xx0", "static entries must be finite"));
        }
        Ok(())
    }

    /// The `eps_zz -> infinity` family represented by [`EPS_ZZ_INFINITY_CAP`].
    pub fn with_infinite_eps_zz(eps_xx0: f64, eps_xy0: f64) -> Self {
        Self {
            eps_xx0,
            eps_zz0: EPS_ZZ_INFINITY_CAP,
            eps_xy0,
        }
    }
}

pub fn eps_static(p: &StaticParams) -> DielectricTensor {
    DielectricTensor::new(
        Complex64::new(p.eps_xx0, 0.0),
        Complex64::new(p.eps_zz0, 0.0),
        Complex64::new(p.eps_xy0, 0.0),
        FrequencyKind::Static,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    InSb(InSbParams),
    Garnet(GarnetParams),
    Static(StaticParams),
    PerfectMirror(ReflectionMatrix),
}

/// One half-space: a material and the bias field projected onto the outward
/// surface normal of that half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceSpec {
    pub model: MaterialModel,
    /// Signed projected field [T]; only the InSb model consumes it.
    pub projected_b: f64,
}

impl HalfSpaceSpec {
    pub fn insb(params: InSbParams, projected_b: f64) -> Self {
        Self {
            model: MaterialModel::InSb(params),
            projected_b,
        }
    }

    pub fn garnet(params: GarnetParams) -> Self {
        Self {
            model: MaterialModel::Garnet(params),
            projected_b: 0.0,
        }
    }

    pub fn static_tensor(params: StaticParams) -> Self {
        Self {
            model: MaterialModel::Static(params),
            projected_b: 0.0,
        }
    }

    pub fn perfect_mirror(r: ReflectionMatrix) -> Self {
        Self {
            model: MaterialModel::PerfectMirror(r),
            projected_b: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.projected_b.is_finite() {
            return Err(Error::invalid("projected_b", "must be finite"));
        }
        match &self.model {
            MaterialModel::InSb(p) => p.validate(),
            MaterialModel::Garnet(p) => p.validate(),
            MaterialModel::Static(p) => p.validate(),
            MaterialModel::PerfectMirror(r) => {
                if r.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::invalid("perfect", "mirror coefficients must be finite"))
                }
            }
        }
    }

    /// Permittivity at `omega = i xi`; `None` for ideal mirrors.
    pub fn permittivity_imaginary(
        &self,
        xi: f64,
        k: &PhysicalConstants,
    ) -> Result<Option<DielectricTensor>> {
        match &self.model {
            MaterialModel::InSb(p) => eps_insb(p, self.projected_b, imaginary(xi), k).map(Some),
            MaterialModel::Garnet(p) => eps_garnet(p, imaginary(xi)).map(Some),
            MaterialModel::Static(p) => Ok(Some(eps_static(p))),
            MaterialModel::PerfectMirror(_) => Ok(None),
        }
    }

    /// Frequencies [rad/s] at which the permittivity changes character; used to
    /// seed quadrature breakpoints.
    pub fn characteristic_frequencies(&self, k: &PhysicalConstants) -> Vec<f64> {
        let mut out = match &self.model {
            MaterialModel::InSb(p) => vec![
                p.omega_t,
                p.omega_l,
                p.gamma_phonon,
                p.gamma_carrier,
                plasma_frequency(p, k),
                cyclotron_frequency(self.projected_b, p, k).abs(),
            ],
            MaterialModel::Garnet(p) => vec![
                p.omega_0.abs(),
                p.omega_e.abs(),
                (p.omega_0 * p.omega_e).abs().sqrt(),
            ],
            MaterialModel::Static(_) | MaterialModel::PerfectMirror(_) => Vec::new(),
        };
        out.retain(|w| w.is_finite() && *w > 0.0);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn plasma_frequency_golden() {
        // sqrt(1.07e23 * q^2 / (0.022 m_e eps0)) evaluated once by hand from the constants.
        let wp = plasma_frequency(&InSbParams::default(), &CODATA);
        assert!(rel(wp, 1.244_148_096_413_256_4e14) < 1e-12, "{wp:e}");
    }

    #[test]
    fn plasma_frequency_scaling() {
        let p = InSbParams::default();
        let wp = plasma_frequency(&p, &CODATA);
        let p4n = InSbParams {
            carrier_density: 4.0 * p.carrier_density,
            ..p
        };
        assert!(rel(plasma_frequency(&p4n, &CODATA), 2.0 * wp) < 1e-14);
        let p4e = InSbParams { eps_inf: 4.0, ..p };
        assert!(rel(plasma_frequency(&p4e, &CODATA), 0.5 * wp) < 1e-14);
        let moved = p.with_plasma_frequency(3.0e13, &CODATA);
        assert!(rel(plasma_frequency(&moved, &CODATA), 3.0e13) < 1e-14);
    }

    #[test]
    fn cyclotron_frequency_linear_and_odd() {
        let p = InSbParams::default();
        assert_eq!(cyclotron_frequency(0.0, &p, &CODATA), 0.0);
        let w1 = cyclotron_frequency(1.0, &p, &CODATA);
        assert_eq!(cyclotron_frequency(-1.0, &p, &CODATA), -w1);
        assert!(rel(w1, 7.994_636_412_600_742e12) < 1e-12, "{w1:e}");
        assert!(rel(cyclotron_frequency(20.0, &p, &CODATA), 20.0 * w1) < 1e-15);
    }

    #[test]
    fn insb_without_field_has_no_gyrotropy() {
        let p = InSbParams::default();
        for xi in [1e10, 1e13, 1e15] {
            let e = eps_insb(&p, 0.0, imaginary(xi), &CODATA).unwrap();
            assert_eq!(e.eps_xy, Complex64::new(0.0, 0.0));
            assert_eq!(e.frequency_kind, FrequencyKind::Imaginary);
        }
    }

    #[test]
    fn insb_imaginary_axis_golden_20t() {
        // Straight-line evaluation of the real-valued imaginary-axis forms:
        // eps_xx = 1 + wp^2 (xi+g) / (xi (wc^2 + (xi+g)^2)) + (wL^2-wT^2)/(wT^2 + xi^2 + G xi)
        // eps_zz = 1 + wp^2 / (xi (xi+g)) + (wL^2-wT^2)/(wT^2 + xi^2 + G xi)
        // eps_xy = wc wp^2 / (xi (wc^2 + (xi+g)^2))
        let p = InSbParams::default();
        let xi = 1e13;
        let e = eps_insb(&p, 20.0, imaginary(xi), &CODATA).unwrap();
        assert!(rel(e.eps_xx.re, 1.933_551_838_932_274) < 1e-12, "{}", e.eps_xx);
        assert!(rel(e.eps_zz.re, 116.730_014_385_886_5) < 1e-12, "{}", e.eps_zz);
        assert!(rel(e.eps_xy.re, 9.613_474_298_099_279) < 1e-12, "{}", e.eps_xy);
        for z in [e.eps_xx, e.eps_zz, e.eps_xy] {
            assert!(z.im.abs() < 1e-12 * z.norm().max(1.0));
        }
    }

    #[test]
    fn insb_rejects_origin() {
        let err = eps_insb(&InSbParams::default(), 1.0, imaginary(0.0), &CODATA).unwrap_err();
        assert!(matches!(err, Error::DegenerateFrequency { .. }));
    }

    #[test]
    fn insb_validation() {
        assert!(InSbParams::default().validate().is_ok());
        let bad = InSbParams {
            omega_l: 1e13,
            ..InSbParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = InSbParams {
            eps_inf: 0.5,
            ..InSbParams::default()
        };
        assert!(bad.validate().is_err());
        let measured = InSbParams {
            eps_inf: InSbParams::MEASURED_EPS_INF,
            ..InSbParams::default()
        };
        assert!(measured.validate().is_ok());
    }

    #[test]
    fn garnet_imaginary_axis_forms() {
        let p = GarnetParams {
            omega_0: 2.0e11,
            omega_e: 5.0e13,
        };
        let xi = 3.0e11;
        let e = eps_garnet(&p, imaginary(xi)).unwrap();
        let d = xi * xi + p.omega_0 * p.omega_0;
        assert!(rel(e.eps_xx.re, 1.0 + p.omega_0 * p.omega_e / d) < 1e-14);
        assert!(e.eps_xx.re > 1.0);
        assert_eq!(e.eps_xx.im, 0.0);
        assert_eq!(e.eps_xy.re, 0.0);
        assert!(rel(e.eps_xy.im, -xi * p.omega_e / d) < 1e-14);
        assert_eq!(e.eps_zz, Complex64::new(1.0, 0.0));

        let f = eps_garnet(&p.flipped(), imaginary(xi)).unwrap();
        assert_eq!(f.eps_xx, e.eps_xx);
        assert_eq!(f.eps_xy, -e.eps_xy);
    }

    #[test]
    fn garnet_pole_and_sign_rule() {
        let p = GarnetParams {
            omega_0: 2.0e11,
            omega_e: 5.0e13,
        };
        assert!(matches!(
            eps_garnet(&p, Complex64::new(-2.0e11, 0.0)),
            Err(Error::ResonancePole { .. })
        ));
        assert!(eps_garnet(&p, Complex64::new(2.1e11, 0.0)).is_ok());
        assert!(GarnetParams {
            omega_0: 1.0,
            omega_e: -1.0
        }
        .validate()
        .is_err());
        assert!(p.flipped().validate().is_ok());
    }

    #[test]
    fn static_tensors() {
        let e = eps_static(&StaticParams {
            eps_xx0: 3.0,
            eps_zz0: 3.0,
            eps_xy0: 0.0,
        });
        let m = e.to_matrix();
        assert_eq!(m[0][0], m[1][1]);
        assert_eq!(m[0][0], m[2][2]);
        assert_eq!(m[0][1], Complex64::new(0.0, 0.0));
        assert_eq!(e.frequency_kind, FrequencyKind::Static);

        let inf = StaticParams::with_infinite_eps_zz(3.0, 1.5);
        assert_eq!(inf.eps_zz0, EPS_ZZ_INFINITY_CAP);
        let m = eps_static(&inf).to_matrix();
        assert_eq!(m[1][0], -m[0][1]);
    }
}
