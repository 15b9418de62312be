//! Real-frequency near-field mode structure of biased InSb.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{nonretarded_force, nonretarded_rpp};
use crate::constants::{CODATA, C};
use crate::error::{Error, Result};
use crate::force::ForceResult;
use crate::materials::{eps_insb, plasma_frequency, cyclotron_frequency, HalfSpaceSpec, InSbParams};
use crate::quadrature::QuadratureConfig;

/// Sign class of `(Re eps_xx, Re eps_zz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Both negative: bound surface polaritons.
    I,
    /// `eps_xx > 0`, `eps_zz < 0`: first hyperbolic band.
    II,
    /// `eps_xx < 0`, `eps_zz > 0`: second hyperbolic band.
    III,
    None,
}

impl RegionLabel {
    pub fn from_signs(re_xx: f64, re_zz: f64) -> Self {
        match (re_xx < 0.0, re_zz < 0.0) {
            (true, true) => RegionLabel::I,
            (false, true) => RegionLabel::II,
            (true, false) => RegionLabel::III,
            (false, false) => RegionLabel::None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::I => "I",
            RegionLabel::II => "II",
            RegionLabel::III => "III",
            RegionLabel::None => "none",
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("omega", format!("must be finite and > 0, got {omega}")))
    }
}

pub fn classify_region(p: &InSbParams, b_field: f64, omega: f64) -> Result<RegionLabel> {
    check_omega(omega)?;
    let e = eps_insb(p, b_field, Complex64::new(omega, 0.0), &CODATA)?;
    Ok(RegionLabel::from_signs(e.eps_xx.re, e.eps_zz.re))
}

/// Near-field `r_pp` at real `omega`.
pub fn real_frequency_rpp(p: &InSbParams, b_field: f64, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    let e = eps_insb(p, b_field, Complex64::new(omega, 0.0), &CODATA)?;
    Ok(nonretarded_rpp(e.eps_xx, e.eps_zz))
}

/// Coupled surface-polariton branch `k_x(omega)` of the gap in the near field.
///
/// The pole `1 - r^2 e^{-2 k L} = 0` has the complex solution
/// `k = ln(r) / L`; with damping `r` is complex, so the returned wavenumber is
/// its real part `ln|r| / L`, where the pole's modulus condition
/// `|r|^2 e^{-2 k L} = 1` holds exactly.
pub fn coupled_sphp_dispersion(p: &InSbParams, b_field: f64, gap_l: f64, omega: f64) -> Result<f64> {
    if !(gap_l.is_finite() && gap_l > 0.0) {
        return Err(Error::invalid("gap_L", "must be finite and > 0"));
    }
    let region = classify_region(p, b_field, omega)?;
    if region != RegionLabel::I {
        return Err(Error::NoRoot {
            reason: format!("omega = {omega:e} rad/s lies in region {}", region.as_str()),
        });
    }
    let r = real_frequency_rpp(p, b_field, omega)?;
    let mag = r.norm();
    if !(mag > 1.0) {
        return Err(Error::NoRoot {
            reason: format!("|r_pp| = {mag} <= 1"),
        });
    }
    Ok(mag.ln() / gap_l)
}

/// Near-field perpendicular wavenumbers inside the medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicRoots {
    /// `sqrt(eps_xx w^2/c^2 - kx^2)` [rad/m]
    pub kperp_1: Complex64,
    /// `sqrt(eps_xx w^2/c^2 - (eps_xx/eps_zz) kx^2)` [rad/m]
    pub kperp_2: Complex64,
    pub propagating_1: bool,
    pub propagating_2: bool,
}

pub fn hyperbolic_kperp(p: &InSbParams, b_field: f64, omega: f64, kx: f64) -> Result<HyperbolicRoots> {
    check_omega(omega)?;
    let e = eps_insb(p, b_field, Complex64::new(omega, 0.0), &CODATA)?;
    let k0 = omega / C;
    let arg1 = e.eps_xx * k0 * k0 - kx * kx;
    let arg2 = e.eps_xx * k0 * k0 - e.eps_xx / e.eps_zz * kx * kx;
    Ok(HyperbolicRoots {
        kperp_1: arg1.sqrt(),
        kperp_2: arg2.sqrt(),
        propagating_1: arg1.re > 0.0,
        propagating_2: arg2.re > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub omega: f64,
    pub kx: f64,
}

/// Near-field spectral density on an `(omega, k_x)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMap {
    pub omega_grid: Vec<f64>,
    pub kx_grid: Vec<f64>,
    /// `values[i][j]` at `(omega_grid[i], kx_grid[j])`; `None` where the
    /// evaluation failed.
    pub values: Vec<Vec<Option<f64>>>,
    /// Region of each `omega_grid` row (it does not depend on `k_x`).
    pub region: Vec<RegionLabel>,
    /// Coupled surface-polariton branch at the grid frequencies inside region I.
    pub dispersion: Vec<DispersionPoint>,
}

impl SpectralMap {
    pub fn region_at(&self, i: usize, _j: usize) -> RegionLabel {
        self.region[i]
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }
}

/// `k e^{-2kL} Im[r^2 e^{-2kL} / (1 - r^2 e^{-2kL})]`.
pub fn spectral_density(r: Complex64, kx: f64, gap_l: f64) -> f64 {
    let x = (-2.0 * kx * gap_l).exp();
    let rt = r * r * x;
    kx * x * (rt / (1.0 - rt)).im
}

fn strictly_increasing(v: &[f64], name: &'static str) -> Result<()> {
    if v.is_empty() || v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::invalid(name, "must be non-empty, finite and positive"));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(name, "must be strictly increasing"));
    }
    Ok(())
}

pub fn spectral_map(
    p: &InSbParams,
    b_field: f64,
    gap_l: f64,
    omega_grid: &[f64],
    kx_grid: &[f64],
) -> Result<SpectralMap> {
    p.validate()?;
    if !(gap_l.is_finite() && gap_l > 0.0) {
        return Err(Error::invalid("gap_L", "must be finite and > 0"));
    }
    strictly_increasing(omega_grid, "omega_grid")?;
    strictly_increasing(kx_grid, "kx_grid")?;
    let rows: Vec<(Vec<Option<f64>>, RegionLabel, Option<DispersionPoint>)> = omega_grid
        .par_iter()
        .map(|&w| {
            let region = classify_region(p, b_field, w).unwrap_or(RegionLabel::None);
            let vals = match real_frequency_rpp(p, b_field, w) {
                Ok(r) => kx_grid
                    .iter()
                    .map(|&k| Some(spectral_density(r, k, gap_l)).filter(|v| v.is_finite()))
                    .collect(),
                Err(_) => vec![None; kx_grid.len()],
            };
            let branch = coupled_sphp_dispersion(p, b_field, gap_l, w)
                .ok()
                .map(|kx| DispersionPoint { omega: w, kx });
            (vals, region, branch)
        })
        .collect();
    let mut map = SpectralMap {
        omega_grid: omega_grid.to_vec(),
        kx_grid: kx_grid.to_vec(),
        values: Vec::with_capacity(rows.len()),
        region: Vec::with_capacity(rows.len()),
        dispersion: Vec::new(),
    };
    for (vals, region, branch) in rows {
        map.values.push(vals);
        map.region.push(region);
        map.dispersion.extend(branch);
    }
    Ok(map)
}

/// Whether region I exists anywhere in `(omega_lo, omega_hi)`, probed on a
/// log grid of `samples` points.
pub fn region_one_exists(p: &InSbParams, b_field: f64, omega_lo: f64, omega_hi: f64, samples: usize) -> Result<bool> {
    check_omega(omega_lo)?;
    if !(omega_hi > omega_lo) || samples < 2 {
        return Err(Error::invalid("omega_hi", "band must be non-empty with >= 2 samples"));
    }
    let ratio = (omega_hi / omega_lo).ln() / (samples - 1) as f64;
    for i in 0..samples {
        let w = omega_lo * (ratio * i as f64).exp();
        if classify_region(p, b_field, w)? == RegionLabel::I {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Plasma-side band searched for region I: from just above `omega_L` to well
/// past both the plasma and the upper cyclotron-shifted edge.
pub fn plasma_band(p: &InSbParams, b_max: f64) -> (f64, f64) {
    let wp = plasma_frequency(p, &CODATA);
    let wc = cyclotron_frequency(b_max, p, &CODATA).abs();
    (p.omega_l * (1.0 + 1e-6), 4.0 * (wp + wc))
}

/// Smallest field above which region I no longer exists on the plasma side
/// (`omega > omega_L`), located by bisection to `tol` tesla. Below `omega_L`
/// the phonon band keeps a sliver of region I at every field.
pub fn region_one_vanishing_field(p: &InSbParams, b_lo: f64, b_hi: f64, tol: f64) -> Result<f64> {
    let (lo_w, hi_w) = plasma_band(p, b_hi);
    let exists = |b: f64| region_one_exists(p, b, lo_w, hi_w, 4000);
    if !exists(b_lo)? {
        return Err(Error::NoRoot {
            reason: format!("region I already absent at {b_lo} T"),
        });
    }
    if exists(b_hi)? {
        return Err(Error::NoRoot {
            reason: format!("region I still present at {b_hi} T"),
        });
    }
    let (mut lo, mut hi) = (b_lo, b_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if exists(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlasmaSweepRow {
    pub omega_p: f64,
    pub b_field: f64,
    pub result: Result<ForceResult>,
}

/// Nonretarded force of an identical InSb pair for every `(omega_p, B)`;
/// `omega_p` is realized by rescaling the carrier density.
pub fn plasma_frequency_sweep(
    template: &InSbParams,
    b_list: &[f64],
    gap_l: f64,
    omega_p_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Vec<PlasmaSweepRow> {
    let pairs: Vec<(f64, f64)> = omega_p_grid
        .iter()
        .flat_map(|&w| b_list.iter().map(move |&b| (w, b)))
        .collect();
    pairs
        .par_iter()
        .map(|&(omega_p, b)| {
            let result = if omega_p > 0.0 && omega_p.is_finite() {
                let params = template.with_plasma_frequency(omega_p, &CODATA);
                let side = HalfSpaceSpec::insb(params, b);
                nonretarded_force(&side, &side, gap_l, cfg)
            } else {
                Err(Error::invalid("omega_p", "must be > 0"))
            };
            PlasmaSweepRow {
                omega_p,
                b_field: b,
                result,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_table_is_exhaustive() {
        assert_eq!(RegionLabel::from_signs(-1.0, -1.0), RegionLabel::I);
        assert_eq!(RegionLabel::from_signs(1.0, -1.0), RegionLabel::II);
        assert_eq!(RegionLabel::from_signs(-1.0, 1.0), RegionLabel::III);
        assert_eq!(RegionLabel::from_signs(1.0, 1.0), RegionLabel::None);
    }

    #[test]
    fn high_frequency_is_unlabelled() {
        let p = InSbParams::default();
        assert_eq!(classify_region(&p, 5.0, 1e16).unwrap(), RegionLabel::None);
    }

    #[test]
    fn region_one_just_above_omega_t() {
        let p = InSbParams::default();
        assert_eq!(classify_region(&p, 0.0, 3.45e13).unwrap(), RegionLabel::I);
    }

    #[test]
    fn dispersion_outside_region_one_has_no_root() {
        let p = InSbParams::default();
        assert!(matches!(
            coupled_sphp_dispersion(&p, 0.0, 1e-8, 1e16),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn dispersion_matches_bisection_of_pole_modulus() {
        let p = InSbParams::default();
        let l = 1e-8;
        let w = 3.45e13;
        let k = coupled_sphp_dispersion(&p, 0.0, l, w).unwrap();
        let r2 = real_frequency_rpp(&p, 0.0, w).unwrap().norm_sqr();
        let g = |k: f64| r2 * (-2.0 * k * l).exp() - 1.0;
        let (mut lo, mut hi) = (0.0, 1e12);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((k - lo).abs() <= 1e-9 * k);
        assert!(g(k).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_open_dispersion() {
        let p = InSbParams::default();
        // find a region II or III frequency at 20 T
        let w = (0..2000)
            .map(|i| 1e13 * 1.002f64.powi(i))
            .find(|&w| matches!(classify_region(&p, 20.0, w).unwrap(), RegionLabel::II | RegionLabel::III))
            .unwrap();
        for kx in [1e7, 1e9, 1e11] {
            let h = hyperbolic_kperp(&p, 20.0, w, kx).unwrap();
            assert!(h.propagating_2, "{w:e} {kx:e}");
        }
        let h = hyperbolic_kperp(&InSbParams::default(), 0.0, 1e16, 1.0).unwrap();
        assert!(h.propagating_1 && h.propagating_2);
    }

    #[test]
    fn spectral_density_vanishes_without_reflection() {
        assert_eq!(spectral_density(Complex64::new(0.0, 0.0), 1e8, 1e-8), 0.0);
    }

    #[test]
    fn grids_validated() {
        let p = InSbParams::default();
        assert!(spectral_map(&p, 0.0, 1e-8, &[2.0, 1.0], &[1.0]).is_err());
        assert!(spectral_map(&p, 0.0, 1e-8, &[1.0, 2.0], &[]).is_err());
    }
}
