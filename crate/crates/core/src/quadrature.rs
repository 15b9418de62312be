//! Deterministic adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Intervals are bisected largest-error-first; ties go to the earliest
//! interval, so a given integrand and config always take the same path.
//! A semi-infinite range is split at the last breakpoint (or `a + scale`) and
//! the tail is compactified with `x = T + scale * u / (1 - u)`, `u in [0, 1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Relative tolerance of inner integrals in nested quadrature.
    pub inner_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::with_rel_tol(1e-6)
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 0.0,
            max_subdivisions: 400,
            inner_rel_tol: rel_tol / 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::invalid("rel_tol", "must lie in (0, 1e-2]"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", "must be finite and >= 0"));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::invalid("max_subdivisions", "must be >= 8"));
        }
        if !(self.inner_rel_tol > 0.0 && self.inner_rel_tol <= 10.0 * self.rel_tol) {
            return Err(Error::invalid("inner_rel_tol", "must lie in (0, 10 * rel_tol]"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Integration range with hints about where the integrand has structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub a: f64,
    /// May be `f64::INFINITY`.
    pub b: f64,
    /// Decay length used to anchor the tail map (semi-infinite ranges only).
    pub scale: f64,
    /// Interior points where the first subdivision cuts the range.
    pub breakpoints: Vec<f64>,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            scale: 1.0,
            breakpoints: Vec::new(),
        }
    }

    pub fn semi_infinite(a: f64, scale: f64) -> Self {
        Self {
            a,
            b: f64::INFINITY,
            scale,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, pts: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(pts);
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::invalid("a", "lower limit must be finite"));
        }
        if !(self.b > self.a) {
            return Err(Error::invalid("b", "upper limit must exceed lower limit"));
        }
        if self.b.is_infinite() && !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::invalid("scale", "must be finite and > 0"));
        }
        Ok(())
    }

    fn initial_pieces(&self) -> Vec<Piece> {
        let mut cuts: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|p| p.is_finite() && *p > self.a && *p < self.b)
            .collect();
        if self.b.is_infinite() {
            cuts.push(self.a + self.scale);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(y.abs()));

        let mut pieces = Vec::with_capacity(cuts.len() + 2);
        let mut lo = self.a;
        for c in cuts {
            if c > lo {
                pieces.push(Piece::linear(lo, c));
                lo = c;
            }
        }
        if self.b.is_infinite() {
            pieces.push(Piece::tail(lo, self.scale));
        } else {
            pieces.push(Piece::linear(lo, self.b));
        }
        pieces
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Linear,
    Tail { start: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    err: f64,
    splittable: bool,
}

impl Piece {
    fn linear(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            map: Map::Linear,
            value: 0.0,
            err: 0.0,
            splittable: true,
        }
    }

    fn tail(start: f64, scale: f64) -> Self {
        Self {
            lo: 0.0,
            hi: 1.0,
            map: Map::Tail { start, scale },
            value: 0.0,
            err: 0.0,
            splittable: true,
        }
    }

    fn halves(&self) -> Option<(Self, Self)> {
        let mid = 0.5 * (self.lo + self.hi);
        if !(mid > self.lo && mid < self.hi) || (self.hi - self.lo) <= 1e3 * f64::EPSILON * mid.abs() {
            return None;
        }
        Some((Self { hi: mid, ..*self }, Self { lo: mid, ..*self }))
    }

    /// Physical abscissa and Jacobian at rule coordinate `t`.
    fn abscissa(&self, t: f64) -> (f64, f64) {
        match self.map {
            Map::Linear => (t, 1.0),
            Map::Tail { start, scale } => {
                let v = 1.0 - t;
                (start + scale * t / v, scale / (v * v))
            }
        }
    }
}

/// One integrand sample: value, a propagated error density, evaluation count.
#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    err: f64,
    evals: usize,
}

struct Kernel<'a> {
    eval: &'a (dyn Fn(f64) -> Result<Sample> + Sync),
    parallel: bool,
    stage: &'static str,
}

impl Kernel<'_> {
    fn sample(&self, x: f64, jac: f64) -> Result<Sample> {
        let s = (self.eval)(x)?;
        if !s.value.is_finite() || !s.err.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                abscissa: x,
                stage: self.stage,
            });
        }
        Ok(Sample {
            value: s.value * jac,
            err: s.err * jac,
            evals: s.evals,
        })
    }

    /// Applies the 15-point rule to `piece`; returns the evaluation count.
    fn apply(&self, piece: &mut Piece) -> Result<usize> {
        let center = 0.5 * (piece.lo + piece.hi);
        let half = 0.5 * (piece.hi - piece.lo);
        let mut ts = [0.0; 15];
        ts[0] = center;
        for j in 0..7 {
            ts[1 + 2 * j] = center - half * XGK[j];
            ts[2 + 2 * j] = center + half * XGK[j];
        }
        let at = |t: f64| {
            let (x, jac) = piece.abscissa(t);
            self.sample(x, jac)
        };
        let samples: Vec<Sample> = if self.parallel {
            ts.par_iter().map(|&t| at(t)).collect::<Result<_>>()?
        } else {
            ts.iter().map(|&t| at(t)).collect::<Result<_>>()?
        };

        let fc = samples[0].value;
        let mut kron = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        let mut abs = WGK[7] * fc.abs();
        let mut inner = WGK[7] * samples[0].err.abs();
        for j in 0..7 {
            let (f1, f2) = (samples[1 + 2 * j].value, samples[2 + 2 * j].value);
            kron += WGK[j] * (f1 + f2);
            abs += WGK[j] * (f1.abs() + f2.abs());
            inner += WGK[j] * (samples[1 + 2 * j].err.abs() + samples[2 + 2 * j].err.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * kron;
        let mut asc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            asc += WGK[j] * ((samples[1 + 2 * j].value - mean).abs() + (samples[2 + 2 * j].value - mean).abs());
        }
        let (kron, abs, asc, inner) = (kron * half, abs * half.abs(), asc * half.abs(), inner * half.abs());

        let mut err = (kron - gauss * half).abs();
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * abs);
        }
        piece.value = kron;
        piece.err = err + inner;
        Ok(samples.iter().map(|s| s.evals).sum())
    }
}

fn run(kernel: &Kernel<'_>, domain: &Domain, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    domain.validate()?;
    let mut pieces = domain.initial_pieces();
    let mut evaluations = 0;
    for p in pieces.iter_mut() {
        evaluations += kernel.apply(p)?;
    }
    let mut subdivisions = 0;
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        if err <= cfg.target(value) {
            return Ok(IntegralEstimate {
                value,
                abs_error: err,
                evaluations,
                converged: true,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .fold(None::<(usize, f64)>, |best, (i, p)| match best {
                Some((_, e)) if e >= p.err => best,
                _ => Some((i, p.err)),
            });
        let Some((i, _)) = worst.filter(|_| subdivisions < cfg.max_subdivisions) else {
            return Ok(IntegralEstimate {
                value,
                abs_error: err,
                evaluations,
                converged: false,
            });
        };
        match pieces[i].halves() {
            Some((mut left, mut right)) => {
                evaluations += kernel.apply(&mut left)?;
                evaluations += kernel.apply(&mut right)?;
                pieces[i] = left;
                pieces.insert(i + 1, right);
                subdivisions += 1;
            }
            None => pieces[i].splittable = false,
        }
    }
}

/// Adaptive integral of `f` over `domain`.
pub fn integrate_adaptive<F>(f: F, domain: &Domain, cfg: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    integrate_staged(f, domain, cfg, "1d")
}

fn integrate_staged<F>(
    f: F,
    domain: &Domain,
    cfg: &QuadratureConfig,
    stage: &'static str,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let eval = |x: f64| {
        f(x).map(|value| Sample {
            value,
            err: 0.0,
            evals: 1,
        })
    };
    run(
        &Kernel {
            eval: &eval,
            parallel: false,
            stage,
        },
        domain,
        cfg,
    )
}

/// `int dx int dy f(x, y)` with the inner range depending on `x`.
///
/// Inner integrals run at `cfg.inner_rel_tol` (absolute tolerance scaled by
/// the same factor); their error estimates are
/// carried through the outer rule and added to the outer rule error, so the
/// reported error covers both levels. Outer nodes are evaluated in parallel;
/// the reduction order is fixed, so results are bit-reproducible.
pub fn integrate_2d_nested<F, D>(
    f: F,
    outer: &Domain,
    inner: D,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
    D: Fn(f64) -> Domain + Sync,
{
    let inner_cfg = QuadratureConfig {
        rel_tol: cfg.inner_rel_tol,
        abs_tol: cfg.abs_tol * cfg.inner_rel_tol / cfg.rel_tol,
        ..*cfg
    };
    let eval = |x: f64| {
        let est = integrate_staged(|y| f(x, y), &inner(x), &inner_cfg, "inner")?;
        Ok(Sample {
            value: est.value,
            err: est.abs_error,
            evals: est.evaluations,
        })
    };
    run(
        &Kernel {
            eval: &eval,
            parallel: true,
            stage: "outer",
        },
        outer,
        cfg,
    )
}
