//! Command dispatch: scenario in, tables out.

use rayon::prelude::*;

use super::csv::{num, text, Table};
use super::scenario::*;
use crate::asymptotics::{nonretarded_force, perfect_mirror_value, retarded_static_force, LimitKind};
use crate::error::Result;
use crate::force::{casimir_force, force_sweep, FieldConfig, ForceResult, GapSetup, KernelDecomposition, SweepVariable};
use crate::materials::{GarnetParams, HalfSpaceSpec, InSbParams, StaticParams};
use crate::modes::{plasma_frequency_sweep, spectral_map};
use crate::quadrature::QuadratureConfig;
use crate::reflection::ReflectionMatrix;

/// Tables produced by one scenario. The first is the main output; others are
/// written next to it with their suffix appended to the file stem.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub tables: Vec<(Option<&'static str>, Table)>,
    /// False if any point failed or missed its tolerance.
    pub all_converged: bool,
}

const RESULT_COLUMNS: [&str; 5] = [
    "force_density[N/m^2]",
    "abs_error_estimate[N/m^2]",
    "evaluations",
    "converged",
    "error",
];

fn result_cells(r: &Result<ForceResult>) -> Vec<String> {
    match r {
        Ok(f) => vec![
            num(f.force_density),
            num(f.abs_error_estimate),
            f.evaluations.to_string(),
            f.converged.to_string(),
            String::new(),
        ],
        Err(e) => vec![String::new(), String::new(), String::new(), "false".into(), text(&e.to_string())],
    }
}

fn ok(r: &Result<ForceResult>) -> bool {
    matches!(r, Ok(f) if f.converged)
}

fn columns<'a>(lead: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    lead.iter().chain(tail).copied().collect()
}

fn config_name(c: FieldConfig) -> &'static str {
    match c {
        FieldConfig::Same => "same",
        FieldConfig::Opposite => "opposite",
    }
}

fn decomposition_name(d: KernelDecomposition) -> &'static str {
    match d {
        KernelDecomposition::Full => "full",
        KernelDecomposition::DiagonalOnly => "diagonal_only",
        KernelDecomposition::OffDiagonalOnly => "offdiagonal_only",
    }
}

fn insb_pair(p: InSbParams, b: f64, config: FieldConfig, gap_l: f64, allow: bool) -> GapSetup {
    GapSetup {
        allow_eps_inf_override: allow,
        ..GapSetup::new(HalfSpaceSpec::insb(p, b), HalfSpaceSpec::insb(p, config.sign() * b), gap_l)
    }
}

fn ratio(num_: &Result<ForceResult>, den: &Result<ForceResult>) -> String {
    match (num_, den) {
        (Ok(a), Ok(b)) => num(a.force_density / b.force_density),
        _ => String::new(),
    }
}

pub fn execute(s: &Scenario) -> Output {
    match s {
        Scenario::ForceSweep(d) => run_force_sweep(d),
        Scenario::BRatio(d) => run_b_ratio(d),
        Scenario::Nonretarded(d) => run_nonretarded(d),
        Scenario::Saturation(d) => run_saturation(d),
        Scenario::RetardedStatic(d) => run_retarded_static(d),
        Scenario::PlasmaSweep(d) => run_plasma_sweep(d),
        Scenario::GarnetSweep(d) => run_garnet_sweep(d),
        Scenario::ModesMap(d) => run_modes_map(d),
        Scenario::Benchmark(d) => run_benchmark(d),
    }
}

fn single(table: Table, all_converged: bool) -> Output {
    Output {
        tables: vec![(None, table)],
        all_converged,
    }
}

fn run_force_sweep(d: &ForceSweepDoc) -> Output {
    let variable = match d.sweep.variable {
        SweepVar::GapL => SweepVariable::GapL,
        SweepVar::B => SweepVariable::B {
            config: d.sweep.config.expect("validated"),
        },
        SweepVar::OmegaP => SweepVariable::OmegaP,
        SweepVar::GarnetSign => SweepVariable::GarnetSign,
    };
    let grid = d.sweep.grid.points();
    let template = d.setup.setup();
    let mut t = Table::new(&columns(&["decomposition", variable.column()], &RESULT_COLUMNS));
    let mut all = true;
    for &decomp in &d.decompositions {
        for p in force_sweep(&template, variable, &grid, decomp, &d.quadrature) {
            all &= ok(&p.result);
            let mut row = vec![decomposition_name(decomp).to_string(), num(p.value)];
            row.extend(result_cells(&p.result));
            t.push(row);
        }
    }
    single(t, all)
}

fn run_b_ratio(d: &BRatioDoc) -> Output {
    let gaps = d.gaps.points();
    let force = |b: f64, c: FieldConfig, l: f64| {
        casimir_force(&insb_pair(d.insb, b, c, l, d.allow_eps_inf_override), d.decomposition, &d.quadrature)
    };
    let zero: Vec<_> = gaps.par_iter().map(|&l| force(0.0, FieldConfig::Same, l)).collect();
    let mut jobs: Vec<(FieldConfig, f64, usize)> = Vec::new();
    for &c in &d.configs {
        for &b in &d.b_list {
            jobs.extend((0..gaps.len()).map(|i| (c, b, i)));
        }
    }
    let fb: Vec<_> = jobs.par_iter().map(|&(c, b, i)| force(b, c, gaps[i])).collect();
    let mut t = Table::new(&[
        "config",
        "B[T]",
        "gap_L[m]",
        "force_B0[N/m^2]",
        "force_B[N/m^2]",
        "ratio_B0_over_B[1]",
        "converged",
        "error",
    ]);
    let mut all = zero.iter().all(ok);
    for (&(c, b, i), r) in jobs.iter().zip(&fb) {
        all &= ok(r);
        let cell = |r: &Result<ForceResult>| r.as_ref().map(|f| num(f.force_density)).unwrap_or_default();
        let err = [&zero[i], r]
            .iter()
            .find_map(|r| r.as_ref().err().map(|e| text(&e.to_string())))
            .unwrap_or_default();
        t.push(vec![
            config_name(c).into(),
            num(b),
            num(gaps[i]),
            cell(&zero[i]),
            cell(r),
            ratio(&zero[i], r),
            (ok(&zero[i]) && ok(r)).to_string(),
            err,
        ]);
    }
    single(t, all)
}

fn run_nonretarded(d: &NonretardedDoc) -> Output {
    let gaps = d.gaps.points();
    let jobs: Vec<(f64, f64)> = d.b_list.iter().flat_map(|&b| gaps.iter().map(move |&l| (b, l))).collect();
    let rows: Vec<_> = jobs
        .par_iter()
        .map(|&(b, l)| {
            let setup = insb_pair(d.insb, b, d.config, l, d.allow_eps_inf_override);
            let full = casimir_force(&setup, KernelDecomposition::Full, &d.quadrature);
            let nret = nonretarded_force(&setup.left, &setup.right, l, &d.quadrature);
            (full, nret)
        })
        .collect();
    let mut t = Table::new(&[
        "B[T]",
        "gap_L[m]",
        "force_full[N/m^2]",
        "force_nonretarded[N/m^2]",
        "rel_difference[1]",
        "converged",
        "error",
    ]);
    let mut all = true;
    for (&(b, l), (full, nret)) in jobs.iter().zip(&rows) {
        let good = ok(full) && ok(nret);
        all &= good;
        let rel = match (full, nret) {
            (Ok(a), Ok(n)) => num(((a.force_density - n.force_density) / n.force_density).abs()),
            _ => String::new(),
        };
        let err = [full, nret]
            .iter()
            .find_map(|r| r.as_ref().err().map(|e| text(&e.to_string())))
            .unwrap_or_default();
        let cell = |r: &Result<ForceResult>| r.as_ref().map(|f| num(f.force_density)).unwrap_or_default();
        t.push(vec![num(b), num(l), cell(full), cell(nret), rel, good.to_string(), err]);
    }
    single(t, all)
}

fn run_saturation(d: &SaturationDoc) -> Output {
    let side = |b: f64| HalfSpaceSpec::insb(d.insb, b);
    let zero = nonretarded_force(&side(0.0), &side(0.0), d.gap_l, &d.quadrature);
    let grid = d.b_grid.points();
    let res: Vec<_> = grid
        .par_iter()
        .map(|&b| nonretarded_force(&side(b), &side(b), d.gap_l, &d.quadrature))
        .collect();
    let mut t = Table::new(&columns(&["B[T]"], &["force_nonretarded[N/m^2]", "f_tilde[1]", "converged", "error"]));
    let mut all = ok(&zero);
    for (&b, r) in grid.iter().zip(&res) {
        all &= ok(r);
        let c = result_cells(r);
        t.push(vec![num(b), c[0].clone(), ratio(&zero, r), (ok(&zero) && ok(r)).to_string(), c[4].clone()]);
    }
    single(t, all)
}

fn run_retarded_static(d: &RetardedStaticDoc) -> Output {
    let xy = d.eps_xy_grid.points();
    let mut jobs: Vec<(StaticFamily, FieldConfig, f64)> = Vec::new();
    for &f in &d.families {
        for &c in &d.configs {
            jobs.extend(xy.iter().map(|&e| (f, c, e)));
        }
    }
    let res: Vec<_> = jobs
        .par_iter()
        .map(|&(f, c, e)| {
            let left = StaticParams { eps_xx0: f.eps_xx0, eps_zz0: f.eps_zz0, eps_xy0: e };
            let right = StaticParams { eps_xy0: c.sign() * e, ..left };
            retarded_static_force(&left, &right, d.gap_l, &d.quadrature)
        })
        .collect();
    let mut t = Table::new(&columns(&["config", "eps_xx0[1]", "eps_zz0[1]", "eps_xy0[1]"], &RESULT_COLUMNS));
    let mut all = true;
    for (&(f, c, e), r) in jobs.iter().zip(&res) {
        all &= ok(r);
        let mut row = vec![config_name(c).into(), num(f.eps_xx0), num(f.eps_zz0), num(e)];
        row.extend(result_cells(r));
        t.push(row);
    }
    single(t, all)
}

fn run_plasma_sweep(d: &PlasmaSweepDoc) -> Output {
    let grid = d.omega_p_grid.points();
    let zero = plasma_frequency_sweep(&d.insb, &[0.0], d.gap_l, &grid, &d.quadrature);
    let rows = plasma_frequency_sweep(&d.insb, &d.b_list, d.gap_l, &grid, &d.quadrature);
    let mut t = Table::new(&[
        "omega_p[rad/s]",
        "B[T]",
        "force_nonretarded[N/m^2]",
        "f_tilde[1]",
        "converged",
        "error",
    ]);
    let mut all = zero.iter().all(|z| ok(&z.result));
    for (i, r) in rows.iter().enumerate() {
        let z = &zero[i / d.b_list.len()];
        all &= ok(&r.result);
        let c = result_cells(&r.result);
        t.push(vec![
            num(r.omega_p),
            num(r.b_field),
            c[0].clone(),
            ratio(&z.result, &r.result),
            (ok(&z.result) && ok(&r.result)).to_string(),
            c[4].clone(),
        ]);
    }
    single(t, all)
}

fn run_garnet_sweep(d: &GarnetSweepDoc) -> Output {
    let gaps = d.gaps.points();
    let mut jobs: Vec<(i32, FieldConfig, f64)> = Vec::new();
    for &m in &d.m2_list {
        for &c in &d.configs {
            jobs.extend(gaps.iter().map(|&l| (m, c, l)));
        }
    }
    let omega_0 = |m: i32| d.omega_0_mantissa * 10f64.powi(m);
    let res: Vec<_> = jobs
        .par_iter()
        .map(|&(m, c, l)| {
            let g = GarnetParams { omega_0: omega_0(m), omega_e: d.omega_e };
            let right = if c == FieldConfig::Same { g } else { g.flipped() };
            let setup = GapSetup::new(HalfSpaceSpec::garnet(g), HalfSpaceSpec::garnet(right), l);
            casimir_force(&setup, KernelDecomposition::Full, &d.quadrature)
        })
        .collect();
    let mut t = Table::new(&columns(
        &["config", "m2", "omega_0[rad/s]", "gap_L[m]", "sign"],
        &RESULT_COLUMNS,
    ));
    let mut all = true;
    for (&(m, c, l), r) in jobs.iter().zip(&res) {
        all &= ok(r);
        let sign = match r {
            Ok(f) if f.force_density > 0.0 => "repulsive",
            Ok(f) if f.force_density < 0.0 => "attractive",
            Ok(_) => "zero",
            Err(_) => "",
        };
        let mut row = vec![config_name(c).into(), m.to_string(), num(omega_0(m)), num(l), sign.into()];
        row.extend(result_cells(r));
        t.push(row);
    }
    single(t, all)
}

fn run_modes_map(d: &ModesMapDoc) -> Output {
    let mut main = Table::new(&["omega[rad/s]", "kx[rad/m]", "value[1/m]", "region"]);
    let mut disp = Table::new(&["omega[rad/s]", "kx[rad/m]"]);
    match spectral_map(&d.insb, d.b_field, d.gap_l, &d.omega_grid.points(), &d.kx_grid.points()) {
        Ok(map) => {
            for (i, &w) in map.omega_grid.iter().enumerate() {
                for (j, &k) in map.kx_grid.iter().enumerate() {
                    main.push(vec![
                        num(w),
                        num(k),
                        map.values[i][j].map(num).unwrap_or_default(),
                        map.region_at(i, j).as_str().into(),
                    ]);
                }
            }
            for p in &map.dispersion {
                disp.push(vec![num(p.omega), num(p.kx)]);
            }
            Output {
                tables: vec![(None, main), (Some("_dispersion"), disp)],
                all_converged: true,
            }
        }
        Err(_) => Output {
            tables: vec![(None, main), (Some("_dispersion"), disp)],
            all_converged: false,
        },
    }
}

fn run_benchmark(d: &BenchmarkDoc) -> Output {
    let pec = HalfSpaceSpec::perfect_mirror(ReflectionMatrix::pec());
    let cases = [
        ("pec", LimitKind::Pec, pec, pec),
        ("boyer", LimitKind::Boyer, pec, HalfSpaceSpec::perfect_mirror(ReflectionMatrix::pmc())),
        (
            "nonreciprocal_mirror",
            LimitKind::NonreciprocalMirror,
            HalfSpaceSpec::perfect_mirror(ReflectionMatrix::nonreciprocal_mirror()),
            HalfSpaceSpec::perfect_mirror(ReflectionMatrix::nonreciprocal_mirror()),
        ),
    ];
    let gaps = d.gaps.points();
    let jobs: Vec<(usize, f64)> = (0..cases.len()).flat_map(|c| gaps.iter().map(move |&l| (c, l))).collect();
    let res: Vec<_> = jobs
        .par_iter()
        .map(|&(c, l)| {
            let (_, kind, left, right) = cases[c];
            let q: &QuadratureConfig = &d.quadrature;
            (casimir_force(&GapSetup::new(left, right, l), KernelDecomposition::Full, q), perfect_mirror_value(kind, l))
        })
        .collect();
    let mut t = Table::new(&[
        "check",
        "gap_L[m]",
        "computed[N/m^2]",
        "exact[N/m^2]",
        "rel_error[1]",
        "converged",
        "error",
    ]);
    let mut all = true;
    for (&(c, l), (r, exact)) in jobs.iter().zip(&res) {
        all &= ok(r);
        let exact = *exact.as_ref().expect("ideal-mirror kinds have closed forms");
        let (computed, rel) = match r {
            Ok(f) => (num(f.force_density), num(((f.force_density - exact) / exact).abs())),
            Err(_) => (String::new(), String::new()),
        };
        let err = r.as_ref().err().map(|e| text(&e.to_string())).unwrap_or_default();
        t.push(vec![cases[c].0.into(), num(l), computed, num(exact), rel, ok(r).to_string(), err]);
    }
    single(t, all)
}
