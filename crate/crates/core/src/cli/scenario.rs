//! Scenario documents: the JSON schema, dotted overrides and path-labelled
//! validation.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::force::{FieldConfig, GapSetup, KernelDecomposition};
use crate::materials::{GarnetParams, HalfSpaceSpec, InSbParams, StaticParams};
use crate::quadrature::QuadratureConfig;
use crate::reflection::ReflectionMatrix;

/// One violated invariant, located by a dotted path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    Values(Vec<f64>),
    Linspace { start: f64, stop: f64, points: usize },
    Logspace { start: f64, stop: f64, points: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Values(ref v) => v.clone(),
            Grid::Linspace { start, stop, points } => spaced(points, stop, |t| start + (stop - start) * t),
            Grid::Logspace { start, stop, points } => spaced(points, stop, |t| start * (stop / start).powf(t)),
        }
    }

    fn check(&self, path: &str, positive: bool, out: &mut Vec<Violation>) {
        match *self {
            Grid::Values(ref v) => {
                if v.is_empty() {
                    push(out, path, "grid is empty");
                }
                for (i, x) in v.iter().enumerate() {
                    if !x.is_finite() || (positive && *x <= 0.0) {
                        push(out, &format!("{path}.values.{i}"), "must be finite and > 0");
                    }
                }
            }
            Grid::Linspace { start, stop, points } | Grid::Logspace { start, stop, points } => {
                let kind = if matches!(self, Grid::Linspace { .. }) { "linspace" } else { "logspace" };
                if points == 0 {
                    push(out, &format!("{path}.{kind}.points"), "must be >= 1");
                }
                let need_pos = positive || kind == "logspace";
                for (name, x) in [("start", start), ("stop", stop)] {
                    if !x.is_finite() || (need_pos && x <= 0.0) {
                        push(out, &format!("{path}.{kind}.{name}"), "must be finite and > 0");
                    }
                }
            }
        }
    }
}

fn spaced(n: usize, stop: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![f(0.0)],
        _ => (0..n)
            .map(|i| if i + 1 == n { stop } else { f(i as f64 / (n - 1) as f64) })
            .collect(),
    }
}

/// `{"model": ..., parameters...}` for one half-space.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialDoc {
    Insb {
        #[serde(default)]
        params: InSbParams,
        /// Field projected on this half-space's outward normal [T].
        projected_b: f64,
    },
    Garnet {
        omega_0: f64,
        omega_e: f64,
    },
    Static {
        eps_xx0: f64,
        eps_zz0: f64,
        eps_xy0: f64,
    },
    /// Real, frequency-independent reflection matrix.
    Perfect {
        r_ss: f64,
        r_sp: f64,
        r_ps: f64,
        r_pp: f64,
    },
}

impl MaterialDoc {
    pub fn spec(&self) -> HalfSpaceSpec {
        match *self {
            MaterialDoc::Insb { params, projected_b } => HalfSpaceSpec::insb(params, projected_b),
            MaterialDoc::Garnet { omega_0, omega_e } => HalfSpaceSpec::garnet(GarnetParams { omega_0, omega_e }),
            MaterialDoc::Static { eps_xx0, eps_zz0, eps_xy0 } => {
                HalfSpaceSpec::static_tensor(StaticParams { eps_xx0, eps_zz0, eps_xy0 })
            }
            MaterialDoc::Perfect { r_ss, r_sp, r_ps, r_pp } => {
                HalfSpaceSpec::perfect_mirror(ReflectionMatrix::real(r_ss, r_sp, r_ps, r_pp))
            }
        }
    }

    fn check(&self, path: &str, force: bool, allow_override: bool, out: &mut Vec<Violation>) {
        match self {
            MaterialDoc::Insb { params, projected_b } => {
                if !projected_b.is_finite() {
                    push(out, &format!("{path}.projected_b"), "must be finite");
                }
                check_insb(params, &format!("{path}.params"), force, allow_override, out);
            }
            _ => {
                if let Err(e) = self.spec().validate() {
                    push_error(out, path, &e);
                }
            }
        }
    }
}

fn check_insb(p: &InSbParams, path: &str, force: bool, allow_override: bool, out: &mut Vec<Violation>) {
    if let Err(e) = p.validate() {
        push_error(out, path, &e);
    }
    if force && p.eps_inf != 1.0 && !allow_override {
        push(
            out,
            &format!("{path}.eps_inf"),
            "force integrals require eps_inf = 1: with any other value the response does not \
             return to vacuum at large imaginary frequency and the integral diverges; set \
             allow_eps_inf_override to run anyway",
        );
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SetupDoc {
    pub left: MaterialDoc,
    pub right: MaterialDoc,
    /// Gap width [m].
    #[serde(rename = "gap_L")]
    pub gap_l: f64,
    #[serde(default)]
    pub allow_eps_inf_override: bool,
}

impl SetupDoc {
    pub fn setup(&self) -> GapSetup {
        GapSetup {
            allow_eps_inf_override: self.allow_eps_inf_override,
            ..GapSetup::new(self.left.spec(), self.right.spec(), self.gap_l)
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    #[serde(rename = "gap_L")]
    GapL,
    B,
    OmegaP,
    GarnetSign,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub variable: SweepVar,
    /// Field configuration; required when sweeping `B`.
    #[serde(default)]
    pub config: Option<FieldConfig>,
    pub grid: Grid,
}

fn default_decompositions() -> Vec<KernelDecomposition> {
    vec![KernelDecomposition::Full]
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ForceSweepDoc {
    pub setup: SetupDoc,
    pub sweep: SweepDoc,
    #[serde(default = "default_decompositions")]
    pub decompositions: Vec<KernelDecomposition>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

/// Identical InSb plates with bias `B` on the left and `sign * B` on the right.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BRatioDoc {
    #[serde(default)]
    pub insb: InSbParams,
    #[serde(default)]
    pub allow_eps_inf_override: bool,
    /// [T]
    pub b_list: Vec<f64>,
    pub configs: Vec<FieldConfig>,
    /// [m]
    pub gaps: Grid,
    #[serde(default)]
    pub decomposition: KernelDecomposition,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

/// Full integral against the near-field closed form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NonretardedDoc {
    #[serde(default)]
    pub insb: InSbParams,
    #[serde(default)]
    pub allow_eps_inf_override: bool,
    pub b_list: Vec<f64>,
    pub config: FieldConfig,
    pub gaps: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

/// Near-field force ratio `f(0) / f(B)` over a field grid.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SaturationDoc {
    #[serde(default)]
    pub insb: InSbParams,
    #[serde(default)]
    pub allow_eps_inf_override: bool,
    #[serde(rename = "gap_L")]
    pub gap_l: f64,
    pub b_grid: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StaticFamily {
    pub eps_xx0: f64,
    pub eps_zz0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RetardedStaticDoc {
    pub families: Vec<StaticFamily>,
    /// Left-plate `eps_xy0`; the right plate gets `sign * eps_xy0`.
    pub eps_xy_grid: Grid,
    pub configs: Vec<FieldConfig>,
    #[serde(rename = "gap_L")]
    pub gap_l: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PlasmaSweepDoc {
    #[serde(default)]
    pub insb: InSbParams,
    #[serde(default)]
    pub allow_eps_inf_override: bool,
    pub b_list: Vec<f64>,
    #[serde(rename = "gap_L")]
    pub gap_l: f64,
    /// [rad/s]
    pub omega_p_grid: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

/// Garnet pair with `omega_0 = omega_0_mantissa * 10^m2`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GarnetSweepDoc {
    /// [rad/s]
    pub omega_e: f64,
    /// [rad/s]
    pub omega_0_mantissa: f64,
    pub m2_list: Vec<i32>,
    pub configs: Vec<FieldConfig>,
    pub gaps: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModesMapDoc {
    #[serde(default)]
    pub insb: InSbParams,
    #[serde(rename = "B")]
    pub b_field: f64,
    #[serde(rename = "gap_L")]
    pub gap_l: f64,
    /// [rad/s]
    pub omega_grid: Grid,
    /// [rad/m]
    pub kx_grid: Grid,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkDoc {
    pub gaps: Grid,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Scenario {
    ForceSweep(ForceSweepDoc),
    BRatio(BRatioDoc),
    Nonretarded(NonretardedDoc),
    RetardedStatic(RetardedStaticDoc),
    Saturation(SaturationDoc),
    PlasmaSweep(PlasmaSweepDoc),
    GarnetSweep(GarnetSweepDoc),
    ModesMap(ModesMapDoc),
    Benchmark(BenchmarkDoc),
}

impl Scenario {
    pub fn command(&self) -> &'static str {
        match self {
            Scenario::ForceSweep(_) => "force-sweep",
            Scenario::BRatio(_) => "b-ratio",
            Scenario::Nonretarded(_) => "nonretarded",
            Scenario::RetardedStatic(_) => "retarded-static",
            Scenario::Saturation(_) => "saturation",
            Scenario::PlasmaSweep(_) => "plasma-sweep",
            Scenario::GarnetSweep(_) => "garnet-sweep",
            Scenario::ModesMap(_) => "modes-map",
            Scenario::Benchmark(_) => "benchmark",
        }
    }

    pub fn output(&self) -> Option<&str> {
        match self {
            Scenario::ForceSweep(d) => d.output.as_deref(),
            Scenario::BRatio(d) => d.output.as_deref(),
            Scenario::Nonretarded(d) => d.output.as_deref(),
            Scenario::RetardedStatic(d) => d.output.as_deref(),
            Scenario::Saturation(d) => d.output.as_deref(),
            Scenario::PlasmaSweep(d) => d.output.as_deref(),
            Scenario::GarnetSweep(d) => d.output.as_deref(),
            Scenario::ModesMap(d) => d.output.as_deref(),
            Scenario::Benchmark(d) => d.output.as_deref(),
        }
    }

    /// The resolved document with every default filled in; the output path
    /// is left out since it does not affect results.
    pub fn resolved_json(&self) -> Value {
        serde_json::to_value(self).expect("scenario serializes")
    }

    /// Every violated invariant; empty when the scenario can run.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let v = &mut out;
        match self {
            Scenario::ForceSweep(d) => {
                let ov = d.setup.allow_eps_inf_override;
                d.setup.left.check("setup.left", true, ov, v);
                d.setup.right.check("setup.right", true, ov, v);
                check_gap(d.setup.gap_l, "setup.gap_L", v);
                let positive = !matches!(d.sweep.variable, SweepVar::B | SweepVar::GarnetSign);
                d.sweep.grid.check("sweep.grid", positive, v);
                match d.sweep.variable {
                    SweepVar::B if d.sweep.config.is_none() => {
                        push(v, "sweep.config", "required when sweeping B (same | opposite)")
                    }
                    SweepVar::B => {
                        if !matches!(d.setup.left, MaterialDoc::Insb { .. })
                            && !matches!(d.setup.right, MaterialDoc::Insb { .. })
                        {
                            push(v, "sweep.variable", "a field sweep needs at least one InSb plate");
                        }
                    }
                    SweepVar::GarnetSign => {
                        if !matches!(d.setup.right, MaterialDoc::Garnet { .. }) {
                            push(v, "sweep.variable", "garnet_sign needs a garnet right plate");
                        }
                        for (i, x) in d.sweep.grid.points().iter().enumerate() {
                            if x.abs() != 1.0 {
                                push(v, &format!("sweep.grid.{i}"), "garnet_sign values must be +1 or -1");
                            }
                        }
                    }
                    SweepVar::OmegaP => {
                        if !matches!(d.setup.left, MaterialDoc::Insb { .. })
                            && !matches!(d.setup.right, MaterialDoc::Insb { .. })
                        {
                            push(v, "sweep.variable", "an omega_p sweep needs at least one InSb plate");
                        }
                    }
                    SweepVar::GapL => {}
                }
                if d.decompositions.is_empty() {
                    push(v, "decompositions", "must list at least one decomposition");
                }
                check_quad(&d.quadrature, v);
            }
            Scenario::BRatio(d) => {
                check_insb(&d.insb, "insb", true, d.allow_eps_inf_override, v);
                check_fields(&d.b_list, "b_list", v);
                if d.configs.is_empty() {
                    push(v, "configs", "must list at least one configuration");
                }
                d.gaps.check("gaps", true, v);
                check_quad(&d.quadrature, v);
            }
            Scenario::Nonretarded(d) => {
                check_insb(&d.insb, "insb", true, d.allow_eps_inf_override, v);
                check_fields(&d.b_list, "b_list", v);
                d.gaps.check("gaps", true, v);
                check_quad(&d.quadrature, v);
            }
            Scenario::Saturation(d) => {
                check_insb(&d.insb, "insb", true, d.allow_eps_inf_override, v);
                check_gap(d.gap_l, "gap_L", v);
                d.b_grid.check("b_grid", false, v);
                check_quad(&d.quadrature, v);
            }
            Scenario::RetardedStatic(d) => {
                if d.families.is_empty() {
                    push(v, "families", "must list at least one family");
                }
                for (i, f) in d.families.iter().enumerate() {
                    if !(f.eps_xx0.is_finite() && f.eps_zz0.is_finite()) {
                        push(v, &format!("families.{i}"), "entries must be finite");
                    }
                }
                d.eps_xy_grid.check("eps_xy_grid", false, v);
                if d.configs.is_empty() {
                    push(v, "configs", "must list at least one configuration");
                }
                check_gap(d.gap_l, "gap_L", v);
                check_quad(&d.quadrature, v);
            }
            Scenario::PlasmaSweep(d) => {
                check_insb(&d.insb, "insb", true, d.allow_eps_inf_override, v);
                check_fields(&d.b_list, "b_list", v);
                check_gap(d.gap_l, "gap_L", v);
                d.omega_p_grid.check("omega_p_grid", true, v);
                check_quad(&d.quadrature, v);
            }
            Scenario::GarnetSweep(d) => {
                for (i, m2) in d.m2_list.iter().enumerate() {
                    let g = GarnetParams {
                        omega_0: d.omega_0_mantissa * 10f64.powi(*m2),
                        omega_e: d.omega_e,
                    };
                    if let Err(e) = g.validate() {
                        push(v, &format!("m2_list.{i}"), &e.to_string());
                    }
                }
                if d.m2_list.is_empty() {
                    push(v, "m2_list", "must list at least one exponent");
                }
                if d.configs.is_empty() {
                    push(v, "configs", "must list at least one configuration");
                }
                d.gaps.check("gaps", true, v);
                check_quad(&d.quadrature, v);
            }
            Scenario::ModesMap(d) => {
                check_insb(&d.insb, "insb", false, true, v);
                if !d.b_field.is_finite() {
                    push(v, "B", "must be finite");
                }
                check_gap(d.gap_l, "gap_L", v);
                d.omega_grid.check("omega_grid", true, v);
                d.kx_grid.check("kx_grid", true, v);
                for (name, g) in [("omega_grid", &d.omega_grid), ("kx_grid", &d.kx_grid)] {
                    if g.points().windows(2).any(|w| w[1] <= w[0]) {
                        push(v, name, "must be strictly increasing");
                    }
                }
            }
            Scenario::Benchmark(d) => {
                d.gaps.check("gaps", true, v);
                check_quad(&d.quadrature, v);
            }
        }
        out
    }
}

fn push(out: &mut Vec<Violation>, path: &str, message: &str) {
    out.push(Violation {
        path: path.to_string(),
        message: message.to_string(),
    });
}

fn push_error(out: &mut Vec<Violation>, prefix: &str, e: &Error) {
    let path = match e {
        Error::InvalidParameter { name, .. } => format!("{prefix}.{name}"),
        _ => prefix.to_string(),
    };
    push(out, &path, &e.to_string());
}

fn check_gap(l: f64, path: &str, out: &mut Vec<Violation>) {
    if !(l.is_finite() && l > 0.0) {
        push(out, path, &format!("gap width must be finite and > 0, got {l}"));
    }
}

fn check_fields(b: &[f64], path: &str, out: &mut Vec<Violation>) {
    if b.is_empty() {
        push(out, path, "must list at least one field");
    }
    for (i, x) in b.iter().enumerate() {
        if !x.is_finite() {
            push(out, &format!("{path}.{i}"), "must be finite");
        }
    }
}

fn check_quad(q: &QuadratureConfig, out: &mut Vec<Violation>) {
    if let Err(e) = q.validate() {
        push_error(out, "quadrature", &e);
    }
}

/// Sets `path` (dotted; numeric segments index arrays) to `raw`, parsed as
/// JSON when possible and taken as a string otherwise. Missing object keys
/// are created.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), Violation> {
    let bad = |path: &str, message: String| Violation {
        path: path.to_string(),
        message,
    };
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| bad(assignment, "override must look like key=value".into()))?;
    if path.is_empty() {
        return Err(bad(path, "empty override key".into()));
    }
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    for seg in path.split('.') {
        cur = match cur {
            Value::Object(map) => map.entry(seg.to_string()).or_insert(Value::Null),
            Value::Array(items) => {
                let len = items.len();
                seg.parse::<usize>()
                    .ok()
                    .and_then(|i| items.get_mut(i))
                    .ok_or_else(|| bad(path, format!("`{seg}` is not an index below {len}")))?
            }
            Value::Null => {
                *cur = Value::Object(Default::default());
                match cur {
                    Value::Object(map) => map.entry(seg.to_string()).or_insert(Value::Null),
                    _ => unreachable!(),
                }
            }
            _ => return Err(bad(path, format!("`{seg}` descends into a scalar"))),
        };
    }
    *cur = value;
    Ok(())
}

/// Typed view of a JSON document; the error carries the failing path.
pub fn parse(mut doc: Value) -> Result<Scenario, Violation> {
    let at = |path: &str, message: String| Violation {
        path: path.to_string(),
        message,
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| at("<root>", "scenario must be a JSON object".into()))?;
    let command = match obj.remove("command") {
        Some(Value::String(c)) => c,
        Some(_) => return Err(at("command", "must be a string".into())),
        None => return Err(at("command", "missing".into())),
    };
    fn body<T: serde::de::DeserializeOwned>(doc: Value, wrap: fn(T) -> Scenario) -> Result<Scenario, Violation> {
        serde_path_to_error::deserialize::<_, T>(doc).map(wrap).map_err(|e| {
            let path = e.path().to_string();
            Violation {
                path: if path == "." { "<root>".to_string() } else { path },
                message: e.into_inner().to_string(),
            }
        })
    }
    match command.as_str() {
        "force-sweep" => body(doc, Scenario::ForceSweep),
        "b-ratio" => body(doc, Scenario::BRatio),
        "nonretarded" => body(doc, Scenario::Nonretarded),
        "retarded-static" => body(doc, Scenario::RetardedStatic),
        "saturation" => body(doc, Scenario::Saturation),
        "plasma-sweep" => body(doc, Scenario::PlasmaSweep),
        "garnet-sweep" => body(doc, Scenario::GarnetSweep),
        "modes-map" => body(doc, Scenario::ModesMap),
        "benchmark" => body(doc, Scenario::Benchmark),
        other => Err(at(
            "command",
            format!(
                "unknown command `{other}` (expected force-sweep, b-ratio, nonretarded, retarded-static, \
                 saturation, plasma-sweep, garnet-sweep, modes-map or benchmark)"
            ),
        )),
    }
}

/// `key=value` lines for every leaf of `doc`, in document order.
pub fn flatten(doc: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, &join(k), out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, &join(&i.to_string()), out)),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(doc, "", &mut out);
    out
}
