//! Scenario files: named surfaces and families plus a task list, run in
//! order into a JSON report with optional CSV, link and SVG artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{Map, Value, json};

use crate::braid::{BraidWord, slice_bennequin, syntactic_qp_bands};
use crate::curvature::{QuadratureOptions, branched_at_origin, gauss_bonnet_check, normal_stokes_check};
use crate::error::{FalloutError, Result};
use crate::ingest::{family_from_value, family_kind, parse_json, rational, real, surface_from_value};
use crate::invariants::{adjunction_degree, complex_singularity_invariants, genus_bound, main_inequality_report, tangent_fallout};
use crate::link::slice_sphere;
use crate::pipeline::{
    AnalysisOptions, BraidOptions, FalloutReport, Pieces, assemble_report, boundary_braid, boundary_self_linking, defect_csv,
    fallout_csv, orientation_reversal, reflected_kind,
};
use crate::surface::{DiskSpec, FamilyKind, FamilySpec, branching_data};

pub const TASK_KINDS: [&str; 6] = ["slice", "braid", "fallout-quadrature", "fallout-twistor", "invariants", "selftest"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Slice,
    Braid,
    FalloutQuadrature,
    FalloutTwistor,
    Invariants,
    Selftest,
}

impl TaskKind {
    pub fn parse(s: &str) -> Option<TaskKind> {
        Some(match s {
            "slice" => TaskKind::Slice,
            "braid" => TaskKind::Braid,
            "fallout-quadrature" => TaskKind::FalloutQuadrature,
            "fallout-twistor" => TaskKind::FalloutTwistor,
            "invariants" => TaskKind::Invariants,
            "selftest" => TaskKind::Selftest,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        TASK_KINDS[*self as usize]
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub kind: TaskKind,
    pub target: Option<String>,
    pub params: Map<String, Value>,
}

/// Run-wide knobs. Command-line values are the defaults; scenario values
/// override them.
#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub samples: Option<usize>,
    pub epsilon_sweep: Option<Vec<f64>>,
    pub t_sweep: Option<Vec<BigRational>>,
    pub tolerance: f64,
    pub report: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub diagnostics: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 17, samples: None, epsilon_sweep: None, t_sweep: None, tolerance: 0.1, report: None, svg: None, diagnostics: None }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub surfaces: BTreeMap<String, DiskSpec>,
    pub families: BTreeMap<String, (FamilySpec, Option<FamilyKind>)>,
    pub tasks: Vec<Task>,
    /// Scenario-level overrides, unset fields defer to the command line.
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub epsilon_sweep: Option<Vec<f64>>,
    pub t_sweep: Option<Vec<BigRational>>,
    pub tolerance: Option<f64>,
    pub report: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub diagnostics: Option<PathBuf>,
}

fn err(path: &str, msg: impl std::fmt::Display) -> FalloutError {
    FalloutError::Input(format!("field {path}: {msg}"))
}

fn reals(v: &Value, path: &str) -> Result<Vec<f64>> {
    let a = v.as_array().ok_or_else(|| err(path, "expected an array"))?;
    a.iter().enumerate().map(|(i, x)| real(x, &format!("{path}[{i}]"))).collect()
}

fn rationals(v: &Value, path: &str) -> Result<Vec<BigRational>> {
    let a = v.as_array().ok_or_else(|| err(path, "expected an array"))?;
    a.iter().enumerate().map(|(i, x)| rational(x, &format!("{path}[{i}]"))).collect()
}

fn count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn string(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| err(path, "expected a string"))
}

const TOP_KEYS: [&str; 10] = ["schema", "name", "seed", "samples", "epsilon_sweep", "t_sweep", "tolerance", "surfaces", "families", "tasks"];

/// Parses and validates a scenario document; output paths are taken
/// relative to `base`.
pub fn parse_scenario(text: &str, base: &Path) -> Result<Scenario> {
    let v = parse_json(text)?;
    let m = v.as_object().ok_or_else(|| err("$", "scenario must be an object"))?;
    for k in m.keys() {
        if !TOP_KEYS.contains(&k.as_str()) && k != "outputs" {
            return Err(err("$", format!("unknown key \"{k}\"")));
        }
    }
    if let Some(s) = m.get("schema") {
        if s.as_u64() != Some(1) {
            return Err(err("$.schema", "only schema 1 is supported"));
        }
    }
    let mut sc = Scenario {
        name: m.get("name").map(|x| string(x, "$.name")).transpose()?.unwrap_or_else(|| "scenario".into()),
        surfaces: BTreeMap::new(),
        families: BTreeMap::new(),
        tasks: Vec::new(),
        seed: m.get("seed").map(|x| x.as_u64().ok_or_else(|| err("$.seed", "expected a non-negative integer"))).transpose()?,
        samples: m.get("samples").map(|x| count(x, "$.samples")).transpose()?,
        epsilon_sweep: m.get("epsilon_sweep").map(|x| reals(x, "$.epsilon_sweep")).transpose()?,
        t_sweep: m.get("t_sweep").map(|x| rationals(x, "$.t_sweep")).transpose()?,
        tolerance: m.get("tolerance").map(|x| real(x, "$.tolerance")).transpose()?,
        report: None,
        svg: None,
        diagnostics: None,
    };
    if let Some(o) = m.get("outputs") {
        let om = o.as_object().ok_or_else(|| err("$.outputs", "expected an object"))?;
        for (k, x) in om {
            let p = base.join(string(x, &format!("$.outputs.{k}"))?);
            match k.as_str() {
                "report" => sc.report = Some(p),
                "svg" => sc.svg = Some(p),
                "diagnostics" => sc.diagnostics = Some(p),
                _ => return Err(err("$.outputs", format!("unknown key \"{k}\""))),
            }
        }
    }
    if let Some(s) = m.get("surfaces") {
        for (name, x) in s.as_object().ok_or_else(|| err("$.surfaces", "expected an object"))? {
            sc.surfaces.insert(name.clone(), surface_from_value(x, &format!("$.surfaces.{name}"))?);
        }
    }
    if let Some(f) = m.get("families") {
        for (name, x) in f.as_object().ok_or_else(|| err("$.families", "expected an object"))? {
            let path = format!("$.families.{name}");
            if sc.surfaces.contains_key(name) {
                return Err(err(&path, "name already used by a surface"));
            }
            sc.families.insert(name.clone(), (family_from_value(x, &path)?, family_kind(x, &path)?));
        }
    }
    if let Some(t) = m.get("tasks") {
        for (i, x) in t.as_array().ok_or_else(|| err("$.tasks", "expected an array"))?.iter().enumerate() {
            let path = format!("$.tasks[{i}]");
            let tm = x.as_object().ok_or_else(|| err(&path, "expected an object"))?;
            let kind_s = string(tm.get("kind").ok_or_else(|| err(&path, "missing \"kind\""))?, &format!("{path}.kind"))?;
            let kind = TaskKind::parse(&kind_s)
                .ok_or_else(|| err(&format!("{path}.kind"), format!("unknown task kind \"{kind_s}\" (expected one of {})", TASK_KINDS.join(", "))))?;
            let target = tm.get("target").map(|x| string(x, &format!("{path}.target"))).transpose()?;
            if let Some(tg) = &target {
                let known = sc.surfaces.contains_key(tg) || sc.families.contains_key(tg);
                if !known {
                    return Err(err(&format!("{path}.target"), format!("\"{tg}\" is not a defined surface or family")));
                }
                let family_only = matches!(kind, TaskKind::FalloutQuadrature | TaskKind::FalloutTwistor);
                if family_only && !sc.families.contains_key(tg) {
                    return Err(err(&format!("{path}.target"), format!("{kind_s} needs a family, \"{tg}\" is a surface")));
                }
            } else if kind != TaskKind::Invariants {
                return Err(err(&path, format!("{kind_s} needs a \"target\"")));
            }
            let mut params = tm.clone();
            params.remove("kind");
            params.remove("target");
            sc.tasks.push(Task { kind, target, params });
        }
    }
    Ok(sc)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| FalloutError::Input(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_scenario(&text, base)
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskRecord {
    pub index: usize,
    pub kind: TaskKind,
    pub target: Option<String>,
    pub status: String,
    pub error: Option<String>,
    pub result: Value,
    pub artifacts: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub scenario: String,
    pub seed: u64,
    pub tasks: Vec<TaskRecord>,
    pub families: BTreeMap<String, FalloutReport>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
}

/// Effective settings after scenario overrides.
fn effective(sc: &Scenario, flags: &Settings) -> Settings {
    Settings {
        seed: sc.seed.unwrap_or(flags.seed),
        samples: sc.samples.or(flags.samples),
        epsilon_sweep: sc.epsilon_sweep.clone().or_else(|| flags.epsilon_sweep.clone()),
        t_sweep: sc.t_sweep.clone().or_else(|| flags.t_sweep.clone()),
        tolerance: sc.tolerance.unwrap_or(flags.tolerance),
        report: sc.report.clone().or_else(|| flags.report.clone()),
        svg: sc.svg.clone().or_else(|| flags.svg.clone()),
        diagnostics: sc.diagnostics.clone().or_else(|| flags.diagnostics.clone()),
    }
}

struct Runner<'a> {
    sc: &'a Scenario,
    set: Settings,
    pieces: BTreeMap<String, Pieces>,
    options: BTreeMap<String, AnalysisOptions>,
    extra_reports: BTreeMap<String, FalloutReport>,
    artifacts: Vec<PathBuf>,
    svg_used: bool,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| FalloutError::Input(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| FalloutError::Input(format!("cannot write {}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

impl<'a> Runner<'a> {
    fn surface(&self, name: &str) -> Result<DiskSpec> {
        match self.sc.surfaces.get(name) {
            Some(s) => Ok(s.clone()),
            None => self.sc.families[name].0.limit(),
        }
    }

    fn family(&self, name: &str, path: &str) -> Result<&'a (FamilySpec, Option<FamilyKind>)> {
        self.sc.families.get(name).ok_or_else(|| err(path, format!("\"{name}\" is not a family")))
    }

    fn analysis_options(&self, p: &Map<String, Value>, path: &str) -> Result<AnalysisOptions> {
        let mut o = AnalysisOptions { seed: self.set.seed, tolerance: self.set.tolerance, ..AnalysisOptions::default() };
        o.braid.samples = self.set.samples;
        if let Some(e) = &self.set.epsilon_sweep {
            o.epsilon_sweep = e.clone();
        }
        if let Some(t) = &self.set.t_sweep {
            o.t_sweep = t.clone();
        }
        if let Some(x) = p.get("epsilon_sweep") {
            o.epsilon_sweep = reals(x, &format!("{path}.epsilon_sweep"))?;
        }
        if let Some(x) = p.get("t_sweep") {
            o.t_sweep = rationals(x, &format!("{path}.t_sweep"))?;
        }
        if let Some(x) = p.get("deltas") {
            o.deltas = reals(x, &format!("{path}.deltas"))?;
        }
        if let Some(x) = p.get("samples") {
            o.braid.samples = Some(count(x, &format!("{path}.samples"))?);
        }
        if let Some(x) = p.get("braid_epsilon") {
            o.braid.epsilon = Some(real(x, &format!("{path}.braid_epsilon"))?);
        }
        if let Some(x) = p.get("tolerance") {
            o.tolerance = real(x, &format!("{path}.tolerance"))?;
        }
        o.quad = quad_options(p, path)?;
        Ok(o)
    }

    fn diag_path(&self, file: String) -> Option<PathBuf> {
        self.set.diagnostics.as_ref().map(|d| d.join(file))
    }

    fn emit(&mut self, path: PathBuf, contents: &str, out: &mut Vec<String>) -> Result<()> {
        write_file(&path, contents)?;
        out.push(path.display().to_string());
        self.artifacts.push(path);
        Ok(())
    }

    fn run_task(&mut self, i: usize, task: &Task, artifacts: &mut Vec<String>) -> Result<Value> {
        let path = format!("$.tasks[{i}]");
        let p = &task.params;
        let target = task.target.clone().unwrap_or_default();
        match task.kind {
            TaskKind::Slice => {
                allow(p, &path, &["epsilon", "samples"])?;
                let spec = self.surface(&target)?;
                let m = match p.get("samples") {
                    Some(x) => count(x, &format!("{path}.samples"))?,
                    None => self.set.samples.unwrap_or_else(|| crate::pipeline::default_samples(&spec)),
                };
                let eps = match p.get("epsilon") {
                    Some(x) => real(x, &format!("{path}.epsilon"))?,
                    None => boundary_braid(&spec, &BraidOptions { samples: Some(m), ..BraidOptions::default() })?.epsilon,
                };
                let link = slice_sphere::<f64>(&spec, eps, m)?;
                let summary = json!({
                    "epsilon": eps,
                    "samples": m,
                    "strands": link.strands,
                    "components": link.components.len(),
                    "min_step": link.components.iter().map(|c| c.min_step).fold(f64::INFINITY, f64::min),
                });
                if let Some(out) = self.diag_path(format!("{target}_link.json")) {
                    let comps: Vec<Value> = link
                        .components
                        .iter()
                        .zip(&link.framing)
                        .map(|(c, f)| json!({"points": c.points, "theta": c.theta, "framing": f}))
                        .collect();
                    let doc = json!({"epsilon": eps, "strands": link.strands, "components": comps});
                    self.emit(out, &serde_json::to_string(&doc).unwrap(), artifacts)?;
                }
                Ok(summary)
            }
            TaskKind::Braid => {
                allow(p, &path, &["epsilon", "samples", "precision", "self_linking"])?;
                let spec = self.surface(&target)?;
                let mut bo = BraidOptions { samples: self.set.samples, ..BraidOptions::default() };
                if let Some(x) = p.get("samples") {
                    bo.samples = Some(count(x, &format!("{path}.samples"))?);
                }
                if let Some(x) = p.get("epsilon") {
                    bo.epsilon = Some(real(x, &format!("{path}.epsilon"))?);
                }
                match p.get("precision").map(|x| string(x, &format!("{path}.precision"))).transpose()?.as_deref() {
                    None | Some("auto") => {}
                    Some("extended") => bo.force_extended = true,
                    Some(o) => return Err(err(&format!("{path}.precision"), format!("expected \"auto\" or \"extended\", got \"{o}\""))),
                }
                let b = boundary_braid(&spec, &bo)?;
                let n = branching_data::<f64>(&spec)?.n;
                let mut v = to_value(&b);
                v["word"] = Value::String(b.word.to_string());
                v["slice_bennequin"] = json!(slice_bennequin(&b.word));
                v["genus_bound"] = json!(genus_bound(b.exponent_sum.unsigned_abs(), &[n]));
                v["quasipositive_bands"] = json!(syntactic_qp_bands(&b.word).map(|bs| bs.len()));
                if p.get("self_linking").and_then(Value::as_bool).unwrap_or(false) {
                    let sl = boundary_self_linking(&spec, b.epsilon, b.samples, self.set.seed)?;
                    v["self_linking"] = to_value(&sl);
                }
                let svg_path = match &self.set.svg {
                    Some(s) if !self.svg_used => {
                        self.svg_used = true;
                        Some(s.clone())
                    }
                    Some(s) => {
                        let stem = s.file_stem().and_then(|x| x.to_str()).unwrap_or("braid");
                        Some(s.with_file_name(format!("{stem}_{target}.svg")))
                    }
                    None => self.diag_path(format!("{target}_braid.svg")),
                };
                if let Some(out) = svg_path {
                    self.emit(out, &render_braid_svg(&b.word), artifacts)?;
                }
                Ok(v)
            }
            TaskKind::FalloutQuadrature => {
                allow(p, &path, &["epsilon_sweep", "t_sweep", "order", "angular_panels", "radial_panels"])?;
                let (fam, _) = self.family(&target, &path)?;
                let o = self.analysis_options(p, &path)?;
                let pc = self.pieces.entry(target.clone()).or_default();
                pc.quadrature = None;
                pc.run_quadrature(fam, &o);
                let q = pc.quadrature.clone().unwrap().map_err(FalloutError::Convergence)?;
                self.options.entry(target.clone()).or_insert(o);
                if let Some(out) = self.diag_path(format!("{target}_fallout.csv")) {
                    self.emit(out, &fallout_csv(&q), artifacts)?;
                }
                if q.unconverged {
                    return Err(FalloutError::Convergence(format!("quadrature unconverged, residual {:.3e}", q.residual)));
                }
                Ok(to_value(&q))
            }
            TaskKind::FalloutTwistor => {
                allow(p, &path, &["t_sweep", "deltas", "order", "angular_panels", "radial_panels"])?;
                let (fam, _) = self.family(&target, &path)?;
                let o = self.analysis_options(p, &path)?;
                let pc = self.pieces.entry(target.clone()).or_default();
                pc.twistor = None;
                pc.run_twistor(fam, &o);
                let t = pc.twistor.clone().unwrap().map_err(FalloutError::Convergence)?;
                self.options.entry(target.clone()).or_insert(o);
                if let Some(out) = self.diag_path(format!("{target}_defects.csv")) {
                    self.emit(out, &defect_csv(&t), artifacts)?;
                }
                if t.class.is_none() {
                    return Err(FalloutError::Resolution(format!("defects ({}, {}) are not integral", t.plus.defect, t.minus.defect)));
                }
                Ok(to_value(&t))
            }
            TaskKind::Invariants => self.invariants(&path, task, artifacts),
            TaskKind::Selftest => {
                allow(p, &path, &["epsilon", "grid", "section", "max_residual", "order", "angular_panels", "radial_panels"])?;
                let spec = self.surface(&target)?;
                let eps = p.get("epsilon").map(|x| real(x, &format!("{path}.epsilon"))).transpose()?.unwrap_or(0.3);
                let m = p.get("grid").map(|x| count(x, &format!("{path}.grid"))).transpose()?.unwrap_or(512);
                let tol = p.get("max_residual").map(|x| real(x, &format!("{path}.max_residual"))).transpose()?.unwrap_or(1e-3);
                let x = match p.get("section") {
                    Some(s) => {
                        let v = reals(s, &format!("{path}.section"))?;
                        if v.len() != 4 {
                            return Err(err(&format!("{path}.section"), "expected 4 components"));
                        }
                        [v[0], v[1], v[2], v[3]]
                    }
                    None => branching_data::<f64>(&spec)?.frame.e[2],
                };
                let quad = quad_options(p, &path)?;
                let gb = gauss_bonnet_check(&spec, eps, m, &quad)?;
                let d = spec.numeric::<f64>();
                let mut v = json!({"epsilon": eps, "grid": m, "gauss_bonnet": to_value(&gb)});
                let mut worst = gb.residual.abs();
                if branched_at_origin(&d, crate::curvature::region_extent(&d, eps)?) {
                    v["normal_stokes"] = Value::String("skipped: region is branched at the origin".into());
                } else {
                    let ns = normal_stokes_check(&spec, eps, &x, m, &quad)?;
                    worst = worst.max(ns.residual.abs());
                    v["normal_stokes"] = to_value(&ns);
                }
                if !(worst < tol) {
                    return Err(FalloutError::Convergence(format!("self-test residual {worst:.3e} above {tol:.1e}")));
                }
                Ok(v)
            }
        }
    }

    fn invariants(&mut self, path: &str, task: &Task, _artifacts: &mut Vec<String>) -> Result<Value> {
        let p = &task.params;
        allow(
            p,
            path,
            &[
                "family_kind",
                "pipelines",
                "orientation_check",
                "epsilon_sweep",
                "t_sweep",
                "deltas",
                "samples",
                "braid_epsilon",
                "tolerance",
                "order",
                "angular_panels",
                "radial_panels",
                "complex_singularity",
                "adjunction",
                "inequality",
                "genus_bound",
                "tangent_fallout",
            ],
        )?;
        let mut out = Map::new();
        if let Some(x) = p.get("complex_singularity") {
            let v = reals(x, &format!("{path}.complex_singularity"))?;
            if v.len() != 2 {
                return Err(err(&format!("{path}.complex_singularity"), "expected [p, q]"));
            }
            let r = complex_singularity_invariants(v[0] as u32, v[1] as u32)?;
            let mut val = to_value(&r);
            val["braid"] = Value::String(r.braid.to_string());
            out.insert("complex_singularity".into(), val);
        }
        if let Some(x) = p.get("adjunction") {
            let q = format!("{path}.adjunction");
            let g = |k: &str| -> Result<f64> { real(x.get(k).ok_or_else(|| err(&q, format!("missing \"{k}\"")))?, &format!("{q}.{k}")) };
            let r = adjunction_degree(g("degree")? as u32, g("cusps")? as u32, g("orientation")? as i8)?;
            out.insert("adjunction".into(), to_value(&r));
        }
        if let Some(x) = p.get("inequality") {
            let q = format!("{path}.inequality");
            let g = |k: &str| -> Result<f64> { real(x.get(k).ok_or_else(|| err(&q, format!("missing \"{k}\"")))?, &format!("{q}.{k}")) };
            let kind = match x.get("family_kind") {
                Some(k) => serde_json::from_value(k.clone()).map_err(|_| err(&format!("{q}.family_kind"), format!("unknown family kind {k}")))?,
                None => FamilyKind::Generic,
            };
            let r = main_inequality_report(g("kT")?, g("kN")?, kind, 1e-9)?;
            out.insert("inequality".into(), to_value(&r));
        }
        if let Some(x) = p.get("genus_bound") {
            let q = format!("{path}.genus_bound");
            let w = real(x.get("writhe").ok_or_else(|| err(&q, "missing \"writhe\""))?, &format!("{q}.writhe"))?;
            let orders = reals(x.get("orders").ok_or_else(|| err(&q, "missing \"orders\""))?, &format!("{q}.orders"))?;
            let orders: Vec<u32> = orders.iter().map(|&o| o as u32).collect();
            out.insert("genus_bound".into(), json!(genus_bound(w.abs() as u64, &orders)));
        }
        if let Some(x) = p.get("tangent_fallout") {
            let q = format!("{path}.tangent_fallout");
            let orders = reals(x.get("orders").ok_or_else(|| err(&q, "missing \"orders\""))?, &format!("{q}.orders"))?;
            let g = x.get("genus").map(|v| real(v, &format!("{q}.genus"))).transpose()?.unwrap_or(0.0);
            let orders: Vec<u32> = orders.iter().map(|&o| o as u32).collect();
            out.insert("tangent_fallout".into(), json!(tangent_fallout(&orders, g as u32)?));
        }
        let Some(target) = task.target.clone() else {
            return Ok(Value::Object(out));
        };
        let (fam, kind) = self.family(&target, path)?;
        let mut kind = *kind;
        if let Some(k) = p.get("family_kind") {
            kind = Some(serde_json::from_value(k.clone()).map_err(|_| err(&format!("{path}.family_kind"), format!("unknown family kind {k}")))?);
        }
        let o = self.analysis_options(p, path)?;
        let pipes: Vec<String> = match p.get("pipelines") {
            Some(x) => {
                let a = x.as_array().ok_or_else(|| err(&format!("{path}.pipelines"), "expected an array"))?;
                a.iter().enumerate().map(|(i, s)| string(s, &format!("{path}.pipelines[{i}]"))).collect::<Result<_>>()?
            }
            None => vec!["formula".into(), "quadrature".into(), "twistor".into()],
        };
        for s in &pipes {
            if !["formula", "quadrature", "twistor"].contains(&s.as_str()) {
                return Err(err(&format!("{path}.pipelines"), format!("unknown pipeline \"{s}\"")));
            }
        }
        let run = |pc: &mut Pieces, f: &FamilySpec| -> Result<()> {
            if pipes.iter().any(|s| s == "formula") {
                pc.run_formula(f, &o)?;
            }
            if pipes.iter().any(|s| s == "quadrature") {
                pc.run_quadrature(f, &o);
            }
            if pipes.iter().any(|s| s == "twistor") {
                pc.run_twistor(f, &o);
            }
            Ok(())
        };
        let pc = self.pieces.entry(target.clone()).or_default();
        run(pc, fam)?;
        let rep = assemble_report(&target, fam, kind, 1, pc, &o)?;
        self.options.insert(target.clone(), o.clone());
        let mut failed = !pc.failures().is_empty() || rep.disagreement;
        out.insert("report".into(), to_value(&rep));
        if p.get("orientation_check").and_then(Value::as_bool).unwrap_or(false) {
            let refl = fam.reflect();
            let rkind = reflected_kind(kind.unwrap_or_else(|| FamilyKind::detect(fam)));
            let mut rp = Pieces::default();
            run(&mut rp, &refl)?;
            let rrep = assemble_report(&format!("{target}_reflected"), &refl, Some(rkind), -1, &rp, &o)?;
            let checks = orientation_reversal(&rep, &rrep, o.tolerance);
            failed |= checks.iter().any(|c| !c.holds) || rrep.disagreement;
            out.insert("orientation_reversal".into(), to_value(&checks));
            self.extra_reports.insert(format!("{target}_reflected"), rrep);
        }
        if failed {
            let why: Vec<String> = rep.warnings.iter().filter(|w| w.contains("failed") || w.contains("differ")).cloned().collect();
            return Err(FalloutError::Convergence(format!("pipelines failed or disagree: {}", why.join("; "))));
        }
        Ok(Value::Object(out))
    }
}

fn allow(p: &Map<String, Value>, path: &str, keys: &[&str]) -> Result<()> {
    for k in p.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(err(path, format!("unknown parameter \"{k}\" (expected one of {})", keys.join(", "))));
        }
    }
    Ok(())
}

fn quad_options(p: &Map<String, Value>, path: &str) -> Result<QuadratureOptions> {
    let mut q = QuadratureOptions::default();
    if let Some(x) = p.get("order") {
        q.order = count(x, &format!("{path}.order"))?;
    }
    if let Some(x) = p.get("angular_panels") {
        q.angular_panels = count(x, &format!("{path}.angular_panels"))?;
    }
    if let Some(x) = p.get("radial_panels") {
        q.radial_panels = count(x, &format!("{path}.radial_panels"))?;
    }
    Ok(q)
}

/// Runs every task in order. Task failures are recorded and make the exit
/// code 1; the report is still produced. Nothing is written for a scenario
/// without tasks.
pub fn run_scenario(sc: &Scenario, flags: &Settings) -> Result<RunOutcome> {
    let set = effective(sc, flags);
    let mut r = Runner {
        sc,
        set: set.clone(),
        pieces: BTreeMap::new(),
        options: BTreeMap::new(),
        extra_reports: BTreeMap::new(),
        artifacts: Vec::new(),
        svg_used: false,
    };
    let mut records = Vec::new();
    let mut failed = false;
    for (i, task) in sc.tasks.iter().enumerate() {
        let mut arts = Vec::new();
        let res = r.run_task(i, task, &mut arts);
        let (status, error, result) = match res {
            Ok(v) => ("ok".to_string(), None, v),
            Err(e) => {
                failed = true;
                ("error".to_string(), Some(e.to_string()), Value::Null)
            }
        };
        records.push(TaskRecord { index: i, kind: task.kind, target: task.target.clone(), status, error, result, artifacts: arts });
    }
    let mut families = BTreeMap::new();
    for (name, pc) in &r.pieces {
        let (fam, kind) = &sc.families[name];
        let o = r.options.get(name).cloned().unwrap_or_default();
        let rep = assemble_report(name, fam, *kind, 1, pc, &o)?;
        failed |= rep.disagreement;
        families.insert(name.clone(), rep);
    }
    families.extend(std::mem::take(&mut r.extra_reports));
    let report = RunReport { schema: 1, scenario: sc.name.clone(), seed: set.seed, tasks: records, families };
    if !sc.tasks.is_empty() {
        if let Some(path) = &set.report {
            write_file(path, &report_json(&report))?;
            r.artifacts.push(path.clone());
        }
    }
    Ok(RunOutcome { report, exit_code: if failed { 1 } else { 0 }, artifacts: r.artifacts })
}

pub fn report_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).unwrap_or_default();
    s.push('\n');
    s
}

const SVG_STEP: f64 = 40.0;
const SVG_MARGIN: f64 = 30.0;

/// SVG diagram of a braid: strands left to right, letters top to bottom.
/// For a positive letter `s_i` the strand from position `i` passes over
/// the strand from position `i + 1`; the under strand is drawn with a gap.
pub fn render_braid_svg(word: &BraidWord) -> String {
    let n = word.strands as usize;
    let rows = word.letters.len().max(1);
    let w = 2.0 * SVG_MARGIN + SVG_STEP * (n.max(1) - 1) as f64;
    let h = 2.0 * SVG_MARGIN + SVG_STEP * rows as f64;
    let x = |i: usize| SVG_MARGIN + SVG_STEP * i as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let _ = writeln!(s, "<title>{} ({} strands)</title>", if word.is_empty() { "empty word".into() } else { word.to_string() }, n);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="3" fill="none" stroke-linecap="round">"#);
    if word.is_empty() {
        for i in 0..n {
            let _ = writeln!(s, r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}"/>"#, x(i), SVG_MARGIN, h - SVG_MARGIN);
        }
    }
    let gap = 0.18;
    for (r, &l) in word.letters.iter().enumerate() {
        let y0 = SVG_MARGIN + SVG_STEP * r as f64;
        let y1 = y0 + SVG_STEP;
        let a = l.unsigned_abs() as usize - 1;
        for i in (0..n).filter(|&i| i != a && i != a + 1) {
            let _ = writeln!(s, r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}"/>"#, x(i), y0, y1);
        }
        // over strand goes from a to a + 1 for positive letters
        let (over, under) = if l > 0 { ((a, a + 1), (a + 1, a)) } else { ((a + 1, a), (a, a + 1)) };
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#, x(over.0), y0, x(over.1), y1);
        let lerp = |t: f64| (x(under.0) + t * (x(under.1) - x(under.0)), y0 + t * SVG_STEP);
        let (ax, ay) = lerp(0.5 - gap);
        let (bx, by) = lerp(0.5 + gap);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{ax:.1}" y2="{ay:.1}"/>"#, x(under.0), y0);
        let _ = writeln!(s, r#"<line x1="{bx:.1}" y1="{by:.1}" x2="{:.1}" y2="{:.1}"/>"#, x(under.1), y1);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn write_braid_svg(word: &BraidWord, path: &Path) -> Result<()> {
    write_file(path, &render_braid_svg(word))
}
