//! Family analysis: the formula, braid, quadrature and twistor pipelines and
//! the consolidated fallout report.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::Dd;
use crate::braid::{BraidExtraction, BraidWord, ExtractOptions, extract_braid, slice_bennequin};
use crate::curvature::{FalloutEstimate, QuadratureOptions, integrate_fallout};
use crate::error::{FalloutError, Result};
use crate::invariants::{InequalityReport, genus_bound, main_inequality_report, normal_fallout, tangent_fallout};
use crate::link::{Axis, DoublePointReport, SelfLinkingReport, double_points, self_linking, slice_sphere, stereographic};
use crate::scalar::Real;
use crate::surface::{DiskSpec, FamilyKind, FamilySpec, branching_data};
use crate::twistor::{CurrentClass, DefectOptions, DefectReport, current_class, vertical_defect};

pub const SCHEMA_VERSION: u32 = 1;

/// Default slice sample count: enough to follow the highest-degree term.
pub fn default_samples(spec: &DiskSpec) -> usize {
    let n = spec.min_degree() as usize;
    (64 * n).max(512).max(200 * spec.max_degree() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F64,
    DoubleDouble,
}

#[derive(Clone, Debug)]
pub struct BraidOptions {
    pub samples: Option<usize>,
    /// Fixed slice radius; `None` runs the downward sweep.
    pub epsilon: Option<f64>,
    pub ratio: f64,
    pub max_steps: usize,
    /// Skip the f64 attempt.
    pub force_extended: bool,
}

impl Default for BraidOptions {
    fn default() -> Self {
        BraidOptions { samples: None, epsilon: None, ratio: 0.7, max_steps: 16, force_extended: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidStep {
    pub epsilon: f64,
    pub precision: Option<Precision>,
    pub exponent_sum: Option<i64>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidResult {
    pub epsilon: f64,
    pub samples: usize,
    pub precision: Precision,
    pub word: BraidWord,
    pub strands: u32,
    pub exponent_sum: i64,
    pub components: usize,
    pub min_rho: f64,
    pub sweep: Vec<BraidStep>,
}

fn braid_at<T: Real>(spec: &DiskSpec, eps: f64, m: usize, ambiguity: f64) -> Result<BraidExtraction> {
    let link = slice_sphere::<T>(spec, T::lit(eps), m)?;
    let proj = stereographic(&link, &link.pole)?;
    extract_braid(&proj.curves, &Axis::standard(), &ExtractOptions { oversample: 8, ambiguity })
}

/// Braid at one radius: f64 first, double-double when f64 cannot resolve a
/// crossing.
pub fn braid_at_epsilon(spec: &DiskSpec, eps: f64, m: usize, force_extended: bool) -> Result<(BraidExtraction, Precision)> {
    if !force_extended {
        match braid_at::<f64>(spec, eps, m, 1e-9) {
            Ok(b) => return Ok((b, Precision::F64)),
            Err(FalloutError::Resolution(_)) => {}
            Err(e) => return Err(e),
        }
    }
    braid_at::<Dd>(spec, eps, m, 1e-12).map(|b| (b, Precision::DoubleDouble))
}

/// Boundary braid of `spec`. Without a fixed radius, sweeps down from half
/// the domain radius and accepts the first radius whose braid (strands,
/// exponent sum, components) matches the next smaller one.
pub fn boundary_braid(spec: &DiskSpec, opts: &BraidOptions) -> Result<BraidResult> {
    branching_data::<f64>(spec)?;
    let m = opts.samples.unwrap_or_else(|| default_samples(spec));
    let finish = |b: BraidExtraction, eps: f64, p: Precision, sweep: Vec<BraidStep>| BraidResult {
        epsilon: eps,
        samples: m,
        precision: p,
        strands: b.word.strands,
        exponent_sum: b.word.exponent_sum(),
        components: b.word.components(),
        min_rho: b.min_rho,
        word: b.word,
        sweep,
    };
    if let Some(eps) = opts.epsilon {
        let (b, p) = braid_at_epsilon(spec, eps, m, opts.force_extended)?;
        let step = BraidStep { epsilon: eps, precision: Some(p), exponent_sum: Some(b.word.exponent_sum()), note: "fixed".into() };
        return Ok(finish(b, eps, p, vec![step]));
    }
    let mut sweep = Vec::new();
    let mut prev: Option<(BraidExtraction, f64, Precision)> = None;
    let mut eps = 0.5 * spec.domain_radius;
    for _ in 0..opts.max_steps {
        match braid_at_epsilon(spec, eps, m, opts.force_extended) {
            Ok((b, p)) => {
                sweep.push(BraidStep { epsilon: eps, precision: Some(p), exponent_sum: Some(b.word.exponent_sum()), note: b.word.to_string() });
                if let Some((pb, pe, pp)) = &prev {
                    let key = |w: &BraidWord| (w.strands, w.exponent_sum(), w.components());
                    if key(&pb.word) == key(&b.word) {
                        return Ok(finish(pb.clone(), *pe, *pp, sweep));
                    }
                }
                prev = Some((b, eps, p));
            }
            Err(e @ FalloutError::NotPositivelyBranched(_)) => return Err(e),
            Err(e) => {
                sweep.push(BraidStep { epsilon: eps, precision: None, exponent_sum: None, note: e.to_string() });
                prev = None;
            }
        }
        eps *= opts.ratio;
    }
    let trail: Vec<String> = sweep.iter().map(|s| format!("eps {:.4}: {}", s.epsilon, s.note)).collect();
    Err(FalloutError::Convergence(format!("boundary braid not stable over two consecutive eps ({})", trail.join("; "))))
}

/// Self-linking of the transverse push-off at the braid radius.
pub fn boundary_self_linking(spec: &DiskSpec, eps: f64, samples: usize, seed: u64) -> Result<SelfLinkingReport> {
    let link = slice_sphere::<f64>(spec, eps, samples)?;
    self_linking(&link, seed)
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub braid: BraidOptions,
    /// Quadrature radii; also the double-point radius (largest entry).
    pub epsilon_sweep: Vec<f64>,
    /// Parameter values; the family's own list when empty.
    pub t_sweep: Vec<BigRational>,
    pub deltas: Vec<f64>,
    pub quad: QuadratureOptions,
    /// Allowed gap between the quadrature and integer pipelines.
    pub tolerance: f64,
    pub formula: bool,
    pub quadrature: bool,
    pub twistor: bool,
    pub self_linking: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            seed: 17,
            braid: BraidOptions::default(),
            epsilon_sweep: vec![0.02, 0.01],
            t_sweep: Vec::new(),
            deltas: vec![0.1, 0.05],
            quad: QuadratureOptions::default(),
            tolerance: 0.1,
            formula: true,
            quadrature: true,
            twistor: true,
            self_linking: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidSummary {
    pub word: String,
    pub strands: u32,
    pub exponent_sum: i64,
    pub components: usize,
    pub slice_bennequin: i64,
    pub epsilon: f64,
    pub samples: usize,
    pub precision: Precision,
}

impl BraidSummary {
    pub fn of(b: &BraidResult) -> Self {
        BraidSummary {
            word: b.word.to_string(),
            strands: b.strands,
            exponent_sum: b.exponent_sum,
            components: b.components,
            slice_bennequin: slice_bennequin(&b.word),
            epsilon: b.epsilon,
            samples: b.samples,
            precision: b.precision,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublePointSummary {
    pub count: i64,
    pub epsilon: f64,
    pub t: f64,
    pub reliable: bool,
    pub per_t: Vec<(f64, i64, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistorSummary {
    pub plus: DefectReport,
    pub minus: DefectReport,
    pub class: Option<CurrentClass>,
}

/// Both candidate normal fallouts of a complex singularity with monomial
/// limit `(z^p, z^q)`: `mu + r - 1` with `r` closure components and
/// `mu + N - 1` with `N` strands.
#[derive(Clone, Debug, Serialize)]
pub struct MilnorNote {
    pub mu: i64,
    pub components: usize,
    pub strands: u32,
    pub k_n_with_components: i64,
    pub k_n_with_strands: i64,
}

/// Consolidated report for one family at one ambient orientation.
#[derive(Clone, Debug, Serialize)]
pub struct FalloutReport {
    pub schema: u32,
    pub family: String,
    pub kind: FamilyKind,
    pub orientation: i8,
    pub strands: u32,
    #[serde(rename = "kT_formula")]
    pub k_t_formula: Option<i64>,
    #[serde(rename = "kN_formula")]
    pub k_n_formula: Option<i64>,
    #[serde(rename = "kN_braid")]
    pub k_n_braid: Option<i64>,
    #[serde(rename = "kT_quadrature")]
    pub k_t_quadrature: Option<f64>,
    #[serde(rename = "kN_quadrature")]
    pub k_n_quadrature: Option<f64>,
    #[serde(rename = "kT_twistor")]
    pub k_t_twistor: Option<i64>,
    #[serde(rename = "kN_twistor")]
    pub k_n_twistor: Option<i64>,
    pub braid: Option<BraidSummary>,
    pub self_linking: Option<i64>,
    pub double_points: Option<DoublePointSummary>,
    pub quadrature: Option<FalloutEstimate>,
    pub twistor: Option<TwistorSummary>,
    pub genus_bound: Option<i64>,
    pub milnor: Option<MilnorNote>,
    pub verdict: Option<InequalityReport>,
    pub disagreement: bool,
    pub warnings: Vec<String>,
}

fn monomial_pair(spec: &DiskSpec) -> Option<(u32, u32)> {
    let single = |i: usize| -> Option<u32> {
        let t = spec.w[i].as_slice();
        (t.len() == 1 && t[0].k == 0 && t[0].phase.is_none()).then(|| t[0].j)
    };
    let (a, b) = (single(0)?, single(1)?);
    Some((a.min(b), a.max(b)))
}

/// The two smallest parameter values by magnitude, smallest first.
fn smallest_two(ts: &[BigRational]) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = ts.to_vec();
    v.sort_by(|a, b| a.abs().cmp(&b.abs()));
    v.truncate(2);
    v
}

type Outcome<T> = Option<std::result::Result<T, String>>;

/// Pipeline results for one family, filled in stage by stage.
#[derive(Clone, Debug, Default)]
pub struct Pieces {
    pub braid: Outcome<BraidResult>,
    pub self_linking: Outcome<i64>,
    pub double_points: Outcome<DoublePointSummary>,
    pub quadrature: Outcome<FalloutEstimate>,
    pub twistor: Outcome<TwistorSummary>,
}

fn ok<T: Clone>(o: &Outcome<T>) -> Option<T> {
    o.as_ref().and_then(|r| r.as_ref().ok()).cloned()
}

fn keep<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

impl Pieces {
    fn parameters(family: &FamilySpec, opts: &AnalysisOptions) -> Vec<BigRational> {
        if opts.t_sweep.is_empty() { family.parameter_values.clone() } else { opts.t_sweep.clone() }
    }

    /// Boundary braid, self-linking of the limit and double points of the
    /// two smallest parameters at the largest quadrature radius.
    pub fn run_formula(&mut self, family: &FamilySpec, opts: &AnalysisOptions) -> Result<()> {
        let limit = family.limit()?;
        if self.braid.is_none() {
            self.braid = Some(keep(boundary_braid(&limit, &opts.braid)));
        }
        if self.self_linking.is_none() && opts.self_linking {
            if let Some(Ok(b)) = &self.braid {
                self.self_linking = Some(keep(boundary_self_linking(&limit, b.epsilon, b.samples, opts.seed).map(|r| r.value)));
            }
        }
        if self.double_points.is_none() {
            self.double_points = Some(keep(family_double_points(family, &Self::parameters(family, opts), &opts.epsilon_sweep)));
        }
        Ok(())
    }

    pub fn run_quadrature(&mut self, family: &FamilySpec, opts: &AnalysisOptions) {
        if self.quadrature.is_none() {
            self.quadrature = Some(keep(integrate_fallout(family, &opts.epsilon_sweep, &Self::parameters(family, opts), &opts.quad)));
        }
    }

    pub fn run_twistor(&mut self, family: &FamilySpec, opts: &AnalysisOptions) {
        if self.twistor.is_none() {
            self.twistor = Some(keep(twistor_pipeline(family, &Self::parameters(family, opts), opts)));
        }
    }

    /// Messages of the stages that failed.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |label: &str, e: Option<&String>| {
            if let Some(e) = e {
                out.push(format!("{label} failed: {e}"));
            }
        };
        push("braid pipeline", self.braid.as_ref().and_then(|r| r.as_ref().err()));
        push("self-linking", self.self_linking.as_ref().and_then(|r| r.as_ref().err()));
        push("double points", self.double_points.as_ref().and_then(|r| r.as_ref().err()));
        push("quadrature pipeline", self.quadrature.as_ref().and_then(|r| r.as_ref().err()));
        push("twistor pipeline", self.twistor.as_ref().and_then(|r| r.as_ref().err()));
        out
    }
}

/// Signed double-point count at the smallest parameter, checked against
/// the next smallest.
pub fn family_double_points(family: &FamilySpec, ts: &[BigRational], eps_sweep: &[f64]) -> Result<DoublePointSummary> {
    let eps = eps_sweep.iter().cloned().fold(f64::NAN, f64::max);
    if !(eps > 0.0) {
        return Err(FalloutError::Input("double points need a positive radius".into()));
    }
    let mut per_t = Vec::new();
    for t in smallest_two(ts) {
        if t.is_zero() {
            continue;
        }
        let DoublePointReport { count, unresolved, .. } = double_points(family, &t, eps)?;
        per_t.push((f64::from_rational(&t), count, unresolved));
    }
    let &(t, count, _) = per_t.first().ok_or_else(|| FalloutError::Input("double points need a nonzero parameter".into()))?;
    let reliable = per_t.iter().all(|r| r.1 == count && r.2 == 0);
    Ok(DoublePointSummary { count, epsilon: eps, t, reliable, per_t })
}

/// Vertical defects of both Gauss maps and the current class.
pub fn twistor_pipeline(family: &FamilySpec, ts: &[BigRational], opts: &AnalysisOptions) -> Result<TwistorSummary> {
    let w = family
        .weierstrass()
        .ok_or_else(|| FalloutError::Precondition("twistor pipeline needs Weierstrass data; family is not conformal harmonic".into()))?;
    let dopts = DefectOptions { seed: opts.seed, quad: opts.quad.clone(), ..DefectOptions::default() };
    let (gp, gm) = w.gauss_maps()?;
    let plus = vertical_defect(&gp, ts, &opts.deltas, &dopts)?;
    let minus = vertical_defect(&gm, ts, &opts.deltas, &dopts)?;
    let class = current_class(plus.defect, minus.defect).ok();
    Ok(TwistorSummary { plus, minus, class })
}

/// Runs the enabled pipelines on `family` and cross-checks them.
pub fn analyze_family(name: &str, family: &FamilySpec, kind: Option<FamilyKind>, orientation: i8, opts: &AnalysisOptions) -> Result<FalloutReport> {
    let mut pieces = Pieces::default();
    if opts.formula {
        pieces.run_formula(family, opts)?;
    }
    if opts.quadrature {
        pieces.run_quadrature(family, opts);
    }
    if opts.twistor {
        pieces.run_twistor(family, opts);
    }
    assemble_report(name, family, kind, orientation, &pieces, opts)
}

/// Consolidated report from whatever stages have run. Members are
/// parametrized disks, so the tangent formula uses genus 0.
pub fn assemble_report(
    name: &str,
    family: &FamilySpec,
    kind: Option<FamilyKind>,
    orientation: i8,
    pieces: &Pieces,
    opts: &AnalysisOptions,
) -> Result<FalloutReport> {
    let kind = kind.unwrap_or_else(|| FamilyKind::detect(family));
    let limit = family.limit()?;
    let n = branching_data::<f64>(&limit)?.n;
    let mut warnings = pieces.failures();
    let mut disagreement = false;

    let braid: Option<BraidResult> = ok(&pieces.braid);
    let sl: Option<i64> = ok(&pieces.self_linking);
    let dp: Option<DoublePointSummary> = ok(&pieces.double_points);
    let quadrature: Option<FalloutEstimate> = ok(&pieces.quadrature);
    let twistor: Option<TwistorSummary> = ok(&pieces.twistor);
    let formula_ran = pieces.braid.is_some() || pieces.double_points.is_some();

    if let Some(d) = &dp {
        if !d.reliable {
            warnings.push(format!("double-point count not reliable: {:?}", d.per_t));
        }
    }
    let k_t_formula = if formula_ran { Some(tangent_fallout(&[n], 0)?) } else { None };
    let k_n_formula = match (sl, &dp) {
        (Some(s), Some(d)) => Some(normal_fallout(s, d.count)),
        _ => None,
    };
    let k_n_braid = match (&braid, &dp) {
        (Some(b), Some(d)) => Some(normal_fallout(b.exponent_sum, d.count)),
        _ => None,
    };
    if let (Some(s), Some(b)) = (sl, &braid) {
        if s != b.exponent_sum {
            disagreement = true;
            warnings.push(format!("self-linking {s} differs from braid exponent sum {}", b.exponent_sum));
        }
    }
    if let Some(b) = &braid {
        if b.strands != n {
            disagreement = true;
            warnings.push(format!("braid has {} strands but the branching order gives N = {n}", b.strands));
        }
    }
    if let Some(q) = &quadrature {
        if q.unconverged {
            warnings.push(format!("quadrature unconverged: residual {:.3e}", q.residual));
        }
    }
    if let Some(s) = &twistor {
        if s.plus.unconverged || s.minus.unconverged {
            warnings.push("twistor defect extrapolation unconverged".into());
        }
        if s.class.is_none() {
            warnings.push(format!("twistor defects ({}, {}) not integral", s.plus.defect, s.minus.defect));
        }
        warnings.push("twistor fallouts use the calibrated convention kT + kN = -2 a_plus, kT - kN = -2 a_minus; raw defects are reported".into());
    }
    let k_t_twistor = twistor.as_ref().and_then(|s| s.class.as_ref()).map(|c| c.k_t);
    let k_n_twistor = twistor.as_ref().and_then(|s| s.class.as_ref()).map(|c| c.k_n);
    let (k_t_quadrature, k_n_quadrature) = match &quadrature {
        Some(q) => (Some(q.k_t), Some(q.k_n)),
        None => (None, None),
    };

    let mut ints_t: Vec<(&str, i64)> = Vec::new();
    let mut ints_n: Vec<(&str, i64)> = Vec::new();
    if let Some(v) = k_t_formula {
        ints_t.push(("formula", v));
    }
    if let Some(v) = k_t_twistor {
        ints_t.push(("twistor", v));
    }
    for (label, v) in [("formula", k_n_formula), ("braid", k_n_braid), ("twistor", k_n_twistor)] {
        if let Some(v) = v {
            ints_n.push((label, v));
        }
    }
    for (what, ints, quad) in [("kT", &ints_t, k_t_quadrature), ("kN", &ints_n, k_n_quadrature)] {
        if let Some(&(l0, v0)) = ints.first() {
            for &(l, v) in ints.iter().skip(1) {
                if v != v0 {
                    disagreement = true;
                    warnings.push(format!("{what}: {l0} gives {v0}, {l} gives {v}"));
                }
            }
            if let Some(q) = quad {
                if (q - v0 as f64).abs() > opts.tolerance {
                    disagreement = true;
                    warnings.push(format!("{what}: quadrature {q:.4} differs from {l0} {v0} by more than {}", opts.tolerance));
                }
            }
        }
    }

    let best_t = k_t_formula.or(k_t_twistor).map(|v| v as f64).or(k_t_quadrature.map(f64::round));
    let best_n = k_n_formula.or(k_n_twistor).or(k_n_braid).map(|v| v as f64).or(k_n_quadrature.map(f64::round));
    let verdict = match (best_t, best_n) {
        (Some(t), Some(nn)) => match main_inequality_report(t, nn, kind, 1e-9) {
            Ok(v) => Some(v),
            Err(e) => {
                warnings.push(format!("verdict: {e}"));
                None
            }
        },
        _ => None,
    };
    if let Some(v) = &verdict {
        if !v.matches_expected {
            warnings.push(format!("verdict {} does not match the expectation for {:?}", v.verdict.as_str(), kind));
        }
    }

    let milnor = match (monomial_pair(&limit), &braid) {
        (Some((p, q)), Some(b)) if family.is_holomorphic() => {
            let mu = (p as i64 - 1) * (q as i64 - 1);
            let note = MilnorNote {
                mu,
                components: b.components,
                strands: b.strands,
                k_n_with_components: mu + b.components as i64 - 1,
                k_n_with_strands: mu + b.strands as i64 - 1,
            };
            if note.k_n_with_components != note.k_n_with_strands {
                warnings.push(format!(
                    "mu + r - 1 = {} (r = {} components) and mu + N - 1 = {} (N = {} strands) differ; the strand count is used",
                    note.k_n_with_components, note.components, note.k_n_with_strands, note.strands
                ));
            }
            Some(note)
        }
        _ => None,
    };

    Ok(FalloutReport {
        schema: SCHEMA_VERSION,
        family: name.to_string(),
        kind,
        orientation,
        strands: n,
        k_t_formula,
        k_n_formula,
        k_n_braid,
        k_t_quadrature,
        k_n_quadrature,
        k_t_twistor,
        k_n_twistor,
        genus_bound: braid.as_ref().map(|b| genus_bound(b.exponent_sum.unsigned_abs(), &[n])),
        braid: braid.as_ref().map(BraidSummary::of),
        self_linking: sl,
        double_points: dp,
        quadrature,
        twistor,
        milnor,
        verdict,
        disagreement,
        warnings,
    })
}

/// Kind of the orientation-reversed family.
pub fn reflected_kind(kind: FamilyKind) -> FamilyKind {
    match kind {
        FamilyKind::Complex | FamilyKind::SymplecticPlus => FamilyKind::SymplecticMinus,
        FamilyKind::SymplecticMinus => FamilyKind::SymplecticPlus,
        FamilyKind::RightSuperminimal => FamilyKind::LeftSuperminimal,
        FamilyKind::LeftSuperminimal => FamilyKind::RightSuperminimal,
        k => k,
    }
}

/// Per-pipeline comparison of a report with its orientation-reversed twin.
#[derive(Clone, Debug, Serialize)]
pub struct OrientationCheck {
    pub pipeline: String,
    pub k_t: (f64, f64),
    pub k_n: (f64, f64),
    pub holds: bool,
}

/// `k^T` fixed and `k^N` negated in every pipeline present in both reports.
pub fn orientation_reversal(a: &FalloutReport, b: &FalloutReport, tol: f64) -> Vec<OrientationCheck> {
    let f = |x: Option<i64>| x.map(|v| v as f64);
    let rows = [
        ("formula", f(a.k_t_formula), f(a.k_n_formula), f(b.k_t_formula), f(b.k_n_formula)),
        ("braid", f(a.k_t_formula), f(a.k_n_braid), f(b.k_t_formula), f(b.k_n_braid)),
        ("quadrature", a.k_t_quadrature, a.k_n_quadrature, b.k_t_quadrature, b.k_n_quadrature),
        ("twistor", f(a.k_t_twistor), f(a.k_n_twistor), f(b.k_t_twistor), f(b.k_n_twistor)),
    ];
    rows.into_iter()
        .filter_map(|(p, ta, na, tb, nb)| {
            let (ta, na, tb, nb) = (ta?, na?, tb?, nb?);
            Some(OrientationCheck {
                pipeline: p.into(),
                k_t: (ta, tb),
                k_n: (na, nb),
                holds: (ta - tb).abs() <= tol && (na + nb).abs() <= tol,
            })
        })
        .collect()
}

/// Diagnostics CSV of a fallout table, one row per `(eps, t)`.
pub fn fallout_csv(q: &FalloutEstimate) -> String {
    let mut s = String::from("epsilon,t,kT,kN,nodes,excluded_bound\n");
    for g in &q.table {
        s.push_str(&format!("{},{},{},{},{},{}\n", g.epsilon, g.t, g.k_t, g.k_n, g.nodes, g.excluded_bound));
    }
    s
}

/// Diagnostics CSV of the defect tables of both Gauss maps.
pub fn defect_csv(t: &TwistorSummary) -> String {
    let mut s = String::from("factor,t,delta,count,spread,area_t,area_0\n");
    for (label, r) in [("plus", &t.plus), ("minus", &t.minus)] {
        for row in &r.table {
            s.push_str(&format!("{label},{},{},{},{},{},{}\n", row.t, row.delta, row.count, row.spread, row.area_t, row.area_0));
        }
    }
    s
}
