//! Closed-form fallout formulas, the main inequality verdict, genus bounds,
//! complex-singularity baselines and the adjunction example.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, torus_braid};
use crate::error::{FalloutError, Result};
use crate::surface::FamilyKind;

/// `2 - sum (N_i + 1) - 2 g`
pub fn tangent_fallout(orders: &[u32], g_lim: u32) -> Result<i64> {
    if orders.is_empty() {
        return Err(FalloutError::Input("tangent_fallout needs at least one branch order".into()));
    }
    if let Some(n) = orders.iter().find(|&&n| n < 2) {
        return Err(FalloutError::Input(format!("branch order N = {n} must be at least 2")));
    }
    Ok(2 - orders.iter().map(|&n| n as i64 + 1).sum::<i64>() - 2 * g_lim as i64)
}

/// `sl - 2 dp`
pub fn normal_fallout(sl: i64, double_points: i64) -> i64 {
    sl - 2 * double_points
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strict,
    /// `k^T + k^N = 0`
    EqualityPlus,
    /// `k^T - k^N = 0`
    EqualityMinus,
    Violation,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Strict => "strict",
            Verdict::EqualityPlus => "equality_plus",
            Verdict::EqualityMinus => "equality_minus",
            Verdict::Violation => "violation",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub k_t: f64,
    pub k_n: f64,
    pub verdict: Verdict,
    /// `k^T = k^N = 0`: both equalities hold.
    pub both_equalities: bool,
    pub family_kind: FamilyKind,
    pub expected: Vec<Verdict>,
    pub matches_expected: bool,
    pub notes: Vec<String>,
}

/// Verdicts a family kind is expected to produce.
pub fn expected_verdicts(kind: FamilyKind) -> Vec<Verdict> {
    use Verdict::*;
    match kind {
        FamilyKind::Complex | FamilyKind::RightSuperminimal | FamilyKind::SymplecticPlus => vec![EqualityPlus],
        FamilyKind::LeftSuperminimal | FamilyKind::SymplecticMinus => vec![EqualityMinus],
        FamilyKind::Minimal | FamilyKind::Generic => vec![Strict, EqualityPlus, EqualityMinus],
    }
}

/// Classifies `(k^T, k^N)` against `|k^N| <= -k^T`. Values within `tol` of
/// each other count as equal.
pub fn main_inequality_report(k_t: f64, k_n: f64, kind: FamilyKind, tol: f64) -> Result<InequalityReport> {
    if k_t > tol {
        return Err(FalloutError::Input(format!("k^T = {k_t} is positive, impossible for branch orders N >= 2")));
    }
    let plus = (k_t + k_n).abs() <= tol;
    let minus = (k_t - k_n).abs() <= tol;
    let verdict = if k_n.abs() > -k_t + tol {
        Verdict::Violation
    } else if plus {
        Verdict::EqualityPlus
    } else if minus {
        Verdict::EqualityMinus
    } else {
        Verdict::Strict
    };
    let expected = expected_verdicts(kind);
    let mut matches = expected.contains(&verdict) || (plus && minus && expected.iter().any(|v| *v != Verdict::Strict));
    let mut notes = Vec::new();
    if verdict == Verdict::Violation {
        matches = false;
        notes.push(format!("VIOLATION: |k^N| = {} exceeds -k^T = {}; an example with |k^N| > -k^T is an open question", k_n.abs(), -k_t));
    }
    if kind == FamilyKind::Minimal && verdict == Verdict::EqualityPlus {
        notes.push("minimal family with k^T + k^N = 0: expect chi(Sigma_n^eps) = chi_s(boundary) and a quasipositive boundary".into());
    }
    if verdict == Verdict::Strict {
        notes.push(format!("k^N + k^T = {} and k^N - k^T = {} are both non-zero", k_n + k_t, k_n - k_t));
    }
    Ok(InequalityReport { k_t, k_n, verdict, both_equalities: plus && minus, family_kind: kind, expected, matches_expected: matches, notes })
}

/// Smallest genus `g >= 0` with `|writhe| <= -(2 - sum (N_i + 1) - 2 g)`.
pub fn genus_bound(writhe_abs: u64, orders: &[u32]) -> i64 {
    let s: i64 = orders.iter().map(|&n| n as i64 + 1).sum();
    let need = writhe_abs as i64 + 2 - s;
    if need <= 0 { 0 } else { (need + 1) / 2 }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComplexSingularity {
    pub p: u32,
    pub q: u32,
    pub mu: i64,
    pub braid: BraidWord,
    pub chi_fiber: i64,
    pub k_t: i64,
    pub k_n: i64,
}

/// Invariants of `x^p = y^q`: the Milnor number, the torus braid and the
/// fallouts of its Milnor fibres. `k^N = mu + p - 1` uses the strand count `p`.
pub fn complex_singularity_invariants(p: u32, q: u32) -> Result<ComplexSingularity> {
    if p < 2 || p >= q {
        return Err(FalloutError::Input(format!("need 2 <= p < q, got ({p}, {q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(FalloutError::Scope(format!("({p}, {q}) not coprime: multi-component links are out of scope")));
    }
    let mu = (p as i64 - 1) * (q as i64 - 1);
    let chi = 1 - mu;
    let k_t = chi - p as i64;
    Ok(ComplexSingularity { p, q, mu, braid: torus_braid(p, q)?, chi_fiber: chi, k_t, k_n: -k_t })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Adjunction {
    pub degree: u32,
    pub cusps: u32,
    pub orientation: i8,
    pub genus_normalization: i64,
    pub c1_tangent: i64,
    pub c1_normal: i64,
    pub d_plus: i64,
}

/// `c1(T) + c1(N)` for a plane curve of degree `d <= 4` with ordinary cusps.
/// `c1(T) = chi(normalization) + cusps` (one branch point of order 2 each),
/// `c1(N) = d^2 - 3 cusps`, negated for the reversed orientation.
pub fn adjunction_degree(d: u32, cusps: u32, orientation: i8) -> Result<Adjunction> {
    if !(1..=4).contains(&d) {
        return Err(FalloutError::Scope(format!("degree {d} outside the supported range 1..=4")));
    }
    if orientation != 1 && orientation != -1 {
        return Err(FalloutError::Input(format!("orientation must be +1 or -1, got {orientation}")));
    }
    let max_cusps = match d {
        3 => 1,
        4 => 3,
        _ => 0,
    };
    if cusps > max_cusps {
        return Err(FalloutError::Scope(format!("a degree-{d} curve with {cusps} ordinary cusps is not supported")));
    }
    let (d, k) = (d as i64, cusps as i64);
    let g = (d - 1) * (d - 2) / 2 - k;
    let c1t = 2 - 2 * g + k;
    let c1n = orientation as i64 * (d * d - 3 * k);
    Ok(Adjunction {
        degree: d as u32,
        cusps,
        orientation,
        genus_normalization: g,
        c1_tangent: c1t,
        c1_normal: c1n,
        d_plus: c1t + c1n,
    })
}
