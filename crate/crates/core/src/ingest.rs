//! JSON ingestion and export of disk specs, families and Weierstrass data.
//!
//! A surface is `{"domain_radius": r, "w1": [term, ...], "w2": [term, ...]}`
//! with terms `{"re": a, "im": b, "j": j, "k": k}` for `(a + i b) z^j zbar^k`
//! and an optional `"phase": alpha` for a factor `e^{i alpha}`. A family
//! writes coefficients as `{"tpoly": [c0, c1, ...], "j": j, "k": k}` meaning
//! `(c0 + c1 t + ...) z^j zbar^k` and lists `"parameters"`. Numbers may be
//! JSON numbers or strings such as `"1/3"`; both are read exactly.
//!
//! Either form may instead give `"weierstrass": {"f1p": [...], ..., "f4p":
//! [...]}` with terms `{"re", "im", "j"}` or `{"tpoly", "j"}` for the
//! derivatives, or `{"builtin": name}` for a corpus entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value, json};

use crate::corpus;
use crate::error::{FalloutError, Result};
use crate::exact::{BiPoly, Poly, QI, qi};
use crate::scalar::parse_rational;
use crate::surface::{DiskSpec, FamilyKind, FamilySpec, FamilyTerm, Term, WeierstrassData, WeierstrassFamily};

/// Maps a JSON syntax error to a parse error with its location.
pub fn json_error(e: serde_json::Error) -> FalloutError {
    FalloutError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(json_error)
}

fn field_err(path: &str, msg: impl std::fmt::Display) -> FalloutError {
    FalloutError::Input(format!("field {path}: {msg}"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| field_err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_err(path, "expected an array"))
}

fn allow_keys(m: &Map<String, Value>, path: &str, keys: &[&str]) -> Result<()> {
    for k in m.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(field_err(path, format!("unknown key \"{k}\" (expected one of {})", keys.join(", "))));
        }
    }
    Ok(())
}

/// Exact rational from a JSON number or a string like `"-2/7"`.
pub fn rational(v: &Value, path: &str) -> Result<BigRational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(field_err(path, "expected a number or a rational string")),
    };
    parse_rational(&text).ok_or_else(|| field_err(path, format!("cannot read \"{text}\" as a rational")))
}

pub fn real(v: &Value, path: &str) -> Result<f64> {
    let r = rational(v, path)?;
    r.to_f64().ok_or_else(|| field_err(path, "out of range"))
}

fn natural(v: &Value, path: &str) -> Result<u32> {
    v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| field_err(path, "expected a non-negative integer"))
}

fn opt_rational(m: &Map<String, Value>, key: &str, path: &str) -> Result<BigRational> {
    match m.get(key) {
        Some(v) => rational(v, &format!("{path}.{key}")),
        None => Ok(BigRational::zero()),
    }
}

/// Complex coefficient: a real number, or `{"re", "im"}`.
fn complex(v: &Value, path: &str) -> Result<QI> {
    match v {
        Value::Object(m) => {
            allow_keys(m, path, &["re", "im"])?;
            Ok(qi(opt_rational(m, "re", path)?, opt_rational(m, "im", path)?))
        }
        _ => Ok(qi(rational(v, path)?, BigRational::zero())),
    }
}

fn tpoly(v: &Value, path: &str) -> Result<Poly> {
    let cs = array(v, path)?;
    let mut out = Vec::with_capacity(cs.len());
    for (i, c) in cs.iter().enumerate() {
        out.push(complex(c, &format!("{path}[{i}]"))?);
    }
    Ok(Poly::from_coeffs(out))
}

fn exponents(m: &Map<String, Value>, path: &str, need_k: bool) -> Result<(u32, u32)> {
    let j = m.get("j").map(|v| natural(v, &format!("{path}.j"))).transpose()?.unwrap_or(0);
    let k = m.get("k").map(|v| natural(v, &format!("{path}.k"))).transpose()?.unwrap_or(0);
    if need_k && j + k == 0 {
        return Err(field_err(path, "j + k must be at least 1"));
    }
    Ok((j, k))
}

fn phase(m: &Map<String, Value>, path: &str) -> Result<Option<BigRational>> {
    m.get("phase").map(|v| rational(v, &format!("{path}.phase"))).transpose()
}

fn disk_terms(v: &Value, path: &str) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let m = object(t, &p)?;
        allow_keys(m, &p, &["re", "im", "j", "k", "phase"])?;
        let (j, k) = exponents(m, &p, true)?;
        let coeff = qi(opt_rational(m, "re", &p)?, opt_rational(m, "im", &p)?);
        if coeff.is_zero() {
            return Err(field_err(&p, "zero coefficient"));
        }
        out.push(Term { coeff, phase: phase(m, &p)?, j, k });
    }
    Ok(out)
}

fn family_terms(v: &Value, path: &str) -> Result<Vec<FamilyTerm>> {
    let mut out = Vec::new();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let m = object(t, &p)?;
        allow_keys(m, &p, &["re", "im", "tpoly", "j", "k", "phase"])?;
        let (j, k) = exponents(m, &p, true)?;
        let coeff = match m.get("tpoly") {
            Some(tp) => {
                if m.contains_key("re") || m.contains_key("im") {
                    return Err(field_err(&p, "give either tpoly or re/im"));
                }
                tpoly(tp, &format!("{p}.tpoly"))?
            }
            None => Poly::constant(qi(opt_rational(m, "re", &p)?, opt_rational(m, "im", &p)?)),
        };
        if coeff.is_zero() {
            return Err(field_err(&p, "zero coefficient"));
        }
        out.push(FamilyTerm { coeff, phase: phase(m, &p)?, j, k });
    }
    Ok(out)
}

/// `[BiPoly; 4]` of derivative data; `with_t` allows `tpoly` coefficients.
fn weierstrass_forms(v: &Value, path: &str, with_t: bool) -> Result<[BiPoly; 4]> {
    let m = object(v, path)?;
    allow_keys(m, path, &["f1p", "f2p", "f3p", "f4p"])?;
    let mut out: [BiPoly; 4] = Default::default();
    for (idx, key) in ["f1p", "f2p", "f3p", "f4p"].iter().enumerate() {
        let p = format!("{path}.{key}");
        let Some(list) = m.get(*key) else { continue };
        let mut acc: Vec<Poly> = Vec::new();
        for (i, t) in array(list, &p)?.iter().enumerate() {
            let tp = format!("{p}[{i}]");
            let tm = object(t, &tp)?;
            let keys: &[&str] = if with_t { &["re", "im", "tpoly", "j"] } else { &["re", "im", "j"] };
            allow_keys(tm, &tp, keys)?;
            let (j, _) = exponents(tm, &tp, false)?;
            let c = match tm.get("tpoly") {
                Some(x) => tpoly(x, &format!("{tp}.tpoly"))?,
                None => Poly::constant(qi(opt_rational(tm, "re", &tp)?, opt_rational(tm, "im", &tp)?)),
            };
            let j = j as usize;
            if acc.len() <= j {
                acc.resize(j + 1, Poly::zero());
            }
            acc[j] = acc[j].add(&c);
        }
        out[idx] = BiPoly::from_coeffs(acc);
    }
    Ok(out)
}

fn domain_radius(m: &Map<String, Value>, path: &str) -> Result<f64> {
    let r = match m.get("domain_radius") {
        Some(v) => real(v, &format!("{path}.domain_radius"))?,
        None => 1.0,
    };
    if !(r > 0.0 && r.is_finite()) {
        return Err(field_err(&format!("{path}.domain_radius"), "must be positive"));
    }
    Ok(r)
}

fn parameters(m: &Map<String, Value>, path: &str) -> Result<Vec<BigRational>> {
    let Some(v) = m.get("parameters") else {
        return Err(field_err(path, "family needs \"parameters\""));
    };
    let p = format!("{path}.parameters");
    let list = array(v, &p)?;
    if list.is_empty() {
        return Err(field_err(&p, "empty parameter list"));
    }
    list.iter().enumerate().map(|(i, x)| rational(x, &format!("{p}[{i}]"))).collect()
}

fn pair(m: &Map<String, Value>, path: &str) -> Result<(u32, u32)> {
    let p = m.get("p").map(|v| natural(v, &format!("{path}.p"))).transpose()?;
    let q = m.get("q").map(|v| natural(v, &format!("{path}.q"))).transpose()?;
    match (p, q) {
        (Some(p), Some(q)) if p >= 1 && q >= 1 => Ok((p, q)),
        _ => Err(field_err(path, "needs positive integers \"p\" and \"q\"")),
    }
}

fn builtin_surface(m: &Map<String, Value>, path: &str) -> Result<DiskSpec> {
    let name = m["builtin"].as_str().ok_or_else(|| field_err(&format!("{path}.builtin"), "expected a string"))?;
    allow_keys(m, path, &["builtin", "alpha", "p", "q"])?;
    Ok(match name {
        "plane" => corpus::plane(),
        "holomorphic_graph" => corpus::holomorphic_graph(),
        "cusp" => corpus::cusp(),
        "torus_knot_minimal_disk" => corpus::torus_knot_minimal_disk(),
        "writhe_twenty_disk" => {
            let alpha = match m.get("alpha") {
                Some(v) => rational(v, &format!("{path}.alpha"))?,
                None => corpus::default_alpha(),
            };
            corpus::writhe_twenty_disk(&alpha)
        }
        "torus_curve" => {
            let (p, q) = pair(m, path)?;
            corpus::torus_curve(p, q)
        }
        other => return Err(field_err(&format!("{path}.builtin"), format!("unknown surface \"{other}\""))),
    })
}

fn builtin_family(m: &Map<String, Value>, path: &str) -> Result<FamilySpec> {
    let name = m["builtin"].as_str().ok_or_else(|| field_err(&format!("{path}.builtin"), "expected a string"))?;
    allow_keys(m, path, &["builtin", "parameters", "p", "q", "kind"])?;
    let params = if m.contains_key("parameters") { Some(parameters(m, path)?) } else { None };
    let mut f = match name {
        "cusp_family" => corpus::cusp_family(),
        "minimal_immersed_family" => corpus::minimal_immersed_family(),
        "complex_family" => {
            let (p, q) = pair(m, path)?;
            corpus::complex_family(p, q, corpus::cusp_parameters())
        }
        other => return Err(field_err(&format!("{path}.builtin"), format!("unknown family \"{other}\""))),
    };
    if let Some(p) = params {
        f.parameter_values = p;
    }
    Ok(f)
}

/// Disk spec from its JSON object.
pub fn surface_from_value(v: &Value, path: &str) -> Result<DiskSpec> {
    let m = object(v, path)?;
    if m.contains_key("builtin") {
        return builtin_surface(m, path);
    }
    let r = domain_radius(m, path)?;
    if let Some(w) = m.get("weierstrass") {
        allow_keys(m, path, &["domain_radius", "weierstrass"])?;
        let forms = weierstrass_forms(w, &format!("{path}.weierstrass"), false)?;
        let fp = forms.map(|b| b.at(&QI::zero()));
        return WeierstrassData::new(fp)?.to_disk(r);
    }
    allow_keys(m, path, &["domain_radius", "w1", "w2"])?;
    let get = |k: &str| -> Result<Vec<Term>> {
        match m.get(k) {
            Some(v) => disk_terms(v, &format!("{path}.{k}")),
            None => Ok(Vec::new()),
        }
    };
    DiskSpec::new(get("w1")?, get("w2")?, r)
}

/// Family spec from its JSON object.
pub fn family_from_value(v: &Value, path: &str) -> Result<FamilySpec> {
    let m = object(v, path)?;
    if m.contains_key("builtin") {
        return builtin_family(m, path);
    }
    let r = domain_radius(m, path)?;
    let params = parameters(m, path)?;
    if let Some(w) = m.get("weierstrass") {
        allow_keys(m, path, &["domain_radius", "weierstrass", "parameters", "kind"])?;
        let fam = WeierstrassFamily { fp: weierstrass_forms(w, &format!("{path}.weierstrass"), true)? };
        return fam.to_family(r, params);
    }
    allow_keys(m, path, &["domain_radius", "w1", "w2", "parameters", "kind"])?;
    let get = |k: &str| -> Result<Vec<FamilyTerm>> {
        match m.get(k) {
            Some(v) => family_terms(v, &format!("{path}.{k}")),
            None => Ok(Vec::new()),
        }
    };
    FamilySpec::new(get("w1")?, get("w2")?, r, params)
}

/// Optional `"kind"` of a family object.
pub fn family_kind(v: &Value, path: &str) -> Result<Option<FamilyKind>> {
    match v.get("kind") {
        None => Ok(None),
        Some(k) => serde_json::from_value(k.clone())
            .map(Some)
            .map_err(|_| field_err(&format!("{path}.kind"), format!("unknown family kind {k}"))),
    }
}

/// A spec file: a surface, or a family when it lists `"parameters"`.
#[derive(Clone, Debug)]
pub enum SpecDocument {
    Surface(DiskSpec),
    Family(FamilySpec, Option<FamilyKind>),
}

pub fn parse_document(text: &str) -> Result<SpecDocument> {
    let v = parse_json(text)?;
    let is_family = v.get("parameters").is_some()
        || v.get("builtin").and_then(Value::as_str).is_some_and(|s| s.ends_with("family"));
    if is_family {
        Ok(SpecDocument::Family(family_from_value(&v, "$")?, family_kind(&v, "$")?))
    } else {
        Ok(SpecDocument::Surface(surface_from_value(&v, "$")?))
    }
}

fn rational_json(r: &BigRational) -> Value {
    if r.is_integer() {
        if let Some(i) = r.to_integer().to_i64() {
            return json!(i);
        }
    }
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn complex_json(c: &QI) -> Value {
    if c.im.is_zero() { rational_json(&c.re) } else { json!({"re": rational_json(&c.re), "im": rational_json(&c.im)}) }
}

fn radius_json(r: f64) -> Value {
    match BigRational::from_float(r) {
        Some(q) if q.denom() <= &BigInt::from(1u64 << 20) => rational_json(&q),
        _ => json!(r),
    }
}

/// JSON form of a disk spec, readable by [`surface_from_value`].
pub fn surface_to_value(spec: &DiskSpec) -> Value {
    let terms = |ts: &Vec<Term>| -> Value {
        ts.iter()
            .map(|t| {
                let mut o = Map::new();
                o.insert("re".into(), rational_json(&t.coeff.re));
                o.insert("im".into(), rational_json(&t.coeff.im));
                o.insert("j".into(), json!(t.j));
                o.insert("k".into(), json!(t.k));
                if let Some(p) = &t.phase {
                    o.insert("phase".into(), rational_json(p));
                }
                Value::Object(o)
            })
            .collect()
    };
    json!({"domain_radius": radius_json(spec.domain_radius), "w1": terms(&spec.w[0]), "w2": terms(&spec.w[1])})
}

/// JSON form of a family, readable by [`family_from_value`].
pub fn family_to_value(f: &FamilySpec) -> Value {
    let terms = |ts: &Vec<FamilyTerm>| -> Value {
        ts.iter()
            .map(|t| {
                let mut o = Map::new();
                o.insert("tpoly".into(), t.coeff.coeffs().iter().map(complex_json).collect());
                o.insert("j".into(), json!(t.j));
                o.insert("k".into(), json!(t.k));
                if let Some(p) = &t.phase {
                    o.insert("phase".into(), rational_json(p));
                }
                Value::Object(o)
            })
            .collect()
    };
    json!({
        "domain_radius": radius_json(f.domain_radius),
        "parameters": f.parameter_values.iter().map(rational_json).collect::<Vec<_>>(),
        "w1": terms(&f.w[0]),
        "w2": terms(&f.w[1]),
    })
}

/// Rational list from JSON numbers or strings, e.g. a `--t-sweep` value.
pub fn rational_list(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_rational(s).ok_or_else(|| FalloutError::Input(format!("cannot read \"{}\" as a rational", s.trim()))))
        .collect()
}

/// Real list such as `"0.02,0.01"`.
pub fn real_list(text: &str) -> Result<Vec<f64>> {
    Ok(rational_list(text)?.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect())
}
