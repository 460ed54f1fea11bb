//! Acceptance criteria AC1-AC8. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use fallout_core::braid::{slice_bennequin, torus_braid};
use fallout_core::corpus;
use fallout_core::curvature::{gauss_bonnet_check, normal_stokes_check, second_fundamental_form};
use fallout_core::exact::{Poly, qi, qi_int, qi_real};
use fallout_core::invariants::{adjunction_degree, complex_singularity_invariants, genus_bound, normal_fallout, tangent_fallout};
use fallout_core::pipeline::{AnalysisOptions, BraidOptions, FalloutReport, analyze_family, boundary_braid, orientation_reversal, reflected_kind};
use fallout_core::quadrature::QuadratureOptions;
use fallout_core::scalar::{rat, rat_int};
use fallout_core::surface::{DiskSpec, FamilyKind, FamilySpec, Term, WeierstrassData};
use num_complex::Complex;
use num_integer::Integer;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn within(t: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, format!("{what} took {:.1} s, limit {limit} s", t.as_secs_f64()))
}

fn close(x: Option<f64>, want: f64, tol: f64, what: &str) -> Result<(), String> {
    match x {
        Some(v) if (v - want).abs() <= tol => Ok(()),
        other => Err(format!("{what} = {other:?}, want {want} +- {tol}")),
    }
}

fn report(family: &FamilySpec, name: &str) -> Result<FalloutReport, String> {
    analyze_family(name, family, None, 1, &AnalysisOptions::default()).map_err(|e| e.to_string())
}

/// Cusp family `(z^2, z^3 + t z)`: braid, quadrature and twistor pipelines.
fn ac1() -> Check {
    let start = Instant::now();
    let r = report(&corpus::cusp_family(), "cusp")?;
    let b = r.braid.as_ref().ok_or("no braid")?;
    ensure(b.exponent_sum == 3 && b.strands == 2, format!("braid {} ({} strands)", b.word, b.strands))?;
    let dp = r.double_points.as_ref().ok_or("no double points")?;
    ensure(dp.count == 1, format!("double points {}", dp.count))?;
    ensure(r.k_n_braid == Some(1), format!("braid kN {:?}", r.k_n_braid))?;
    close(r.k_t_quadrature, -1.0, 0.1, "quadrature kT")?;
    close(r.k_n_quadrature, 1.0, 0.1, "quadrature kN")?;
    let cls = r.twistor.as_ref().and_then(|t| t.class.clone()).ok_or("no twistor class")?;
    ensure((cls.n_plus, cls.n_minus) == (0, 1), format!("defects ({}, {})", cls.n_plus, cls.n_minus))?;
    ensure((cls.k_t, cls.k_n) == (-1, 1), format!("twistor ({}, {})", cls.k_t, cls.k_n))?;
    within(start.elapsed(), 30.0, "cusp corpus")?;
    Ok(format!(
        "word {}, dp 1, quadrature ({:.4}, {:.4}), twistor (-1, 1), {:.1} s",
        b.word,
        r.k_t_quadrature.unwrap(),
        r.k_n_quadrature.unwrap(),
        start.elapsed().as_secs_f64()
    ))
}

/// Minimal immersed family: exact Gauss maps, limit braid, twistor defects.
fn ac2() -> Check {
    let start = Instant::now();
    let w = corpus::minimal_immersed_weierstrass();
    for n in [1i64, 2, 7, 100] {
        let (gp, _) = w.at(&rat(1, n)).gauss_maps().map_err(|e| e.to_string())?;
        let num = Poly::from_coeffs(vec![qi_real(rat(-1, n)), qi_int(1)]);
        ensure(gp.num == num && gp.den == Poly::monomial(qi_int(1), 3), format!("gamma_+ at t = 1/{n}: {gp:?}"))?;
    }
    let fam = corpus::minimal_immersed_family();
    let limit = fam.limit().map_err(|e| e.to_string())?;
    let b = boundary_braid(&limit, &BraidOptions::default()).map_err(|e| e.to_string())?;
    ensure(b.strands == 3 && b.components == 1 && b.exponent_sum.abs() == 8, format!("braid {} ({} strands, {} components)", b.word, b.strands, b.components))?;
    let opts = AnalysisOptions { quadrature: false, ..AnalysisOptions::default() };
    let r = analyze_family("minimal", &fam, Some(FamilyKind::Minimal), 1, &opts).map_err(|e| e.to_string())?;
    let cls = r.twistor.as_ref().and_then(|t| t.class.clone()).ok_or("no twistor class")?;
    ensure((cls.n_plus, cls.n_minus) == (1, 1), format!("defects ({}, {})", cls.n_plus, cls.n_minus))?;
    ensure((cls.k_t, cls.k_n) == (-2, 0), format!("twistor ({}, {})", cls.k_t, cls.k_n))?;
    ensure(r.k_t_formula == Some(-2) && r.k_n_formula == Some(0), format!("formula ({:?}, {:?})", r.k_t_formula, r.k_n_formula))?;
    ensure(cls.k_n + cls.k_t != 0 && cls.k_n - cls.k_t != 0, "kN +- kT vanishes")?;
    within(start.elapsed(), 60.0, "minimal family")?;
    Ok(format!("gamma_+ = (z - 1/n)/z^3, braid {}, twistor (-2, 0), {:.1} s", b.word, start.elapsed().as_secs_f64()))
}

/// Writhe-20 disk: exponent sum, genus bound, extended precision.
fn ac3() -> Check {
    let start = Instant::now();
    let spec = corpus::writhe_twenty_disk(&corpus::default_alpha());
    let auto = boundary_braid(&spec, &BraidOptions::default()).map_err(|e| e.to_string())?;
    let ext = boundary_braid(&spec, &BraidOptions { force_extended: true, ..BraidOptions::default() }).map_err(|e| e.to_string())?;
    for b in [&auto, &ext] {
        ensure(b.exponent_sum.abs() == 20, format!("exponent sum {} ({:?})", b.exponent_sum, b.precision))?;
    }
    ensure(format!("{:?}", ext.precision) == "DoubleDouble", format!("extended run used {:?}", ext.precision))?;
    let g = genus_bound(auto.exponent_sum.unsigned_abs(), &[3]);
    ensure(g == 9, format!("genus bound {g}"))?;
    within(start.elapsed(), 300.0, "writhe-20")?;
    Ok(format!("exponent sum {}, genus bound 9, extended path agrees, {:.1} s", auto.exponent_sum, start.elapsed().as_secs_f64()))
}

fn ac4() -> Check {
    let cubic = adjunction_degree(3, 0, -1).map_err(|e| e.to_string())?;
    let cusp = adjunction_degree(3, 1, -1).map_err(|e| e.to_string())?;
    ensure(cubic.d_plus == -9, format!("smooth cubic {}", cubic.d_plus))?;
    ensure(cusp.d_plus == -3, format!("cuspidal cubic {}", cusp.d_plus))?;
    Ok("smooth cubic -9, cuspidal cubic -3".into())
}

fn ac5() -> Check {
    let start = Instant::now();
    let mut rows = 0;
    for q in 3..=9u32 {
        for p in 2..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let mu = ((p - 1) * (q - 1)) as i64;
            let inv = complex_singularity_invariants(p, q).map_err(|e| e.to_string())?;
            let w = torus_braid(p, q).map_err(|e| e.to_string())?;
            ensure(inv.mu == mu, format!("mu({p},{q}) = {}", inv.mu))?;
            ensure(inv.k_n == mu + p as i64 - 1, format!("kN({p},{q}) = {}", inv.k_n))?;
            ensure(w.exponent_sum() == inv.k_n, format!("e(T({p},{q})) = {}", w.exponent_sum()))?;
            ensure(slice_bennequin(&w) == 1 - mu, format!("sb(T({p},{q})) = {}", slice_bennequin(&w)))?;
            rows += 1;
        }
    }
    within(start.elapsed(), 1.0, "torus table")?;
    Ok(format!("{rows} coprime pairs, {:.3} s", start.elapsed().as_secs_f64()))
}

fn small_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let n = rng.random_range(1..=max_deg + 1);
    Poly::from_coeffs((0..n).map(|_| qi_int(rng.random_range(-3..=3))).collect())
}

fn random_holomorphic(rng: &mut ChaCha8Rng) -> DiskSpec {
    loop {
        let mut w = [Vec::new(), Vec::new()];
        for (c, terms) in w.iter_mut().enumerate() {
            for j in 1..=4u32 {
                let (a, b) = (rng.random_range(-3i64..=3), rng.random_range(-3i64..=3));
                if (a, b) != (0, 0) && (c == 0 || rng.random_bool(0.7)) {
                    terms.push(Term::new(qi(rat_int(a), rat_int(b)), j, 0));
                }
            }
        }
        let [w1, w2] = w;
        if let Ok(s) = DiskSpec::new(w1, w2, 1.0) {
            return s;
        }
    }
}

fn random_weierstrass(rng: &mut ChaCha8Rng) -> DiskSpec {
    loop {
        let (a, b, c, d) = (small_poly(rng, 1), small_poly(rng, 1), small_poly(rng, 2), small_poly(rng, 2));
        let fp = [a.mul(&c), b.mul(&d), a.mul(&d), b.mul(&c).neg()];
        if let Ok(data) = WeierstrassData::new(fp) {
            if let Ok(disk) = data.to_disk(1.0) {
                return disk;
            }
        }
    }
}

/// Pointwise curvature identities and the discrete Gauss-Bonnet and normal
/// Stokes checks.
fn ac6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sample = |rng: &mut ChaCha8Rng| Complex::from_polar(0.9 * rng.random::<f64>().sqrt(), std::f64::consts::TAU * rng.random::<f64>());
    let (mut hol, mut wei, mut worst_sum, mut worst_t) = (0, 0, 0.0f64, f64::NEG_INFINITY);
    for _ in 0..20 {
        let spec = random_holomorphic(&mut rng);
        for _ in 0..1000 {
            let Ok(b) = second_fundamental_form::<f64>(&spec, sample(&mut rng)) else { continue };
            let scale = 1.0 + b.norm_sq();
            worst_sum = worst_sum.max((b.omega_t() + b.omega_n()).abs() / scale);
            hol += 1;
        }
        let spec = random_weierstrass(&mut rng);
        for _ in 0..1000 {
            let Ok(b) = second_fundamental_form::<f64>(&spec, sample(&mut rng)) else { continue };
            worst_t = worst_t.max(b.omega_t() / (1.0 + b.norm_sq()));
            wei += 1;
        }
    }
    ensure(hol >= 19_000 && wei >= 19_000, format!("only {hol} / {wei} regular samples"))?;
    ensure(worst_sum <= 1e-8, format!("|OmegaT + OmegaN| up to {worst_sum:.2e}"))?;
    ensure(worst_t <= 1e-8, format!("OmegaT up to {worst_t:.2e} on minimal samples"))?;

    let quad = QuadratureOptions::default();
    let mixed = DiskSpec::new(
        vec![Term::int(1, 1, 0), Term::int(1, 0, 2)],
        vec![Term::int(1, 1, 1), Term::new(qi(rat(1, 2), rat(1, 3)), 3, 0)],
        1.0,
    )
    .map_err(|e| e.to_string())?;
    let specs = [
        ("graph", corpus::holomorphic_graph()),
        ("mixed", mixed),
        ("minimal t=1/2", corpus::minimal_immersed_family().at(&rat(1, 2)).map_err(|e| e.to_string())?),
    ];
    let x = [0.3, 0.1, 0.7, 0.2];
    let mut worst = 0.0f64;
    for (name, s) in &specs {
        let mut prev: Option<(f64, f64)> = None;
        for m in [64usize, 128, 256, 512] {
            let gb = gauss_bonnet_check(s, 0.3, m, &quad).map_err(|e| format!("{name}: {e}"))?.residual.abs();
            let ns = normal_stokes_check(s, 0.3, &x, m, &quad).map_err(|e| format!("{name}: {e}"))?.residual.abs();
            if let Some((g0, n0)) = prev {
                // doubling the grid should cut the residual about fourfold
                ensure(g0 / gb > 3.0 && n0 / ns > 3.0, format!("{name}: m = {m} ratios {:.2}, {:.2}", g0 / gb, n0 / ns))?;
            }
            prev = Some((gb, ns));
            if m == 512 {
                ensure(gb < 1e-3 && ns < 1e-3, format!("{name}: residuals {gb:.2e}, {ns:.2e} at m = 512"))?;
                worst = worst.max(gb).max(ns);
            }
        }
    }
    Ok(format!(
        "max |OmegaT + OmegaN| {worst_sum:.1e}, max OmegaT {worst_t:.1e}, boundary residuals <= {worst:.1e}, second order"
    ))
}

/// Adding a handle changes kT by -2 and leaves kN alone.
fn ac7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let orders: Vec<u32> = (0..rng.random_range(1..=4)).map(|_| rng.random_range(2..=9)).collect();
        let g = rng.random_range(0..=5u32);
        let (sl, dp) = (rng.random_range(-30..=30i64), rng.random_range(0..=10i64));
        let a = tangent_fallout(&orders, g).map_err(|e| e.to_string())?;
        let b = tangent_fallout(&orders, g + 1).map_err(|e| e.to_string())?;
        ensure(b - a == -2, format!("{orders:?}, g = {g}: {a} -> {b}"))?;
        ensure(normal_fallout(sl, dp) == sl - 2 * dp, "normal fallout")?;
    }
    let kt = tangent_fallout(&[4], 0).map_err(|e| e.to_string())?;
    let kt1 = tangent_fallout(&[4], 1).map_err(|e| e.to_string())?;
    ensure((kt, kt1) == (-3, -5), format!("(-3, 3) example gives {kt} -> {kt1}"))?;
    Ok("100 random inputs, -3 -> -5".into())
}

/// Reflecting the ambient orientation negates kN and fixes kT.
fn ac8() -> Check {
    let opts = AnalysisOptions::default();
    let mut notes = Vec::new();
    for (name, fam) in [("cusp", corpus::cusp_family()), ("minimal", corpus::minimal_immersed_family())] {
        let kind = FamilyKind::detect(&fam);
        let a = analyze_family(name, &fam, Some(kind), 1, &opts).map_err(|e| e.to_string())?;
        let b = analyze_family(name, &fam.reflect(), Some(reflected_kind(kind)), -1, &opts).map_err(|e| e.to_string())?;
        let checks = orientation_reversal(&a, &b, opts.tolerance);
        ensure(checks.len() >= 3, format!("{name}: only {} pipelines compared", checks.len()))?;
        for c in &checks {
            ensure(c.holds, format!("{name} {}: kT {:?}, kN {:?}", c.pipeline, c.k_t, c.k_n))?;
        }
        notes.push(format!("{name} ({} pipelines)", checks.len()));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("AC1 cusp corpus three-way agreement", ac1),
        ("AC2 minimal family", ac2),
        ("AC3 writhe-20 braid and genus bound", ac3),
        ("AC4 adjunction for cuspidal curves", ac4),
        ("AC5 torus-knot table", ac5),
        ("AC6 pointwise identities and boundary checks", ac6),
        ("AC7 handle-glue law", ac7),
        ("AC8 orientation reversal", ac8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(msg) => println!("PASS {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
