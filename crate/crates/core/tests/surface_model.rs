use fallout_core::corpus;
use fallout_core::exact::{Poly, RationalFunction, qi_int, qi_real};
use fallout_core::linalg::{dist, dot, norm};
use fallout_core::scalar::{rat, rat_int};
use fallout_core::surface::{DiskSpec, Term, WeierstrassData, branching_data, eval_derivatives, eval_disk};
use fallout_core::{Dd, FalloutError, Real};
use num_complex::Complex;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn eval_examples() {
    assert_eq!(eval_disk(&corpus::cusp(), c(1.0, 0.0)).unwrap(), [1.0, 0.0, 1.0, 0.0]);
    let p = eval_disk(&corpus::torus_knot_minimal_disk(), c(1.0, 0.0)).unwrap();
    assert!(dist(&p, &[0.5, 0.0, 0.05, 0.0]) < 1e-15, "{p:?}");
    for s in [corpus::cusp(), corpus::plane(), corpus::writhe_twenty_disk(&corpus::default_alpha())] {
        assert_eq!(eval_disk(&s, c(0.0, 0.0)).unwrap(), [0.0; 4]);
    }
    assert!(matches!(eval_disk(&corpus::cusp(), c(1.5, 0.0)), Err(FalloutError::Input(_))));
}

#[test]
fn derivative_examples() {
    let j = eval_derivatives(&corpus::cusp(), c(0.0, 0.0)).unwrap();
    assert_eq!(j.fx, [0.0; 4]);
    assert_eq!(j.fy, [0.0; 4]);
    let j = eval_derivatives(&corpus::plane(), c(0.3, -0.2)).unwrap();
    assert_eq!(j.fx, [1.0, 0.0, 0.0, 0.0]);
    assert_eq!(j.fy, [0.0, 1.0, 0.0, 0.0]);
    for n in [10i64, 50, 200] {
        let member = corpus::minimal_immersed_family().at(&rat(1, n)).unwrap();
        let z = c(1.0 / n as f64, 0.0);
        let j = eval_derivatives(&member, z).unwrap();
        let d = member.numeric::<f64>();
        let (lo, hi) = d.singular_values(z);
        assert!(lo > 0.0 && lo > 1e-6 * hi, "t = 1/{n}: {lo} {hi}");
        assert!(norm(&j.fx) > 0.0);
    }
}

#[test]
fn scaled_evaluation_survives_high_exponents() {
    let s = DiskSpec::new(vec![Term::int(1, 128, 0)], vec![], 1.0).unwrap();
    let d = s.numeric::<f64>();
    let z = c(1e-3 * 0.6, 1e-3 * 0.8);
    assert_eq!(d.eval(z), [0.0; 4]);
    let (m, log_scale) = d.eval_scaled(z);
    assert!((norm(&m) - 1.0).abs() < 1e-12);
    assert!((log_scale - 128.0 * (1e-3f64).ln()).abs() < 1e-9);
}

#[test]
fn branching_examples() {
    let b = branching_data::<f64>(&corpus::cusp()).unwrap();
    assert_eq!(b.n, 2);
    assert!(dist(&b.frame.e[0], &[1.0, 0.0, 0.0, 0.0]) < 1e-15);
    assert!(dist(&b.frame.e[1], &[0.0, 1.0, 0.0, 0.0]) < 1e-15);
    assert_eq!(branching_data::<f64>(&corpus::writhe_twenty_disk(&corpus::default_alpha())).unwrap().n, 3);
    let bad = DiskSpec::new(vec![Term::int(1, 0, 2)], vec![], 1.0).unwrap();
    assert!(matches!(branching_data::<f64>(&bad), Err(FalloutError::NotPositivelyBranched(_))));
    let rotated = DiskSpec::new(vec![Term::int(1, 2, 0), Term::int(1, 5, 0)], vec![Term::new(qi_real(rat(1, 1)) * qi_int(1), 2, 0)], 1.0).unwrap();
    let b = branching_data::<f64>(&rotated).unwrap();
    assert!(b.frame.orthonormality_error() < 1e-14);
    assert!((b.frame.det() - 1.0).abs() < 1e-14);
}

#[test]
fn leading_coefficient_along_rays() {
    for spec in [corpus::cusp(), corpus::torus_knot_minimal_disk(), corpus::writhe_twenty_disk(&corpus::default_alpha())] {
        let b = branching_data::<f64>(&spec).unwrap();
        let d = spec.numeric::<f64>();
        let mut lead = [Complex::new(0.0, 0.0); 2];
        for (i, t) in spec.terms() {
            if t.degree() == b.n {
                lead[i] = t.numeric::<f64>();
            }
        }
        for k in 0..8 {
            let u = Complex::from_polar(1.0, k as f64 * 0.785398 + 0.1);
            let mut last = f64::INFINITY;
            for r in [1e-2, 1e-3, 1e-4] {
                let z = u * r;
                let p = d.eval(z);
                let zn = z.powu(b.n);
                let w1 = Complex::new(p[0], p[1]) / zn;
                let w2 = Complex::new(p[2], p[3]) / zn;
                let err = (w1 - lead[0]).norm() + (w2 - lead[1]).norm();
                assert!(err <= last + 1e-15);
                last = err;
            }
            assert!(last < 1e-3, "{last}");
        }
    }
}

#[test]
fn weierstrass_to_disk_examples() {
    let disk = corpus::torus_knot_weierstrass().to_disk(1.0).unwrap();
    let expect = DiskSpec::new(
        vec![Term::new(qi_real(rat(1, 3)), 3, 0), Term::new(qi_real(rat(1, 6)), 0, 6)],
        vec![Term::new(qi_real(rat(1, 4)), 4, 0), Term::new(qi_real(rat(-1, 5)), 0, 5)],
        1.0,
    )
    .unwrap();
    assert_eq!(disk, expect);
    let flat = WeierstrassData::new([Poly::one(), Poly::zero(), Poly::zero(), Poly::zero()]).unwrap();
    assert_eq!(flat.to_disk(1.0).unwrap(), corpus::plane());
    let fam = corpus::minimal_immersed_family();
    for n in [20i64, 100] {
        fam.immersion_check(&rat(1, n), 0.5, 1e-10).unwrap();
    }
    let err = WeierstrassData::new([Poly::one(), Poly::one(), Poly::zero(), Poly::zero()]).unwrap_err();
    assert!(err.to_string().contains("z^0"), "{err}");
}

#[test]
fn gauss_map_examples() {
    let (gp, gm) = corpus::torus_knot_weierstrass().gauss_maps().unwrap();
    assert_eq!(gp, RationalFunction::new(Poly::one(), Poly::monomial(qi_int(1), 2)).unwrap());
    assert_eq!(gm, RationalFunction::new(Poly::one(), Poly::monomial(qi_int(1), 1)).unwrap());
    for n in [1i64, 3, 10, 1000] {
        let t = rat(1, n);
        let (gp, gm) = corpus::minimal_immersed_weierstrass().at(&t).gauss_maps().unwrap();
        let tq = qi_real(t.clone());
        assert_eq!(gp.num, Poly::from_coeffs(vec![-tq.clone(), qi_int(1)]));
        assert_eq!(gp.den, Poly::monomial(qi_int(1), 3));
        assert_eq!(gm.num, Poly::from_coeffs(vec![tq, qi_int(1)]));
        assert_eq!(gm.den, Poly::monomial(qi_int(1), 2));
    }
    // (1, 1, c, -c) is conformal only for c^2 = 1; (-c, 1, c, 1) works for any c.
    for cst in [qi_int(1), qi_int(-1)] {
        let d = WeierstrassData::new([Poly::one(), Poly::one(), Poly::constant(cst.clone()), Poly::constant(-cst.clone())]).unwrap();
        let (gp, _) = d.gauss_maps().unwrap();
        assert!(gp.is_constant());
        assert_eq!(gp.num, Poly::constant(cst));
    }
    let cst = qi_real(rat(2, 7));
    let d = WeierstrassData::new([Poly::constant(-cst.clone()), Poly::one(), Poly::constant(cst.clone()), Poly::one()]).unwrap();
    let (gp, _) = d.gauss_maps().unwrap();
    assert!(gp.is_constant());
    assert_eq!(gp.num, Poly::constant(cst));
}

#[test]
fn holomorphic_gauss_map_is_constant_infinity() {
    let w = corpus::cusp_family().weierstrass().unwrap();
    let (gp, gm) = w.gauss_maps().unwrap();
    let t = rat(1, 10);
    let gp = gp.at(&t).unwrap();
    assert!(gp.den.is_zero());
    let gm = gm.at(&t).unwrap();
    // 2z / (3z^2 + t), the reciprocal chart of (3z^2 + t)/(2z)
    let expect = RationalFunction::new(Poly::monomial(qi_int(2), 1), Poly::from_coeffs(vec![qi_real(t), qi_int(0), qi_int(3)])).unwrap();
    assert_eq!(gm, expect);
}

#[test]
fn double_double_evaluation_agrees() {
    let s = corpus::writhe_twenty_disk(&corpus::default_alpha());
    let z64 = c(0.71, 0.33);
    let a = s.numeric::<f64>().eval(z64);
    let b = s.numeric::<Dd>().eval(Complex::new(Dd::lit(0.71), Dd::lit(0.33)));
    for i in 0..4 {
        assert!((a[i] - b[i].to_f64_lossy()).abs() < 1e-14, "{i}: {} vs {}", a[i], b[i]);
    }
}

fn small_poly(cs: &[i64]) -> Poly {
    Poly::from_coeffs(cs.iter().map(|&a| qi_int(a)).collect())
}

fn random_weierstrass(a: &[i64], b: &[i64], c2: &[i64], d: &[i64]) -> Option<WeierstrassData> {
    let (a, b, cc, d) = (small_poly(a), small_poly(b), small_poly(c2), small_poly(d));
    let fp = [a.mul(&cc), b.mul(&d), a.mul(&d), b.mul(&cc).neg()];
    if fp.iter().all(|p| p.is_zero()) {
        return None;
    }
    WeierstrassData::new(fp).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weierstrass_disks_are_conformal(
        a in prop::collection::vec(-3i64..=3, 1..3),
        b in prop::collection::vec(-3i64..=3, 1..3),
        c2 in prop::collection::vec(-3i64..=3, 1..4),
        d in prop::collection::vec(-3i64..=3, 1..4),
        zr in -0.6f64..0.6, zi in -0.6f64..0.6,
    ) {
        let Some(data) = random_weierstrass(&a, &b, &c2, &d) else { return Ok(()); };
        let disk = data.to_disk(1.0).unwrap();
        let j = eval_derivatives(&disk, c(zr, zi)).unwrap();
        let scale = dot(&j.fx, &j.fx).max(1e-300);
        prop_assert!((dot(&j.fx, &j.fx) - dot(&j.fy, &j.fy)).abs() <= 1e-9 * scale);
        prop_assert!(dot(&j.fx, &j.fy).abs() <= 1e-9 * scale);
        prop_assert!(disk.weierstrass().is_some());
    }

    #[test]
    fn jet_matches_finite_differences(
        cs in prop::collection::vec((-3i64..=3, -3i64..=3, 0u32..4, 0u32..4), 1..5),
        zr in -0.5f64..0.5, zi in -0.5f64..0.5,
    ) {
        let mut w1 = Vec::new();
        let mut w2 = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, (re, im, j, k)) in cs.iter().enumerate() {
            if (*re == 0 && *im == 0) || j + k == 0 || !seen.insert((i % 2, *j, *k)) { continue; }
            let t = Term::new(fallout_core::exact::qi(rat_int(*re), rat_int(*im)), *j, *k);
            if i % 2 == 0 { w1.push(t) } else { w2.push(t) }
        }
        let Ok(spec) = DiskSpec::new(w1, w2, 1.0) else { return Ok(()); };
        let d = spec.numeric::<f64>();
        let z = c(zr, zi);
        let j = d.jet(z);
        let h = 1e-5;
        for (an, dir) in [(j.fx, c(h, 0.0)), (j.fy, c(0.0, h))] {
            let fd: [f64; 4] = std::array::from_fn(|i| (d.eval(z + dir)[i] - d.eval(z - dir)[i]) / (2.0 * h));
            prop_assert!(dist(&fd, &an) < 1e-6 * (1.0 + norm(&an)));
        }
        for (an, dir, base) in [(j.fxx, c(h, 0.0), j.fx), (j.fyy, c(0.0, h), j.fy)] {
            let _ = base;
            let fd: [f64; 4] = std::array::from_fn(|i| (d.eval(z + dir)[i] - 2.0 * d.eval(z)[i] + d.eval(z - dir)[i]) / (h * h));
            prop_assert!(dist(&fd, &an) < 1e-3 * (1.0 + norm(&an)));
        }
        let gx: [f64; 4] = std::array::from_fn(|i| (d.jet(z + c(0.0, h)).fx[i] - d.jet(z - c(0.0, h)).fx[i]) / (2.0 * h));
        prop_assert!(dist(&gx, &j.fxy) < 1e-6 * (1.0 + norm(&j.fxy)));
    }
}
