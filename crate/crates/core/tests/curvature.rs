use fallout_core::corpus;
use fallout_core::curvature::{curvature_densities, integrate_fallout, second_fundamental_form};
use fallout_core::exact::{Poly, qi_int};
use fallout_core::quadrature::QuadratureOptions;
use fallout_core::scalar::rat;
use fallout_core::surface::{FamilySpec, FamilyTerm, WeierstrassData};
use fallout_core::twistor::lift_area;
use num_complex::Complex;
use proptest::prelude::*;

#[test]
fn plane_and_graph_densities() {
    let (t, n) = curvature_densities::<f64>(&corpus::plane(), Complex::new(0.2, 0.1)).unwrap();
    assert_eq!((t, n), (0.0, 0.0));
    // (z, z^2) has Gauss curvature -4 |w''|^2 / (1 + |w'|^2)^3 at z = 0
    let b = second_fundamental_form::<f64>(&corpus::holomorphic_graph(), Complex::new(0.0, 0.0)).unwrap();
    assert!((b.omega_t() + 8.0).abs() < 1e-12, "{}", b.omega_t());
    assert!((b.omega_n() - 8.0).abs() < 1e-12, "{}", b.omega_n());
    assert!(second_fundamental_form::<f64>(&corpus::cusp(), Complex::new(0.0, 0.0)).is_err());
}

#[test]
fn fixed_immersed_family_has_no_fallout() {
    let graph = corpus::holomorphic_graph();
    let lift = |ts: &[fallout_core::surface::Term]| -> Vec<FamilyTerm> {
        ts.iter().map(|t| FamilyTerm { coeff: Poly::constant(t.coeff.clone()), phase: t.phase.clone(), j: t.j, k: t.k }).collect()
    };
    let fam = FamilySpec::new(lift(&graph.w[0]), lift(&graph.w[1]), 1.0, vec![rat(1, 100), rat(1, 200)]).unwrap();
    let e = integrate_fallout(&fam, &[0.02, 0.01], &fam.parameter_values, &QuadratureOptions::default()).unwrap();
    assert!(e.k_t.abs() < 1e-3 && e.k_n.abs() < 1e-3, "({}, {})", e.k_t, e.k_n);
}

#[test]
fn second_fundamental_form_stays_bounded_along_families() {
    let q = QuadratureOptions::default();
    for (fam, eps) in [(corpus::cusp_family(), 0.3), (corpus::minimal_immersed_family(), 0.3)] {
        let mut vals = Vec::new();
        for n in [10i64, 100, 1000] {
            let member = fam.at(&rat(1, n)).unwrap();
            vals.push(lift_area(&member, eps, &q).unwrap().b_l2);
        }
        let lim = lift_area(&fam.limit().unwrap(), eps, &q).unwrap().b_l2;
        // the L2 norm converges to the limit value plus a bounded bubble
        assert!(vals.iter().all(|v| v.is_finite() && *v < 4.0 * lim + 100.0), "{vals:?} vs {lim}");
        assert!((vals[2] - vals[1]).abs() <= 0.25 * vals[1].max(1.0), "{vals:?}");
    }
}

fn small_poly(cs: &[i64]) -> Poly {
    Poly::from_coeffs(cs.iter().map(|&a| qi_int(a)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimal_disks_are_minimal_with_nonpositive_curvature(
        a in prop::collection::vec(-3i64..=3, 1..3),
        b in prop::collection::vec(-3i64..=3, 1..3),
        c in prop::collection::vec(-3i64..=3, 1..4),
        d in prop::collection::vec(-3i64..=3, 1..4),
        zr in -0.6f64..0.6, zi in -0.6f64..0.6,
    ) {
        let (a, b, c, d) = (small_poly(&a), small_poly(&b), small_poly(&c), small_poly(&d));
        let fp = [a.mul(&c), b.mul(&d), a.mul(&d), b.mul(&c).neg()];
        let Ok(data) = WeierstrassData::new(fp) else { return Ok(()) };
        let Ok(disk) = data.to_disk(1.0) else { return Ok(()) };
        let Ok(sff) = second_fundamental_form::<f64>(&disk, Complex::new(zr, zi)) else { return Ok(()) };
        let scale = 1.0 + sff.norm_sq();
        let h = sff.trace();
        prop_assert!(h[0].abs() + h[1].abs() < 1e-8 * scale);
        prop_assert!(sff.omega_t() <= 1e-10 * scale);
        // equality only where B vanishes
        if sff.omega_t().abs() < 1e-12 * scale {
            prop_assert!(sff.norm_sq() < 1e-6 * scale);
        }
    }
}
