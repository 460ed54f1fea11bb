use fallout_core::corpus;
use fallout_core::linalg::Vec4;
use fallout_core::pipeline::{AnalysisOptions, twistor_pipeline};
use fallout_core::scalar::rat;
use fallout_core::twistor::{DefectOptions, current_class, plane_to_spheres, self_wedge, spheres_to_plane, vertical_defect, wedge};
use proptest::prelude::*;

#[test]
fn sphere_pairs_of_coordinate_planes() {
    let e = |i: usize| -> Vec4<f64> { std::array::from_fn(|k| if k == i { 1.0 } else { 0.0 }) };
    let s = plane_to_spheres(&wedge(&e(0), &e(1))).unwrap();
    assert_eq!(s.jplus, [1.0, 0.0, 0.0]);
    assert_eq!(s.jminus, [1.0, 0.0, 0.0]);
    // reversing the orientation of R^4 flips e4: jplus and jminus trade places
    let s2 = plane_to_spheres(&wedge(&e(2), &e(3))).unwrap();
    assert_eq!(s2.jplus, [1.0, 0.0, 0.0]);
    assert_eq!(s2.jminus, [-1.0, 0.0, 0.0]);
    let not_simple = [0.5f64.sqrt(), 0.0, 0.0, 0.0, 0.0, 0.5f64.sqrt()];
    assert!(self_wedge(&not_simple) > 0.1);
    assert!(plane_to_spheres(&not_simple).is_err());
    assert!(plane_to_spheres(&[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
}

#[test]
fn current_class_examples() {
    let c = current_class(0.0, 1.0).unwrap();
    assert_eq!((c.k_t, c.k_n), (-1, 1));
    let c = current_class(1.0, 1.0).unwrap();
    assert_eq!((c.k_t, c.k_n), (-2, 0));
    let c = current_class(0.98, 0.01).unwrap();
    assert_eq!((c.n_plus, c.n_minus), (1, 0));
    assert!(current_class(0.5, 0.0).is_err());
}

#[test]
fn holomorphic_families_have_no_plus_defect() {
    let opts = DefectOptions { quadrature: false, ..DefectOptions::default() };
    for fam in [corpus::cusp_family(), corpus::complex_family(2, 5, vec![rat(1, 1000), rat(1, 2000)])] {
        let (gp, _) = fam.weierstrass().unwrap().gauss_maps().unwrap();
        let r = vertical_defect(&gp, &fam.parameter_values, &[0.1, 0.05], &opts).unwrap();
        assert_eq!(r.exact, 0);
        assert!(r.defect.abs() < 1e-9);
    }
}

#[test]
fn reflection_swaps_the_defects() {
    let fam = corpus::cusp_family();
    let opts = AnalysisOptions::default();
    let a = twistor_pipeline(&fam, &fam.parameter_values, &opts).unwrap();
    let b = twistor_pipeline(&fam.reflect(), &fam.parameter_values, &opts).unwrap();
    assert_eq!((a.plus.exact, a.minus.exact), (0, 1));
    assert_eq!((b.plus.exact, b.minus.exact), (1, 0));
    let (ca, cb) = (a.class.unwrap(), b.class.unwrap());
    assert_eq!((ca.k_t, ca.k_n), (cb.k_t, -cb.k_n));
}

fn unit(v: Vec4<f64>) -> Option<Vec4<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 1e-3).then(|| v.map(|x| x / n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sphere_pair_round_trip(u in prop::array::uniform4(-1.0f64..1.0), v in prop::array::uniform4(-1.0f64..1.0)) {
        let Some(a) = unit(u) else { return Ok(()) };
        let d: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
        let Some(b) = unit(std::array::from_fn(|i| v[i] - d * a[i])) else { return Ok(()) };
        let p = wedge(&a, &b);
        let s = plane_to_spheres(&p).unwrap();
        let n = |x: [f64; 3]| x.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!((n(s.jplus) - 1.0).abs() < 1e-10 && (n(s.jminus) - 1.0).abs() < 1e-10);
        let back = spheres_to_plane(&s);
        let err = back.iter().zip(&p).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10, "round trip error {err}");
    }
}
