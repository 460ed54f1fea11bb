use fallout_core::FalloutError;
use fallout_core::braid::torus_braid;
use fallout_core::invariants::{
    Verdict, adjunction_degree, complex_singularity_invariants, genus_bound, main_inequality_report, normal_fallout, tangent_fallout,
};
use fallout_core::surface::FamilyKind;
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn tangent_fallout_examples() {
    assert_eq!(tangent_fallout(&[2], 0).unwrap(), -1);
    assert_eq!(tangent_fallout(&[3], 0).unwrap(), -2);
    assert_eq!(tangent_fallout(&[2, 2], 0).unwrap(), -4);
    assert_eq!(tangent_fallout(&[4], 1).unwrap(), -5);
    assert!(tangent_fallout(&[], 0).is_err());
    assert!(tangent_fallout(&[1], 0).is_err());
    assert_eq!(normal_fallout(3, 1), 1);
    assert_eq!(normal_fallout(8, 4), 0);
}

#[test]
fn inequality_verdicts() {
    let r = |kt, kn, kind| main_inequality_report(kt, kn, kind, 1e-9).unwrap();
    assert_eq!(r(-1.0, 1.0, FamilyKind::Complex).verdict, Verdict::EqualityPlus);
    assert!(r(-1.0, 1.0, FamilyKind::Complex).matches_expected);
    assert_eq!(r(-1.0, -1.0, FamilyKind::LeftSuperminimal).verdict, Verdict::EqualityMinus);
    assert!(!r(-1.0, -1.0, FamilyKind::Complex).matches_expected);
    let s = r(-2.0, 0.0, FamilyKind::Minimal);
    assert_eq!(s.verdict, Verdict::Strict);
    assert!(s.matches_expected);
    assert_eq!(r(-1.0, 3.0, FamilyKind::Generic).verdict, Verdict::Violation);
    assert_eq!(r(0.0, 0.0, FamilyKind::Generic).verdict.as_str(), "equality_plus");
    assert!(r(0.0, 0.0, FamilyKind::Generic).both_equalities);
    assert!(matches!(main_inequality_report(1.0, 0.0, FamilyKind::Generic, 1e-9), Err(FalloutError::Input(_))));
}

#[test]
fn genus_bound_examples() {
    assert_eq!(genus_bound(20, &[3]), 9);
    assert_eq!(genus_bound(3, &[2]), 1);
    assert_eq!(genus_bound(0, &[2]), 0);
    assert_eq!(genus_bound(8, &[3]), 3);
}

#[test]
fn complex_singularity_examples() {
    let c = complex_singularity_invariants(2, 3).unwrap();
    assert_eq!((c.mu, c.chi_fiber, c.k_t, c.k_n), (2, -1, -3, 3));
    assert_eq!(c.braid.to_string(), "s1 s1 s1");
    assert!(matches!(complex_singularity_invariants(3, 2), Err(FalloutError::Input(_))));
    assert!(matches!(complex_singularity_invariants(2, 4), Err(FalloutError::Scope(_))));
}

#[test]
fn adjunction_examples() {
    assert_eq!(adjunction_degree(3, 0, -1).unwrap().d_plus, -9);
    assert_eq!(adjunction_degree(3, 1, -1).unwrap().d_plus, -3);
    let conic = adjunction_degree(2, 0, 1).unwrap();
    assert_eq!((conic.genus_normalization, conic.c1_tangent, conic.c1_normal, conic.d_plus), (0, 2, 4, 6));
    assert_eq!(adjunction_degree(1, 0, 1).unwrap().d_plus, 3);
    assert!(matches!(adjunction_degree(5, 0, 1), Err(FalloutError::Scope(_))));
    assert!(matches!(adjunction_degree(3, 2, 1), Err(FalloutError::Scope(_))));
    assert!(adjunction_degree(3, 0, 0).is_err());
}

#[test]
fn corpus_values_never_violate() {
    for (kt, kn, kind) in [(-1.0, 1.0, FamilyKind::Complex), (-2.0, 0.0, FamilyKind::Minimal), (-1.0, -1.0, FamilyKind::Complex)] {
        let r = main_inequality_report(kt, kn, kind, 1e-9).unwrap();
        assert_ne!(r.verdict, Verdict::Violation);
    }
}

#[test]
fn torus_identities_up_to_twelve() {
    for q in 3..=12u32 {
        for p in 2..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let c = complex_singularity_invariants(p, q).unwrap();
            let w = torus_braid(p, q).unwrap();
            assert_eq!(c.k_n, w.exponent_sum());
            assert_eq!(c.k_n, c.mu + p as i64 - 1);
            assert_eq!(c.k_t, -c.k_n);
        }
    }
}

proptest! {
    #[test]
    fn handle_glue_lowers_tangent_fallout_by_two(
        orders in prop::collection::vec(2u32..12, 1..6),
        g in 0u32..8,
        sl in -40i64..40, dp in 0i64..12,
    ) {
        let a = tangent_fallout(&orders, g).unwrap();
        let b = tangent_fallout(&orders, g + 1).unwrap();
        prop_assert_eq!(b - a, -2);
        prop_assert_eq!(normal_fallout(sl, dp), sl - 2 * dp);
    }

    #[test]
    fn verdict_is_consistent_with_the_sums(kt in -10i64..=0, kn in -10i64..=10) {
        let r = main_inequality_report(kt as f64, kn as f64, FamilyKind::Generic, 1e-9).unwrap();
        let (p, m) = (kn + kt, kn - kt);
        let want = if p > 0 || m < 0 {
            Verdict::Violation
        } else if p == 0 {
            Verdict::EqualityPlus
        } else if m == 0 {
            Verdict::EqualityMinus
        } else {
            Verdict::Strict
        };
        prop_assert_eq!(r.verdict, want);
    }
}
