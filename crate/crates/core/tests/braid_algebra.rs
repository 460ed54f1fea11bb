use fallout_core::braid::{Band, BraidWord, qp_compose, slice_bennequin, syntactic_qp_bands, torus_braid};
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn parse_and_display() {
    let w = BraidWord::parse(3, "s1^2 s2^-1 s1").unwrap();
    assert_eq!(w.letters, vec![1, 1, -2, 1]);
    assert_eq!(w.to_string(), "s1 s1 s2^-1 s1");
    assert_eq!(BraidWord::parse(3, &w.to_string()).unwrap(), w);
    assert_eq!(w.exponent_sum(), 2);
    assert!(BraidWord::parse(2, "s2").is_err());
    assert!(BraidWord::parse(2, "x1").is_err());
    assert!(BraidWord::parse(2, "s0").is_err());
    assert!(BraidWord::empty(3).is_empty());
}

#[test]
fn closure_components() {
    assert_eq!(BraidWord::parse(2, "s1^3").unwrap().components(), 1);
    assert_eq!(BraidWord::parse(2, "s1^2").unwrap().components(), 2);
    assert_eq!(BraidWord::empty(3).components(), 3);
    assert_eq!(BraidWord::parse(3, "s1 s2").unwrap().components(), 1);
}

#[test]
fn torus_braid_examples() {
    let t = torus_braid(2, 3).unwrap();
    assert_eq!(t.to_string(), "s1 s1 s1");
    assert_eq!(slice_bennequin(&t), -1);
    let t = torus_braid(3, 4).unwrap();
    assert_eq!((t.strands, t.exponent_sum(), t.components()), (3, 8, 1));
    for p in 2..=12u32 {
        for q in 2..=12u32 {
            let t = torus_braid(p, q).unwrap();
            assert_eq!(t.components() as u32, p.gcd(&q), "T({p},{q})");
            assert_eq!(t.exponent_sum(), ((p - 1) * q) as i64);
            if p.gcd(&q) == 1 {
                assert_eq!(slice_bennequin(&t), 1 - ((p - 1) * (q - 1)) as i64);
            }
        }
    }
}

#[test]
fn syntactic_quasipositivity() {
    let w = BraidWord::parse(3, "s1 s2 s1^-1 s2").unwrap();
    let bands = syntactic_qp_bands(&w).expect("conjugate of s2 by s1 times s2");
    assert_eq!(qp_compose(3, &bands).unwrap(), w);
    assert!(syntactic_qp_bands(&BraidWord::parse(2, "s1^-1").unwrap()).is_none());
    assert_eq!(syntactic_qp_bands(&BraidWord::empty(2)).unwrap().len(), 0);
}

fn word(strands: u32) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..strands as i32, any::<bool>()), 0..12)
        .prop_map(move |v| BraidWord::new(strands, v.into_iter().map(|(i, s)| if s { i } else { -i }).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bands_have_unit_exponent(
        strands in 2u32..6,
        raw in prop::collection::vec((prop::collection::vec((1i32..6, any::<bool>()), 0..6), 1u32..6), 0..8),
    ) {
        let bands: Vec<Band> = raw
            .into_iter()
            .map(|(c, g)| {
                let letters = c.into_iter().map(|(i, s)| { let i = 1 + (i - 1) % (strands as i32 - 1); if s { i } else { -i } }).collect();
                Band { conjugator: BraidWord::new(strands, letters).unwrap(), generator: 1 + (g - 1) % (strands - 1) }
            })
            .collect();
        let w = qp_compose(strands, &bands).unwrap();
        prop_assert_eq!(w.exponent_sum(), bands.len() as i64);
        prop_assert!(syntactic_qp_bands(&w).is_some());
    }

    #[test]
    fn exponent_sum_is_a_conjugacy_invariant(w in word(4), g in word(4)) {
        let c = w.conjugate(&g).unwrap();
        prop_assert_eq!(c.exponent_sum(), w.exponent_sum());
        prop_assert_eq!(c.free_reduce().exponent_sum(), w.exponent_sum());
        prop_assert_eq!(c.components(), w.components());
        let padded = g.concat(&g.inverse()).unwrap().concat(&w).unwrap();
        prop_assert_eq!(padded.free_reduce().exponent_sum(), w.exponent_sum());
        prop_assert!(padded.free_reduce().len() <= w.len());
    }
}
