use fallout_core::corpus;
use fallout_core::ingest::{SpecDocument, family_to_value, parse_document, rational_list, real_list, surface_to_value};
use fallout_core::scalar::rat;
use fallout_core::surface::FamilyKind;
use fallout_core::FalloutError;

const CUSP_FAMILY: &str = r#"{
  "domain_radius": 1,
  "parameters": ["1/25000", "1/50000"],
  "w1": [{"tpoly": [1], "j": 2, "k": 0}],
  "w2": [{"tpoly": [1], "j": 3, "k": 0}, {"tpoly": [0, 1], "j": 1, "k": 0}]
}"#;

const MINIMAL_FAMILY: &str = r#"{
  "domain_radius": 1,
  "parameters": ["1/100", "1/200"],
  "kind": "minimal",
  "w1": [
    {"tpoly": [0, 0, -1], "j": 1, "k": 0},
    {"tpoly": ["1/3"], "j": 3, "k": 0},
    {"tpoly": ["1/6"], "j": 0, "k": 6}
  ],
  "w2": [
    {"tpoly": [0, "-1/3"], "j": 3, "k": 0},
    {"tpoly": ["1/4"], "j": 4, "k": 0},
    {"tpoly": [0, "-1/4"], "j": 0, "k": 4},
    {"tpoly": ["-1/5"], "j": 0, "k": 5}
  ]
}"#;

fn family(text: &str) -> (fallout_core::surface::FamilySpec, Option<FamilyKind>) {
    match parse_document(text).unwrap() {
        SpecDocument::Family(f, k) => (f, k),
        SpecDocument::Surface(_) => panic!("parsed as a surface"),
    }
}

#[test]
fn goldens_match_the_corpus() {
    let (cusp, kind) = family(CUSP_FAMILY);
    assert_eq!(cusp, corpus::cusp_family());
    assert_eq!(kind, None);
    let (min, kind) = family(MINIMAL_FAMILY);
    assert_eq!(min, corpus::minimal_immersed_family());
    assert_eq!(kind, Some(FamilyKind::Minimal));
    assert!(min.weierstrass().is_some());
}

#[test]
fn export_round_trips() {
    for s in [corpus::plane(), corpus::cusp(), corpus::torus_knot_minimal_disk(), corpus::writhe_twenty_disk(&corpus::default_alpha())] {
        let text = serde_json::to_string(&surface_to_value(&s)).unwrap();
        match parse_document(&text).unwrap() {
            SpecDocument::Surface(back) => assert_eq!(back, s),
            _ => panic!("not a surface"),
        }
    }
    for f in [corpus::cusp_family(), corpus::minimal_immersed_family(), corpus::complex_family(3, 4, vec![rat(1, 7)])] {
        let text = serde_json::to_string(&family_to_value(&f)).unwrap();
        assert_eq!(family(&text).0, f);
    }
}

#[test]
fn builtins_and_weierstrass_input() {
    let SpecDocument::Surface(s) = parse_document(r#"{"builtin": "torus_curve", "p": 2, "q": 3}"#).unwrap() else { panic!() };
    assert_eq!(s, corpus::cusp());
    let w = r#"{"weierstrass": {"f1p": [{"re": 1, "j": 2}], "f2p": [{"re": 1, "j": 5}], "f3p": [{"re": 1, "j": 3}], "f4p": [{"re": -1, "j": 4}]}}"#;
    let SpecDocument::Surface(s) = parse_document(w).unwrap() else { panic!() };
    assert_eq!(s, corpus::torus_knot_minimal_disk());
    let (f, _) = family(r#"{"builtin": "cusp_family"}"#);
    assert_eq!(f, corpus::cusp_family());
}

#[test]
fn exact_numbers() {
    assert_eq!(rational_list("0.1, 1/3,-2").unwrap(), vec![rat(1, 10), rat(1, 3), rat(-2, 1)]);
    assert_eq!(real_list("0.02,0.01").unwrap(), vec![0.02, 0.01]);
    assert!(rational_list("1/0").is_err());
    assert!(real_list("x").is_err());
}

#[test]
fn errors_name_the_field() {
    let cases = [
        (r#"{"w1": [{"re": 1, "j": 1, "k": 0}], "w3": []}"#, "w3"),
        (r#"{"w1": [{"re": "a", "j": 1, "k": 0}]}"#, "$.w1[0]"),
        (r#"{"w1": [{"re": 1, "j": 1, "k": 0}], "w2": [{"re": 1, "j": -1, "k": 0}]}"#, "$.w2[0].j"),
        (r#"{"parameters": [], "w1": [{"tpoly": [1], "j": 1, "k": 0}]}"#, "$.parameters"),
        (r#"{"builtin": "nope"}"#, "$.builtin"),
    ];
    for (text, needle) in cases {
        let e = parse_document(text).unwrap_err();
        assert!(e.to_string().contains(needle), "{text}: {e}");
    }
    match parse_document("{\n  \"w1\": [\n") {
        Err(FalloutError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}
