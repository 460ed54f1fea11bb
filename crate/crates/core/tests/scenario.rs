use std::path::Path;

use fallout_core::braid::BraidWord;
use fallout_core::scenario::{Settings, parse_scenario, render_braid_svg, run_scenario};

#[test]
fn svg_examples() {
    let svg = render_braid_svg(&BraidWord::parse(2, "s1^3").unwrap());
    assert_eq!(svg.matches("<line").count(), 9);
    assert!(svg.contains("<title>s1 s1 s1 (2 strands)</title>"));
    let svg = render_braid_svg(&BraidWord::empty(3));
    assert_eq!(svg.matches("<line").count(), 3);
    let w = BraidWord::parse(3, "s1 s2 s1 s2 s1 s2 s1 s2").unwrap();
    let svg = render_braid_svg(&w);
    assert_eq!(svg.matches("<line").count(), 8 * 3 + 8);
    assert_eq!(svg, render_braid_svg(&w));
}

#[test]
fn positive_crossing_draws_left_strand_over() {
    let svg = render_braid_svg(&BraidWord::parse(2, "s1").unwrap());
    // the unbroken diagonal runs from the left top to the right bottom
    assert!(svg.contains(r#"<line x1="30.0" y1="30.0" x2="70.0" y2="70.0"/>"#), "{svg}");
    let neg = render_braid_svg(&BraidWord::parse(2, "s1^-1").unwrap());
    assert!(neg.contains(r#"<line x1="70.0" y1="30.0" x2="30.0" y2="70.0"/>"#), "{neg}");
}

#[test]
fn validation_and_overrides() {
    let base = Path::new("/tmp");
    assert!(parse_scenario(r#"{"tasks": [{"kind": "slice"}]}"#, base).is_err());
    assert!(parse_scenario(r#"{"bogus": 1}"#, base).is_err());
    let sc = parse_scenario(
        r#"{"seed": 3, "surfaces": {"c": {"builtin": "cusp"}},
            "tasks": [{"kind": "invariants", "tangent_fallout": {"orders": [4], "genus": 1}},
                      {"kind": "braid", "target": "c"}]}"#,
        base,
    )
    .unwrap();
    let out = run_scenario(&sc, &Settings { seed: 99, ..Settings::default() }).unwrap();
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.seed, 3);
    assert_eq!(out.report.tasks[0].result["tangent_fallout"], -5);
    assert_eq!(out.report.tasks[1].result["exponent_sum"], 3);
    assert!(out.artifacts.is_empty());
}

#[test]
fn task_errors_are_recorded() {
    let sc = parse_scenario(
        r#"{"surfaces": {"c": {"builtin": "cusp"}},
            "tasks": [{"kind": "braid", "target": "c", "epsilon": 5.0},
                      {"kind": "invariants", "adjunction": {"degree": 3, "cusps": 1, "orientation": -1}}]}"#,
        Path::new("."),
    )
    .unwrap();
    let out = run_scenario(&sc, &Settings::default()).unwrap();
    assert_eq!(out.exit_code, 1);
    assert_eq!(out.report.tasks[0].status, "error");
    assert_eq!(out.report.tasks[1].result["adjunction"]["d_plus"], -3);
}
