use proptest::prelude::*;
use serde_json::Value as Json;

use systole_cli::output::parse_exact_json;
use systole_cli::parser::{build, parse_space, Descriptor};
use systole_cli::run_capture;
use systole_core::catalog::{self, WeightedKind};
use systole_core::num::q;
use systole_core::pi_scaled::PiScaled;

#[test]
fn descriptor_examples() {
    let d = parse_space("CP(3) * S1").unwrap();
    assert_eq!(d, Descriptor::Product(Box::new(Descriptor::ProjectiveSpace(3)), Box::new(Descriptor::Circle)));
    let built = build(&d).unwrap();
    let direct = catalog::product(&catalog::projective_space(3).unwrap(), &catalog::circle().unwrap()).unwrap();
    assert_eq!(built, direct);

    let d = parse_space("CI(degrees=[[3]]; ambient=[4])").unwrap();
    let cubic = build(&d).unwrap();
    assert_eq!(cubic.real_dim, 6);
    assert_eq!(cubic.fano_index, Some(2));

    let d = parse_space("CP(-1)").unwrap();
    assert!(build(&d).is_err());
}

#[test]
fn parse_errors_report_offsets() {
    let e = parse_space("CP(3) * ").unwrap_err();
    assert_eq!(e.offset, 8);
    let e = parse_space("Q(4").unwrap_err();
    assert_eq!(e.offset, 3);
    assert!(e.expected.contains("`)`"), "{:?}", e.expected);
    assert!(parse_space("Foo(2)").is_err());
}

fn leaf() -> impl Strategy<Value = Descriptor> {
    prop_oneof![
        (1i64..9).prop_map(Descriptor::ProjectiveSpace),
        (2i64..9).prop_map(Descriptor::Quadric),
        (2i64..9).prop_map(Descriptor::Sphere),
        Just(Descriptor::Circle),
        (2i64..6).prop_map(Descriptor::BlowupPoint),
        ((1i64..4), (2i64..6)).prop_map(|(degree, n)| Descriptor::BlowupHypersurface { degree, n }),
        (1i64..8).prop_map(Descriptor::GrassmannianSection),
        (1i64..8).prop_map(|n| Descriptor::Weighted { kind: WeightedKind::QuarticP12, n }),
        (prop::collection::vec(prop::collection::vec(1i64..4, 1..3), 1..3)).prop_map(|rows| {
            let m = rows[0].len();
            let degrees: Vec<Vec<i64>> = rows.into_iter().map(|mut r| {
                r.resize(m, 1);
                r
            }).collect();
            Descriptor::CompleteIntersection { degrees, ambient: vec![5; m] }
        }),
        (prop::collection::vec(-2i64..4, 1..4), 0i64..3).prop_map(|(degrees, genus)| Descriptor::ProjectiveBundle { degrees, genus }),
    ]
}

fn descriptor() -> impl Strategy<Value = Descriptor> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Descriptor::Product(Box::new(a), Box::new(b))),
            (inner, -3i64..4).prop_map(|(d, k)| Descriptor::Twist(Box::new(d), k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(d in descriptor()) {
        let text = d.to_string();
        let parsed = parse_space(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&parsed, &d);
        prop_assert_eq!(parsed.to_string(), text);
    }
}

#[test]
fn documented_commands() {
    let (code, out, _) = run_capture(&["bound", "--space", "CP(3)", "--theorem", "prop5.1"], "");
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("bound") && l.trim_end().ends_with("48 * pi")), "{out}");

    let (code, out, _) = run_capture(&["length", "--space", "Q(4)"], "");
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["length", "4"]), "{out}");

    let (code, out, _) = run_capture(&["phi-sup", "--space", "BlP(3)"], "");
    assert_eq!(code, 0);
    assert!(out.contains("UNBOUNDED") && out.contains("H - E"), "{out}");
}

#[test]
fn json_round_trips_exact_values() {
    let (code, out, _) = run_capture(&["--format", "json", "--approx", "5", "bound", "--space", "CP(3)", "--factor", "S1", "--theorem", "thm1.3"], "");
    assert_eq!(code, 0);
    let doc: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(parse_exact_json(&doc["bound"]), Some(PiScaled::new(q(48), 1)));
    assert_eq!(doc["bound"]["approx"], "150.79645");

    let (code, out, _) = run_capture(&["--format", "json", "phi", "--space", "CP(2)", "--coords", "1"], "");
    assert_eq!(code, 0);
    let doc: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(parse_exact_json(&doc["phi"]), Some(PiScaled::new(q(9), 0)));
}

#[test]
fn exit_codes() {
    assert_eq!(run_capture(&["length", "--space", "CP(2)"], "").0, 0);
    // Domain precondition: S^4 has nonzero twisted index obstruction.
    let (code, _, err) = run_capture(&["bound", "--space", "Q(3)", "--factor", "S(4)", "--theorem", "thm1.3"], "");
    assert_eq!(code, 1);
    assert!(err.contains("precondition"), "{err}");
    assert_eq!(run_capture(&["bound", "--space", "CP(-1)", "--theorem", "thm1.1"], "").0, 1);
    assert_eq!(run_capture(&["length", "--space", "CP(3) *"], "").0, 2);
    assert_eq!(run_capture(&["no-such-command"], "").0, 2);
}

#[test]
fn batch_mode_emits_csv_rows() {
    let input = "CP(2)\n# comment\n\nQ(3)\nCP(1) * S1\n";
    let (code, out, _) = run_capture(&["--format", "csv", "--batch", "length"], input);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "space,length,witness_a,q0");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("CP(2),3,"));
    assert!(lines[2].starts_with("Q(3),3,"));
    assert!(lines[3].starts_with("CP(1) * S1,2,"));
}

#[test]
fn lattice_and_pushforward_commands() {
    let (code, out, _) = run_capture(&["--format", "json", "lattice", "--gram", "2,1;1,2"], "");
    assert_eq!(code, 0);
    let doc: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rank"], 2);
    assert_eq!(doc["transference_holds"], true);

    let (code, out, _) = run_capture(&["pushforward", "--k", "2", "--r", "4", "--j", "3"], "");
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["primitive_coefficient", "0"]), "{out}");
}
