//! The JSON surface: schema frozen by a golden file, byte-exact round
//! trips, and seed determinism.

use kucomm::json;
use kucomm::verify::{run_checks, Config, Report};

fn fixed_config() -> Config {
    Config {
        max_weight: 10,
        seed: 7,
        trials: 200,
        only: Some(vec![
            "s4-classes".to_string(),
            "stirling-tables".to_string(),
        ]),
        inject_fault: false,
    }
}

#[test]
fn report_schema_is_frozen() {
    let report = run_checks(&fixed_config()).unwrap().without_timings();
    let rendered = serde_json::to_string_pretty(&report).unwrap();
    let golden = include_str!("golden/verify_report.json");
    assert_eq!(
        rendered,
        golden.trim_end(),
        "the published report schema changed; update docs and golden deliberately"
    );
}

#[test]
fn report_round_trips_byte_identically() {
    let report = run_checks(&fixed_config()).unwrap();
    let rendered = serde_json::to_string_pretty(&report).unwrap();
    let parsed: Report = serde_json::from_str(&rendered).unwrap();
    let re_rendered = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(rendered, re_rendered);
}

#[test]
fn same_seed_means_identical_report() {
    let a = run_checks(&fixed_config()).unwrap().without_timings();
    let b = run_checks(&fixed_config()).unwrap().without_timings();
    assert_eq!(
        serde_json::to_string_pretty(&a).unwrap(),
        serde_json::to_string_pretty(&b).unwrap()
    );
}

#[test]
fn randomized_checks_are_seed_deterministic() {
    let cfg = Config {
        only: Some(vec!["iota-ring-map".to_string(), "circ-laws".to_string()]),
        trials: 25,
        ..fixed_config()
    };
    let a = run_checks(&cfg).unwrap().without_timings();
    let b = run_checks(&cfg).unwrap().without_timings();
    assert_eq!(a, b);
}

#[test]
fn subcommand_json_parses_into_the_mirror_types() {
    let bin = env!("CARGO_BIN_EXE_kucomm");
    let run = |args: &[&str]| -> String {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        String::from_utf8(out.stdout).unwrap()
    };

    let mul: Vec<json::KuTerm> =
        serde_json::from_str(&run(&["mul", "y1*y1", "--format", "json"])).unwrap();
    assert_eq!(
        mul,
        vec![
            json::KuTerm { a: 0, n: 2, coeff: "2".into() },
            json::KuTerm { a: 1, n: 1, coeff: "1".into() },
        ]
    );

    let h: Vec<json::HopfTerm> =
        serde_json::from_str(&run(&["hurewicz", "2", "--format", "json"])).unwrap();
    assert_eq!(
        h,
        vec![
            json::HopfTerm { component: 0, monomial: vec![[0, 2, 1]], coeff: "1".into() },
            json::HopfTerm { component: 0, monomial: vec![[1, 1, 1]], coeff: "-1/2".into() },
        ]
    );

    let split: Vec<json::MSymTerm> =
        serde_json::from_str(&run(&["split", "2", "3", "--format", "json"])).unwrap();
    assert_eq!(split.len(), 2);

    let relations: json::RelationReport =
        serde_json::from_str(&run(&["relations", "2", "3", "--format", "json"])).unwrap();
    assert_eq!(relations.kernel_dimension, 1);
    assert_eq!(relations.relations[0], "2*z(0,3) - 3*z(0,1)*z(0,2) + z(0,1)^3");

    let s4: json::S4Json = serde_json::from_str(&run(&["s4", "--format", "json"])).unwrap();
    assert_eq!(s4.image_v, "-u*y1");
    assert_eq!(s4.image_w, "u*y1 + 2*y2");
    assert_eq!(s4.basis_determinant, -1);

    let table: json::U2TableJson =
        serde_json::from_str(&run(&["u2table", "--format", "json"])).unwrap();
    assert_eq!(table.rows.len(), 6);
    assert!(table.rows.iter().all(|r| r.su_ok));
}

#[test]
fn verify_json_output_is_a_report() {
    let bin = env!("CARGO_BIN_EXE_kucomm");
    let out = std::process::Command::new(bin)
        .args([
            "verify",
            "--format",
            "json",
            "--only",
            "s4-classes,homotopy-ranks",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.all_ok());
    assert_eq!(report.checks.len(), 2);
}
