//! End-to-end tests of the binary: exit codes, output formats, and file
//! round trips.

use std::process::{Command, Output};

use ctxlab::{catalog, io, scenario};

fn ctxlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxlab"))
        .args(args)
        .env("CTXLAB_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn ks_reports_the_full_kochen_specker_set() {
    let out = ctxlab(&["ks", "ceg18"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out).trim(),
        "KS-contextual: yes (exhaustive, 0 assignments)"
    );

    let out = ctxlab(&["ks", "ceg17"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).starts_with("KS-contextual: no"));
}

#[test]
fn truncated_enumeration_refuses_with_exit_one() {
    let out = ctxlab(&["enumerate", "chsh", "--limit", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("truncated"));

    let out = ctxlab(&["enumerate", "chsh"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("16 deterministic states (exhaustive)"));
}

#[test]
fn unknown_inputs_exit_two() {
    let out = ctxlab(&["show", "definitely_not_a_scenario"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = ctxlab(&["show", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = ctxlab(&["classify", "chsh", "--state", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_versioned_and_byte_stable() {
    let runs = [
        vec!["classify", "chsh", "--state", "singlet", "--json"],
        vec!["fraction", "kcbs", "--state", "kcbs", "--json"],
        vec!["ineq", "chsh", "--ineq", "chsh", "--state", "singlet", "--json"],
        vec!["table", "kcbs", "--state", "half_cycle", "--json"],
        vec!["ks", "ceg18", "--json"],
        vec!["list", "--json"],
        vec!["show", "kcbs", "--json"],
    ];
    for args in &runs {
        let first = ctxlab(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        let second = ctxlab(args);
        assert_eq!(first.stdout, second.stdout, "unstable bytes for {args:?}");
        let value: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(value["format_version"], 1, "{args:?}");
    }
}

#[test]
fn exported_scenarios_reimport_isomorphically() {
    for name in catalog::BUILTIN_NAMES {
        let entry = catalog::builtin(name).unwrap();
        let text = io::scenario_to_json(&entry.scenario);
        let back = io::scenario_from_json(&text).unwrap();
        assert!(
            scenario::scenarios_isomorphic(&entry.scenario, &back).unwrap(),
            "{name} round trip broke the structure"
        );
        assert_eq!(back.labels(), entry.scenario.labels());
        if let (Some(a), Some(b)) = (entry.scenario.realization(), back.realization()) {
            for (pa, pb) in a.projectors.iter().zip(&b.projectors) {
                assert!(pa.approx_eq(pb), "{name} projectors drifted");
            }
        } else {
            assert!(entry.scenario.realization().is_none());
            assert!(back.realization().is_none());
        }
    }
}

#[test]
fn export_and_reimport_work_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kcbs.json");
    let out = ctxlab(&["show", "kcbs", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, &out.stdout).unwrap();

    let out = ctxlab(&["enumerate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("11 deterministic states (exhaustive)"));
}

#[test]
fn inequality_report_matches_the_documented_example() {
    let out = ctxlab(&["ineq", "chsh", "--ineq", "chsh", "--state", "singlet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("S = 3.41421356"), "{text}");
    assert!(text.contains("NC bound = 3.00000000"), "{text}");
    assert!(text.contains("algebraic bound = 4.00000000"), "{text}");
    assert!(text.contains("violates NC bound: yes"), "{text}");
}

#[test]
fn table_renders_the_eight_by_eight_grid() {
    let out = ctxlab(&["table", "ghz322", "--state", "ghz"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9, "{text}");
    assert!(lines[0].contains("+++") && lines[0].contains("---"));
    let xxx = lines.iter().find(|l| l.starts_with("XXX")).unwrap();
    assert_eq!(xxx.matches("0.250000000").count(), 4);
    let yyy = lines.iter().find(|l| l.starts_with("YYY")).unwrap();
    assert_eq!(yyy.matches("0.125000000").count(), 8);
}

#[test]
fn state_and_inequality_files_load_from_paths() {
    let dir = tempfile::tempdir().unwrap();

    // A density matrix file: maximally mixed in dimension 3.
    let rho = dir.path().join("mixed.json");
    let third = 1.0 / 3.0;
    std::fs::write(
        &rho,
        format!(
            r#"{{"scenario": "kcbs", "density": [
                [[{third}, 0.0], [0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [{third}, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [{third}, 0.0]]
            ]}}"#
        ),
    )
    .unwrap();
    let out = ctxlab(&["fraction", "kcbs", "--state", rho.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["noncontextual"], true);
    assert!(v["w_nc"].as_f64().unwrap() > 1.0 - 1e-7);

    // A probability file must match the scenario it names.
    let probs = dir.path().join("probs.json");
    std::fs::write(&probs, r#"{"scenario": "chsh", "probs": {"P0": 1.0}}"#).unwrap();
    let out = ctxlab(&["classify", "kcbs", "--state", probs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // An inequality file with custom weights.
    let ineq = dir.path().join("ineq.json");
    std::fs::write(
        &ineq,
        r#"{"name": "apex", "weights": {"P0": 1.0, "P1": 1.0, "P2": 1.0, "P3": 1.0, "P4": 1.0}}"#,
    )
    .unwrap();
    let out = ctxlab(&["ineq", "kcbs", "--ineq", ineq.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("NC bound = 2.00000000"), "{text}");
    assert!(text.contains("algebraic bound = 2.50000000"), "{text}");
}

#[test]
fn scenario_flag_is_an_alternative_to_the_positional_form() {
    let positional = ctxlab(&["show", "kcbs"]);
    let flagged = ctxlab(&["show", "--scenario", "kcbs"]);
    assert_eq!(positional.status.code(), Some(0));
    assert_eq!(positional.stdout, flagged.stdout);

    let both = ctxlab(&["show", "kcbs", "--scenario", "kcbs"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn color_styling_honors_the_environment() {
    // Piped output never styles, with or without the variable.
    let out = ctxlab(&["classify", "chsh", "--state", "singlet"]);
    assert!(!out.stdout.contains(&0x1b));
    let out = Command::new(env!("CARGO_BIN_EXE_ctxlab"))
        .args(["classify", "chsh", "--state", "singlet"])
        .env_remove("CTXLAB_COLOR")
        .output()
        .unwrap();
    assert!(!out.stdout.contains(&0x1b));
}

#[test]
fn selfcheck_passes_end_to_end() {
    let out = ctxlab(&["selfcheck", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 24);
}
