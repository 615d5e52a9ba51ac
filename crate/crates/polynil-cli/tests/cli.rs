//! End-to-end checks of the binary: output shape and the exit-code
//! contract (0 success or all-pass, 1 refused or check failed, 2 usage).

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn witt_prints_the_count() {
    let out = run(&["witt", "-w", "2", "-n", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "6");

    let out = run(&["witt", "-w", "5", "-n", "1"]);
    assert_eq!(stdout(&out).trim(), "0");

    let out = run(&["witt", "-w", "0", "-n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multiplier_reports_structure_order_and_theorem() {
    let out = run(&["multiplier", "-g", "Z_4 + Z_2", "-c", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("Z_2, order 2^1, Thm 2.7"), "{text}");
    assert!(text.contains("[ok ] divisibility chain"));

    let out = run(&["multiplier", "-g", "Z_9 *2* Z_3", "-c", "2"]);
    let text = stdout(&out);
    assert!(
        text.starts_with("Z_3^(5), order 3^5, Thm 2.13/2.14 agree"),
        "{text}"
    );
}

#[test]
fn multiplier_refusals_and_parse_errors_use_distinct_exit_codes() {
    let out = run(&["multiplier", "-g", "Z_2 *2* Z_2", "-c", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(text.contains("refused"), "{text}");
    assert!(text.contains("gcd(2, r_1 = 2) != 1"), "{text}");

    let out = run(&["multiplier", "-g", "Z_9 *x* Z_3", "-c", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position 5"));
}

#[test]
fn record_output_round_trips_through_the_grammar() {
    let out = run(&[
        "multiplier",
        "-g",
        "Z^2 + Z_{2^2} + Z_2",
        "-c",
        "1",
        "--format",
        "record",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let text = record["group"].as_str().unwrap();
    let reparsed = polynil::parse_group(text).unwrap();
    assert_eq!(reparsed.to_string(), text);
    assert_eq!(record["theorem"], "Thm 2.11");
    assert_eq!(record["order"], "infinite");
}

#[test]
fn hall_lists_elements_and_counts() {
    let out = run(&["hall", "-n", "2", "-w", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("[[x2,x1],x1]"));
    assert!(text.trim_end().ends_with("count 2"));

    let out = run(&["hall", "-n", "3", "-w", "2", "--contains", "3"]);
    assert!(stdout(&out).trim_end().ends_with("count 2"));

    let out = run(&["hall", "-n", "0", "-w", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "count 0");
}

#[test]
fn classify_prints_the_sweep_and_signals_failed_claims() {
    let out = run(&["classify", "-p", "2", "-m", "3", "-c", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("maximizers: (1,1,1)"), "{text}");
    assert!(text.contains("holds"), "{text}");

    // Degenerate target: the row (1,1) bound at m = 2 is 2^0, which every
    // partition attains, so the uniqueness claim legitimately fails.
    let out = run(&["classify", "-p", "2", "-m", "2", "-c", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILS"));

    let out = run(&["classify", "-p", "2", "-m", "3", "-c", "2", "-n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("refused"));
}

#[test]
fn verify_suites_expose_the_exit_contract() {
    let out = run(&["verify", "counterexample", "-c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "i=3: 9 >= 6");

    let out = run(&["verify", "counterexample", "-c", "1", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["verify", "bounds", "-p", "3", "-m", "5", "-c", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("54 checks, 0 failed"));

    let out = run(&[
        "verify", "equality", "-c", "2", "-m", "5", "--format", "record",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.trim().is_empty());
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["pass"], true);
    }

    let out = run(&["verify", "monotonicity", "-c", "2", "-n", "2", "-i", "5"]);
    assert!(out.status.success());
}
