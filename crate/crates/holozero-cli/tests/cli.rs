//! End-to-end tests of the command-line interface: exit codes, document
//! round trips, determinism under a fixed seed, and the file outputs.

use std::process::{Command, Output};

fn holozero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holozero"))
        .args(args)
        .env_remove("HOLOZERO_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn count_cube_reports_three() {
    let out = holozero(&["count", "--expr", "z^3", "--rect", "-1,1,-1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "N = 3");
}

#[test]
fn count_of_demo_grid_is_one_hundred() {
    let out = holozero(&["count", "--demo", "grid100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "N = 100");
}

#[test]
fn corner_zero_exits_two_and_names_an_edge() {
    let out = holozero(&["count", "--expr", "z", "--rect", "0,1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("edge"));
}

#[test]
fn meromorphic_input_exits_three() {
    let out = holozero(&["count", "--expr", "1/z", "--rect", "-1,1,-1,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("non-integer"));
}

#[test]
fn usage_errors_exit_sixty_four() {
    for args in [
        vec!["count", "--expr", "z^2"],                           // missing --rect
        vec!["count", "--expr", "z^2", "--rect", "0,1"],          // malformed rect
        vec!["find", "--demo", "no-such-demo"],                   // unknown demo
        vec!["find", "--expr", "z+", "--rect", "0,1,0,1"],        // parse error
        vec!["count", "--expr", "z", "--demo", "grid100"],        // conflicting flags
        vec!["benchmark", "--tolerances", "zero"],                // bad tolerance
        vec!["count", "--demo", "grid100", "--quad-rtol", "0"],   // bad tolerance
        vec!["find", "--demo", "grid100", "--depth", "2"],        // depth without pole mode
    ] {
        let out = holozero(&args);
        assert_eq!(out.status.code(), Some(64), "args: {args:?}");
    }
}

#[test]
fn demo_list_names_every_builtin() {
    let out = holozero(&["demo-list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "grid100",
        "quasirandom100",
        "annular",
        "sheets",
        "circulant-det",
        "circulant-resolvent",
        "funcchoice",
    ] {
        assert!(text.contains(name), "missing demo {name}");
    }
}

#[test]
fn find_reports_two_simple_zeros_and_round_trips() {
    let out = holozero(&[
        "find",
        "--expr",
        "(z-0.25-0.25i)*(z-0.75-0.75i)",
        "--dexpr",
        "2*z-1-1i",
        "--rect",
        "0,1,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["count"], 2);
    let zeros = doc["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 2);
    // zeros are sorted by real part, then imaginary
    assert!((zeros[0]["re"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((zeros[0]["im"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((zeros[1]["re"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(zeros[0]["multiplicity"], 1);
    assert_eq!(zeros[0]["kind"], "zero");
    // parse(print(doc)) == doc
    let reprinted = serde_json::to_string(&doc).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reprinted).unwrap();
    assert_eq!(doc, reparsed);
}

#[test]
fn derivative_free_expression_mode_works() {
    let out = holozero(&[
        "find",
        "--expr",
        "(z-0.5-0.5i)^2*exp(z)",
        "--rect",
        "0,1,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["count"], 2);
    assert_eq!(doc["config"]["derivative_free"], true);
    let zeros = doc["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert_eq!(zeros[0]["multiplicity"], 2);
    assert!((zeros[0]["re"].as_f64().unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn fixed_seed_runs_are_byte_identical_modulo_timing() {
    let run = || {
        let out = holozero(&["find", "--demo", "grid100", "--seed", "5"]);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
            .lines()
            .filter(|l| !l.contains("timing_seconds"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn boundary_failure_emits_failed_document_with_exit_two() {
    let out = holozero(&["find", "--expr", "z", "--dexpr", "1", "--rect", "0,1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "failed");
    assert!(doc["error"].as_str().unwrap().contains("boundary"));
    assert_eq!(doc["zeros"].as_array().unwrap().len(), 0);
}

#[test]
fn csv_format_and_output_files() {
    let dir = std::env::temp_dir().join(format!("holozero-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("zeros.csv");
    let plot_path = dir.join("plot.json");
    let out = holozero(&[
        "find",
        "--demo",
        "funcchoice",
        "--alpha",
        "3",
        "--zero",
        "0.4+0.4i",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
        "--plot-data",
        plot_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "re,im,multiplicity,residue_re,residue_im,refined,kind,sheet"
    );
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert!((fields[0].parse::<f64>().unwrap() - 0.4).abs() < 1e-8, "row: {row}");
    assert!((fields[1].parse::<f64>().unwrap() - 0.4).abs() < 1e-8, "row: {row}");
    assert_eq!(fields[2], "3", "row: {row}");

    let plot: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&plot_path).unwrap()).unwrap();
    assert!(!plot["rectangles"].as_array().unwrap().is_empty());
    assert_eq!(plot["zeros"].as_array().unwrap().len(), 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn annular_demo_count_field_sums_the_multiplicities() {
    let out = holozero(&["find", "--demo", "annular"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total: u64 = doc["zeros"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(doc["count"].as_u64().unwrap(), total);
    assert!(total > 0);
}

#[test]
fn sheets_demo_labels_each_zero_with_a_sheet() {
    let out = holozero(&["find", "--demo", "sheets"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let zeros = doc["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 8);
    assert!(zeros
        .iter()
        .any(|z| (z["im"].as_f64().unwrap() - 1.59998).abs() < 1e-3
            && z["re"].as_f64().unwrap().abs() < 1e-6));
    for z in zeros {
        let sheet = z["sheet"].as_str().unwrap();
        assert!(sheet == "+" || sheet == "-");
    }
}

#[test]
fn rect_flag_overrides_the_demo_rectangle() {
    // the default funcchoice zero (0.3 + 0.7i) lies outside this window
    let out = holozero(&["find", "--demo", "funcchoice", "--rect", "0,0.5,0,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["count"], 0);
    assert!(doc["zeros"].as_array().unwrap().is_empty());
    assert_eq!(doc["config"]["rect"][1], 0.5);
}

#[test]
fn threads_flag_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_holozero"))
        .args(["find", "--demo", "funcchoice"])
        .env("HOLOZERO_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["threads"], 3);
}

#[test]
fn benchmark_emits_csv_rows_for_both_methods() {
    let out = holozero(&["benchmark", "--n", "0", "--tolerances", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,tolerance,evaluations,max_zero_error,converged"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("aaa-logderiv,"));
    assert!(rows[1].starts_with("delves-lyness,"));
    for row in rows {
        // both methods find the single zero accurately
        let err: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(err < 1e-8, "row: {row}");
        assert!(row.ends_with("true"));
    }
}
