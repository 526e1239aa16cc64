use std::path::Path;
use std::process::{Command, Output};

use choquet_cli::dataset::{Dataset, Format, Record};
use choquet_core::{Carrier, Element64};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn choquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choquet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Direct classical Choquet integral w.r.t. the cardinality capacity.
fn classical(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len() as f64;
    let mut prev = 0.0;
    let mut total = 0.0;
    for (i, &x) in s.iter().enumerate() {
        total += (x - prev) * (n - i as f64) / n;
        prev = x;
    }
    total
}

#[test]
fn scalar_csv_gives_classical_values() {
    let dir = TempDir::new().unwrap();
    let rows = [[0.2, 0.5, 0.9], [0.7, 0.1, 0.4], [1.0, 1.0, 0.3]];
    let text: String = rows
        .iter()
        .map(|r| format!("{},{},{}\n", r[0], r[1], r[2]))
        .collect();
    let input = write(&dir, "in.csv", &text);
    let out = choquet(&["aggregate", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let got = doc["rows"].as_array().unwrap();
    assert_eq!(got.len(), 3);
    for (row, xs) in got.iter().zip(&rows) {
        let v = row["value"].as_f64().unwrap();
        assert!((v - classical(xs)).abs() < 1e-12, "{v} vs {}", classical(xs));
        assert_eq!(row["consistent"], Value::Bool(true));
        assert_eq!(row["in_K"], Value::Bool(true));
    }
    assert!((got[0]["value"].as_f64().unwrap() - 8.0 / 15.0).abs() < 1e-12);
}

#[test]
fn interval_json_rows_stay_in_k() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "in.json",
        "[[[0.2,0.4],[0.5,0.7]], [[0.0,1.0],[0.3,0.3]], [[0.1,0.2],[0.1,0.2]]]",
    );
    let cap = write(
        &dir,
        "mu.json",
        r#"{"n":2,"kind":"table","entries":[{"subset":[],"value":0},{"subset":[1],"value":0},{"subset":[2],"value":0.5},{"subset":[1,2],"value":1}]}"#,
    );
    let out = choquet(&["aggregate", "--input", &input, "--capacity", &cap, "--order", "ab:0.5:1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let rows = doc["rows"].as_array().unwrap();
    for row in rows {
        assert_eq!(row["in_K"], Value::Bool(true));
        let v = row["value"].as_array().unwrap();
        assert!(v[0].as_f64().unwrap() <= v[1].as_f64().unwrap());
    }
    let first: Vec<f64> = rows[0]["value"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((first[0] - 0.35).abs() < 1e-12 && (first[1] - 0.55).abs() < 1e-12);
}

#[test]
fn all_zero_row_aggregates_to_zero() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", "[[[0,0],[0,0],[0,0]]]");
    let out = choquet(&["aggregate", "--input", &input, "--order", "ab:0.5:1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lower,upper,consistent,in_K,permutations,sampled"));
    assert_eq!(lines.next(), Some("0,0,true,true,6,false"));
}

#[test]
fn inconsistent_rows_exit_2_with_values() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.csv", "id,a,b\nr1,0.5,0.5\nr2,0.1,0.9\n");
    let cap = write(
        &dir,
        "mu.json",
        r#"{"n":2,"kind":"table","entries":[{"subset":[],"value":0},{"subset":[1],"value":0.2},{"subset":[2],"value":0.7},{"subset":[1,2],"value":1}]}"#,
    );
    let out = choquet(&["aggregate", "--input", &input, "--capacity", &cap, "--kernel", "b1-scale"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["consistent"], Value::Bool(false));
    assert_eq!(doc["rows"][0]["id"], "r1");
    assert_eq!(doc["rows"][0]["consistent"], Value::Bool(false));
    assert!(doc["rows"][0]["value"].is_number());
    assert_eq!(doc["rows"][1]["consistent"], Value::Bool(true));
}

#[test]
fn bad_input_exits_1_with_error_record() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", "[[[0.6,0.4],[0.5,0.7]]]");
    let out = choquet(&["aggregate", "--input", &input, "--order", "ab:0.5:1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid_element");

    let csv = write(&dir, "in.csv", "0.2,0.5\n");
    let out = choquet(&["aggregate", "--input", &csv, "--kernel", "no-such-kernel"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "unknown_kernel");
}

#[test]
fn random_capacity_uses_seed() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.csv", "0.2,0.5,0.9\n");
    let cap = write(&dir, "mu.json", r#"{"n":3,"kind":"random"}"#);
    let run = |seed: &str| {
        let out = choquet(&["aggregate", "--input", &input, "--capacity", &cap, "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        stdout_json(&out)["rows"][0]["value"].as_f64().unwrap()
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

#[test]
fn appendix_c_suite_fails_with_witness() {
    let out = choquet(&["verify", "--suite", "appendix-c"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "fail");
    let w = &doc["reports"][0]["witness"];
    for key in ["x1", "x2", "lhs", "rhs"] {
        assert!(w[key].is_array(), "missing {key}");
    }
    assert_ne!(w["lhs"], w["rhs"]);
}

#[test]
fn aggregation_suite_is_green_on_delta_difference() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"kernels":["choquet",{"family":"delta-scale","delta":"difference"}],"orders":["scalar","ab:0.5:1","ab:0:1"],"n":[2,3]}"#,
    );
    let report = dir.path().join("report.json");
    let out = choquet(&[
        "verify",
        "--suite",
        "aggregation",
        "--config",
        &cfg,
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2 * 3 * 2);
}

#[test]
fn failing_kernel_exits_3() {
    let out = choquet(&["verify", "--suite", "wd", "--kernel", "b1-scale", "--order", "scalar", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["reports"][0]["kernel"], "b1-scale");
    assert!(doc["reports"][0]["witness"].is_object());
}

#[test]
fn config_errors_exit_1() {
    let out = choquet(&["verify", "--suite", "wd", "--config", "/definitely/missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");

    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"kernals":["choquet"]}"#);
    assert_eq!(choquet(&["verify", "--config", &cfg]).status.code(), Some(1));

    // Violated hypothesis (min is not cancellative) is a configuration error.
    let out = choquet(&["verify", "--suite", "wd", "--add", "min", "--order", "scalar"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "hypothesis_violated");
}

#[test]
fn exit_codes_are_deterministic() {
    let a = choquet(&["verify", "--suite", "order"]);
    let b = choquet(&["verify", "--suite", "order"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.status.code(), b.status.code());
}

fn element(carrier: Carrier) -> BoxedStrategy<Element64> {
    let unit = || (0u32..=1000).prop_map(|k| k as f64 / 1000.0);
    match carrier {
        Carrier::Scalar => unit().prop_map(Element64::Scalar).boxed(),
        Carrier::Interval => (unit(), unit())
            .prop_map(|(a, b)| Element64::Interval(a.min(b), a.max(b)))
            .boxed(),
        Carrier::Vector(k) => proptest::collection::vec(unit(), k).prop_map(Element64::Vector).boxed(),
    }
}

fn dataset(carrier: Carrier) -> impl Strategy<Value = Dataset> {
    (1usize..6, any::<bool>()).prop_flat_map(move |(n, ids)| {
        proptest::collection::vec(
            (proptest::collection::vec(element(carrier), n), "[a-z][a-z0-9]{0,5}"),
            1..8,
        )
        .prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|(values, id)| Record {
                    id: ids.then_some(id),
                    values,
                })
                .collect();
            Dataset::new(carrier, rows).unwrap()
        })
    })
}

fn round_trip(d: &Dataset, format: Format) -> Dataset {
    let text = d.serialize(format).unwrap();
    Dataset::parse(&text, format, d.carrier()).unwrap()
}

proptest! {
    #[test]
    fn csv_round_trip(d in dataset(Carrier::Scalar)) {
        prop_assert_eq!(round_trip(&d, Format::Csv), d);
    }

    #[test]
    fn json_round_trip(
        d in prop_oneof![
            dataset(Carrier::Scalar),
            dataset(Carrier::Interval),
            dataset(Carrier::Vector(3)),
        ]
    ) {
        prop_assert_eq!(round_trip(&d, Format::Json), d);
    }
}

#[test]
fn load_sniffs_format() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "data", "[[0.1,0.2]]");
    let d = Dataset::load(Path::new(&p), Carrier::Scalar).unwrap();
    assert_eq!(d.n(), 2);
}
