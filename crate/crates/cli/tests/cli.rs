use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn edepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edepth"))
        .args(args)
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

const SAMPLE: &str = "t,a,b,c,d,e,f\n\
0,0,1,0.5,0.3,9,0.7\n\
0.5,0.1,1,0.5,0.3,9,0.7\n\
1,0,1,0.5,0.3,9,0.7\n";

fn write_sample(dir: &Path) -> String {
    let path = dir.join("s.csv");
    fs::write(&path, SAMPLE).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn depth_json_follows_schema() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path());
    let out = edepth(&["depth", "--input", &input, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert!(row["label"].is_string());
        assert_eq!(row["ed"]["den"], 6);
        assert!(row["ed"]["num"].as_u64().unwrap() >= 1);
        assert!(row["id"].is_number() && row["mbd"].is_number());
        assert!(row.get("profile").is_none());
    }
    assert_eq!(fs::read_to_string(&input).unwrap(), SAMPLE);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["region", "--input", "x.csv", "--alpha", "1.5"][..],
        &["pointwise-region", "--input", "x.csv", "--gamma", "0"],
        &["bench-table1", "--replicates", "3"],
        &["simulate", "--model", "9", "--seed", "1", "--out-dir", "o"],
        &["depth", "--input", "x.csv", "--format", "xml"],
    ] {
        let out = edepth(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(text(&out.stderr).starts_with("error:"), "{args:?}");
    }
    for args in [
        &["frobnicate"][..],
        &["depth", "--input", "x.csv", "--colour"],
    ] {
        let out = edepth(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(text(&out.stderr).contains("Usage: edepth"), "{args:?}");
    }
}

#[test]
fn data_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "t,f,g\n0,1,2\n1,,3\n").unwrap();
    let out = edepth(&["depth", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("row 3, column 2 (f): empty cell"));
    let missing = dir.path().join("missing.csv");
    let out = edepth(&["rank", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_cannot_overwrite_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path());
    let out = edepth(&["depth", "--input", &input, "--output", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(fs::read_to_string(&input).unwrap(), SAMPLE);
}

#[test]
fn benchmark_reruns_are_byte_identical() {
    let args = ["bench-table1", "--replicates", "100", "--seed", "7"];
    let a = edepth(&args);
    let b = edepth(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = text(&a.stdout);
    let mut lines = report.lines();
    assert_eq!(lines.next(), Some("# seed: 7"));
    assert_eq!(lines.next(), Some("model,method,metric,mean,se,replicates"));
    // 5 models x 3 methods x 2 metrics
    assert_eq!(lines.count(), 30);
}

#[test]
fn seeded_json_carries_seed() {
    let out = edepth(&[
        "bench-table2",
        "--replicates",
        "2",
        "--bootstrap",
        "50",
        "--seed",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 4);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert_eq!(rows[0]["truth_or_alt"], "P5");
}

#[test]
fn region_and_boxplot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path());
    let plots = dir.path().join("plots");
    let diag = dir.path().join("diag.csv");
    let out = edepth(&[
        "region",
        "--input",
        &input,
        "--alpha",
        "0.4",
        "--diagnostic",
        diag.to_str().unwrap(),
        "--plot-dir",
        plots.to_str().unwrap(),
        "--plot-stem",
        "fig2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let envelope = text(&out.stdout);
    assert!(envelope.starts_with("t,lower,upper\n"));
    assert_eq!(
        fs::read_to_string(plots.join("fig2.envelope.csv")).unwrap(),
        envelope
    );
    assert!(fs::read_to_string(diag)
        .unwrap()
        .starts_with("t,width,sd\n"));

    let out = edepth(&["boxplot", "--input", &input, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "ED");
    assert_eq!(v["box"]["t"].as_array().unwrap().len(), 3);
    assert_eq!(v["outliers"], serde_json::json!([4]));

    let out = edepth(&["outliers", "--input", &input, "--method", "mbd"]);
    assert_eq!(text(&out.stdout), "index,label\n4,e\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bands_plot_layer_and_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let xy = dir.path().join("xy.csv");
    let mut body = String::from("x,y\n");
    for i in 0..40 {
        let x = i as f64 / 39.0;
        body.push_str(&format!(
            "{x},{}\n",
            1.0 + 2.0 * x + ((i * 7) % 5) as f64 * 0.1
        ));
    }
    fs::write(&xy, body).unwrap();
    let plots = dir.path().join("p");
    let out = edepth(&[
        "bands",
        "--input",
        xy.to_str().unwrap(),
        "--degree",
        "1",
        "--seed",
        "2",
        "--bootstrap",
        "200",
        "--eval-points",
        "11",
        "--method",
        "k",
        "--plot-dir",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = text(&out.stdout);
    assert!(csv.starts_with("# seed: 2\nx,lower,upper,mu_hat\n"));
    assert_eq!(csv.lines().count(), 13);
    let layer = fs::read_to_string(plots.join("bands.bands.csv")).unwrap();
    assert_eq!(
        layer.lines().next(),
        Some("x,mu_hat,ed_lo,ed_hi,scheffe_lo,scheffe_hi,k_lo,k_hi")
    );
}

#[test]
fn simulate_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sim");
    let out = edepth(&[
        "simulate",
        "--model",
        "3",
        "--replicates",
        "2",
        "--seed",
        "8",
        "--n",
        "12",
        "--m",
        "9",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    for r in 0..2 {
        let path = out_dir.join(format!("model3_rep{r}.csv"));
        let s = edepth::io::load_sample_path(&path).unwrap();
        assert_eq!((s.n(), s.m()), (12, 9));
        let labels = fs::read_to_string(out_dir.join(format!("model3_rep{r}.labels.csv"))).unwrap();
        assert!(labels.starts_with("# seed: 8\nlabel,is_outlier,sign,start,end\n"));
        assert_eq!(labels.lines().count(), 14);
    }
}
