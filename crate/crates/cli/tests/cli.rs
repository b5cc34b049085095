use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use weilcx_core::manifold::LoopSeries;
use weilcx_core::vey::ValidationReport;
use weilcx_core::{CohomologyResult, ManifoldReport, ModelStage, RankTable, VeyClass};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

/// Runs the binary in `dir` with the cache under `dir/cache`.
fn run_in(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_weilcx"))
        .args(args)
        .current_dir(dir)
        .env("WEILCX_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args)
}

fn ok(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema_valid(schema_file: &str, instance: &Value) {
    let common = load(&schema_dir().join("common.schema.json"));
    let registry = jsonschema::Registry::new()
        .add("https://weilcx.invalid/schemas/common.schema.json", common)
        .unwrap()
        .prepare()
        .unwrap();
    let schema = load(&schema_dir().join(schema_file));
    let validator = jsonschema::options()
        .with_registry(&registry)
        .build(&schema)
        .unwrap();
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

/// Parses into `T` and checks re-serialization reproduces the text.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let value: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", text);
    value
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    model: ModelStage,
    rank_table: RankTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    loop_series: Option<LoopSeries>,
}

#[derive(Serialize, Deserialize)]
struct KappaDoc {
    q: u32,
    kappa: u32,
}

const JSON: [&str; 2] = ["--format", "json"];

fn json_args<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["-q", "--no-cache"];
    v.extend_from_slice(args);
    v.extend_from_slice(&JSON);
    v
}

#[test]
fn cohomology_json_round_trip_and_schema() {
    for (kind, q) in [("W", "1"), ("W", "2"), ("WO", "3"), ("I", "2")] {
        let text = ok(&json_args(&["cohomology", "--complex", kind, "--q", q]));
        assert_schema_valid(
            "cohomology.schema.json",
            &serde_json::from_str(&text).unwrap(),
        );
        round_trip::<CohomologyResult>(&text);
    }
    let w1 = ok(&json_args(&["cohomology", "--complex", "W", "--q", "1"]));
    assert!(w1.starts_with(r#"{"kind":"W","q":1,"dims":{"0":1,"3":1},"#));
}

#[test]
fn vey_json_round_trip_and_schema() {
    let text = ok(&json_args(&[
        "vey",
        "--q",
        "3",
        "--complex",
        "WO",
        "--classify",
    ]));
    assert_schema_valid(
        "vey_classes.schema.json",
        &serde_json::from_str(&text).unwrap(),
    );
    let classes: Vec<VeyClass> = round_trip(&text);
    assert!(classes.iter().any(|c| c.name() == "y1c1c2"));
    let d7 = ok(&json_args(&[
        "vey",
        "--q",
        "3",
        "--complex",
        "WO",
        "--degree",
        "7",
    ]));
    let names: Vec<String> = round_trip::<Vec<VeyClass>>(&d7)
        .iter()
        .map(VeyClass::name)
        .collect();
    assert_eq!(names, ["y1c1^3", "y1c1c2", "y1c3"]);
}

#[test]
fn validation_json_round_trip_and_schema() {
    let one = ok(&json_args(&["validate", "--q", "2", "--complex", "W"]));
    assert_schema_valid(
        "validation.schema.json",
        &serde_json::from_str(&one).unwrap(),
    );
    round_trip::<ValidationReport>(&one);
    let both = ok(&json_args(&["validate", "--q", "3"]));
    assert_schema_valid(
        "validation.schema.json",
        &serde_json::from_str(&both).unwrap(),
    );
    let reports: Vec<ValidationReport> = round_trip(&both);
    assert_eq!(reports.len(), 2);
    assert!(reports
        .iter()
        .all(|r| r.all_independent() && r.counts_match_above(6)));
    let via_vey = ok(&json_args(&[
        "vey",
        "--q",
        "2",
        "--complex",
        "W",
        "--validate",
    ]));
    assert_eq!(via_vey, one);
}

#[test]
fn model_json_round_trip_and_schema() {
    let text = ok(&json_args(&[
        "model",
        "--q",
        "2",
        "--max-degree",
        "8",
        "--loops",
        "2",
    ]));
    assert_schema_valid("model.schema.json", &serde_json::from_str(&text).unwrap());
    let doc: ModelDoc = round_trip(&text);
    assert_eq!(doc.rank_table.rank(5), 2);
    assert!(doc.model.quasi_iso_holds());
    assert!(text.contains(r#""rank_table":{"q":2,"ranks":{"2":1,"4":1,"5":2,"#));
}

#[test]
fn manifold_and_kappa_json_round_trip_and_schema() {
    for p in ["T2", "S2", "S3", "Rq:3", "Sigma_g:4"] {
        let text = ok(&json_args(&["manifold", "--preset", p]));
        assert_schema_valid(
            "manifold.schema.json",
            &serde_json::from_str(&text).unwrap(),
        );
        round_trip::<ManifoldReport>(&text);
    }
    let text = ok(&json_args(&[
        "manifold",
        "--dim",
        "3",
        "--compact",
        "--parallelizable",
        "--cospherical",
        "1:2,2:1",
    ]));
    round_trip::<ManifoldReport>(&text);
    let k = ok(&json_args(&["kappa", "--q", "7"]));
    assert_schema_valid("kappa.schema.json", &serde_json::from_str(&k).unwrap());
    assert_eq!(round_trip::<KappaDoc>(&k).kappa, 2);
    assert_eq!(ok(&["kappa", "--q", "3"]), "1\n");
}

#[test]
fn golden_files() {
    let dir = golden_dir();
    for p in ["T2", "Sigma_g:2", "Sigma_g:3", "S2", "S3", "T3"] {
        let stem = format!("manifold_{}", p.replace(':', "_"));
        let json = ok(&json_args(&["manifold", "--preset", p]));
        assert_eq!(
            json,
            fs::read_to_string(dir.join(format!("{stem}.json"))).unwrap(),
            "{p} json"
        );
        let table = ok(&["-q", "--no-cache", "manifold", "--preset", p]);
        assert_eq!(
            table,
            fs::read_to_string(dir.join(format!("{stem}.txt"))).unwrap(),
            "{p} table"
        );
    }
    let vey = ok(&[
        "-q",
        "--no-cache",
        "vey",
        "--q",
        "2",
        "--complex",
        "W",
        "--classify",
    ]);
    assert_eq!(
        vey,
        fs::read_to_string(dir.join("vey_W2_classify.txt")).unwrap()
    );
    let h = ok(&[
        "-q",
        "--no-cache",
        "cohomology",
        "--complex",
        "W",
        "--q",
        "2",
    ]);
    assert_eq!(
        h,
        fs::read_to_string(dir.join("cohomology_W2.txt")).unwrap()
    );
}

#[test]
fn cache_is_byte_identical_and_version_checked() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "cohomology",
        "--complex",
        "W",
        "--q",
        "3",
        "--format",
        "json",
    ];
    let cold = run_in(dir.path(), &args);
    assert_eq!(cold.code, 0);
    assert!(cold.stderr.contains("computing"));
    let entries: Vec<PathBuf> = fs::read_dir(dir.path().join("cache"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 1);
    let warm = run_in(dir.path(), &args);
    assert!(warm.stderr.contains("cache hit"));
    assert_eq!(cold.stdout, warm.stdout);
    // table output from a warm cache matches a cold table run
    let table_args = ["cohomology", "--complex", "W", "--q", "3"];
    assert_eq!(
        run_in(dir.path(), &table_args).stdout,
        ok(&["--no-cache", "cohomology", "--complex", "W", "--q", "3"])
    );

    // an entry from another version is never served
    let mut entry: Value = load(&entries[0]);
    entry["version"] = Value::from("0.0.0-old");
    entry["payload"] = Value::from("{\"tampered\":true}\n");
    fs::write(&entries[0], serde_json::to_string(&entry).unwrap()).unwrap();
    let again = run_in(dir.path(), &args);
    assert!(again.stderr.contains("computing"));
    assert_eq!(again.stdout, cold.stdout);
    assert_eq!(
        load(&entries[0])["version"],
        Value::from(weilcx_core::VERSION)
    );
}

#[test]
fn no_cache_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run_in(dir.path(), &["--no-cache", "kappa", "--q", "3"]).code,
        0
    );
    assert_eq!(
        run_in(
            dir.path(),
            &["--no-cache", "vey", "--q", "2", "--complex", "W"]
        )
        .code,
        0
    );
    assert!(!dir.path().join("cache").exists());
}

#[test]
fn exit_codes() {
    let budget = run(&["cohomology", "--complex", "W", "--q", "99"]);
    assert_eq!(budget.code, 3);
    assert!(budget.stdout.is_empty());
    assert!(budget.stderr.contains("estimate") && budget.stderr.contains("q <= 6"));
    assert_eq!(run(&["model", "--q", "2", "--max-degree", "30"]).code, 3);

    for bad in [
        vec!["frobnicate"],
        vec!["cohomology", "--complex", "X", "--q", "2"],
        vec!["cohomology", "--complex", "W"],
        vec!["kappa", "--q", "0"],
        vec!["model", "--q", "2", "--max-degree", "1"],
        vec!["manifold", "--preset", "Klein"],
        vec!["manifold", "--dim", "2", "--cospherical", "3:1"],
        vec!["vey", "--q", "2", "--complex", "I"],
        vec!["validate", "--q", "2", "--wo-condition", "sometimes"],
    ] {
        let r = run(&bad);
        assert_eq!(r.code, 2, "{bad:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
    assert_eq!(run(&["kappa", "--q", "3"]).code, 0);
}

#[test]
fn stderr_carries_no_results() {
    let r = run(&[
        "cohomology",
        "--complex",
        "W",
        "--q",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    assert!(!r.stderr.contains("dims"));
    assert!(!r.stderr.contains("y1c1"));
    assert!(!r.stdout.contains("INFO"));
}

#[test]
fn config_file_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let base = run_in(dir.path(), &["--version"]);
    assert_eq!(base.code, 0);
    assert!(base
        .stdout
        .starts_with(&format!("weilcx {} (config ", weilcx_core::VERSION)));

    fs::write(
        dir.path().join("weilcx.toml"),
        "q_cap = 2\noutput_format = \"json\"\n",
    )
    .unwrap();
    let capped = run_in(dir.path(), &["--version"]);
    assert_ne!(capped.stdout, base.stdout);
    assert_eq!(
        run_in(dir.path(), &["cohomology", "--complex", "W", "--q", "3"]).code,
        3
    );
    let k = run_in(dir.path(), &["kappa", "--q", "3"]);
    assert_eq!(k.stdout, "{\"q\":3,\"kappa\":1}\n");
    assert_eq!(
        run_in(dir.path(), &["--format", "table", "kappa", "--q", "3"]).stdout,
        "1\n"
    );

    fs::write(
        dir.path().join("weilcx.toml"),
        "vey_wo_condition = \"exists_odd\"\n",
    )
    .unwrap();
    let r = run_in(
        dir.path(),
        &[
            "--format",
            "json",
            "validate",
            "--q",
            "2",
            "--complex",
            "WO",
        ],
    );
    let report: ValidationReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report.wo_condition, weilcx_core::WoCondition::ExistsOdd);

    fs::write(dir.path().join("weilcx.toml"), "q_cap = 2\nmystery = 1\n").unwrap();
    assert_eq!(run_in(dir.path(), &["kappa", "--q", "3"]).code, 2);
    let other = dir.path().join("other.toml");
    fs::write(&other, "model_degree_cap = 8\n").unwrap();
    let r = run_in(
        dir.path(),
        &[
            "--config",
            other.to_str().unwrap(),
            "model",
            "--q",
            "2",
            "--max-degree",
            "10",
        ],
    );
    assert_eq!(r.code, 3);
    fs::write(&other, "q_cap = 0\n").unwrap();
    assert_eq!(
        run_in(
            dir.path(),
            &["--config", other.to_str().unwrap(), "kappa", "--q", "3"]
        )
        .code,
        2
    );
}

#[test]
fn cache_dir_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let custom = dir.path().join("elsewhere");
    let out = Command::new(env!("CARGO_BIN_EXE_weilcx"))
        .args(["-q", "vey", "--q", "1", "--complex", "WO"])
        .current_dir(dir.path())
        .env("WEILCX_CACHE_DIR", &custom)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_dir(&custom).unwrap().count(), 1);
}
