use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zpgabor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    /// Runs `args` with `--out name`, asserting exit 0, and returns the path.
    fn make(&self, name: &str, args: &[&str]) -> String {
        let path = self.path(name);
        let p = path.to_str().unwrap();
        let mut full = args.to_vec();
        full.extend(["--out", p]);
        let out = run(&full);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        p.to_string()
    }
}

fn read(path: &str) -> Json {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_gauss_has_p_exact_values() {
    let out = run(&["construct", "gauss", "--p", "13"]);
    assert_eq!(code(&out), 0);
    let w = stdout_json(&out);
    assert_eq!(w["backend"], "exact");
    assert_eq!(w["values"].as_array().unwrap().len(), 13);
    assert_eq!(w["values"][0]["coeffs"].as_array().unwrap().len(), 12);
}

#[test]
fn qr_row_rejects_p_7_with_structured_error() {
    let out = run(&["construct", "qr-row", "--p", "7"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    let err: Json = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "domain");
    assert_eq!(err["context"], "construct");
    assert!(err["message"].as_str().unwrap().contains("requires p ≡ 1 (mod 4)"));
}

#[test]
fn unknown_names_list_the_known_ones() {
    let out = run(&["construct", "hat", "--p", "5"]);
    assert_eq!(code(&out), 2);
    let err: Json = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "usage");
    let msg = err["message"].as_str().unwrap();
    for name in ["indicator", "gauss", "flat", "product", "qr-row", "parabola-dual"] {
        assert!(msg.contains(name), "{msg}");
    }
}

#[test]
fn bad_flags_and_missing_inputs_exit_2() {
    assert_eq!(code(&run(&["verify", "nonsense"])), 2);
    assert_eq!(code(&run(&["verify", "tiling", "--E", "/nonexistent/E.json", "--A", "x"])), 2);
    assert_eq!(code(&run(&["construct", "gauss"])), 2);
    assert_eq!(code(&run(&["search", "tiles", "--p", "2", "--shard", "3/2"])), 2);
}

#[test]
fn gauss_product_basis_and_negative_control() {
    let dir = Dir::new();
    let f = dir.make("f.json", &["construct", "gauss", "--p", "5"]);
    let h = dir.make("h.json", &["construct", "sign-flip", "--p", "5"]);
    let g = dir.make("g.json", &["construct", "product", "--f", &f, "--h", &h]);
    let a = dir.make("A.json", &["construct", "subgroup", "--p", "5"]);
    let b = dir.make("B.json", &["construct", "complement", "--p", "5"]);
    let out = run(&["verify", "gabor-basis", "--window", &g, "--A", &a, "--B", &b]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["backend"], "exact");
    assert!(v.get("authoritative").is_none());

    let out = run(&["verify", "gabor-basis", "--window", &g, "--A", &a, "--B", &b, "--backend", "float"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["authoritative"], false);
    assert!(v["banner"].as_str().unwrap().contains("float"));

    let out = run(&["verify", "gabor-basis", "--window", &g, "--A", &a, "--B", &a]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["witness"]["type"], "atom_pair");

    let out = run(&["verify", "thm15", "--window", &g, "--A", &a, "--B", &b]);
    assert_eq!(code(&out), 2, "support of g is not |B|");
}

#[test]
fn parabola_tiles_by_the_vertical_line() {
    let dir = Dir::new();
    let e = dir.make("E.json", &["construct", "parabola", "--p", "3"]);
    let col = dir.make("col.json", &["construct", "complement", "--p", "3"]);
    let out = run(&["verify", "tiling", "--E", &e, "--A", &col]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["certificate"]["counts"], serde_json::json!(vec![1; 9]));

    let out = run(&["search", "find-spectrum", "--E", &e]);
    assert_eq!(code(&out), 0);
    let spectrum = stdout_json(&out);
    assert_eq!(spectrum["points"], serde_json::json!([[0, 0], [1, 0], [2, 0]]));
    let b = dir.path("B.json");
    std::fs::write(&b, out.stdout).unwrap();
    let out = run(&["verify", "spectral", "--E", &e, "--B", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let out = run(&["search", "find-tiling", "--E", &e]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), read(&col));
}

#[test]
fn spectral_negative_control_names_the_pair() {
    let dir = Dir::new();
    let e = dir.make("E.json", &["construct", "parabola", "--p", "3"]);
    let wrong = dir.path("wrong.json");
    std::fs::write(&wrong, r#"{"p": 3, "d": 2, "points": [[0, 0], [0, 1], [1, 1]]}"#).unwrap();
    let out = run(&["verify", "spectral", "--E", &e, "--B", wrong.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["witness"]["type"], "modulation_pair");
}

#[test]
fn find_spectrum_failure_prints_null() {
    let dir = Dir::new();
    let e = dir.path("E.json");
    std::fs::write(&e, r#"{"p": 2, "d": 2, "points": [[0, 0], [0, 1], [1, 0]]}"#).unwrap();
    let out = run(&["search", "find-spectrum", "--E", e.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out), Json::Null);
}

/// Every emitted document is accepted back and reproduced unchanged.
#[test]
fn emitted_json_round_trips() {
    let dir = Dir::new();
    for args in [
        vec!["construct", "gauss", "--p", "7"],
        vec!["construct", "flat", "--p", "5"],
        vec!["construct", "qr-row", "--p", "5"],
        vec!["construct", "parabola-dual", "--p", "3"],
        vec!["construct", "gauss", "--p", "5", "--backend", "float"],
    ] {
        let w = dir.make("w.json", &args);
        let spec = dir.make("spec.json", &["fourier", "--window", &w]);
        let back = dir.make("back.json", &["fourier", "--window", &spec, "--inverse"]);
        assert_eq!(read(&w)["values"].as_array().unwrap().len(), read(&back)["values"].as_array().unwrap().len());
        if read(&w)["backend"] == "exact" {
            assert_eq!(read(&w), read(&back), "{args:?}");
        }
        let ind = dir.make(
            "ind.json",
            &["verify", "plancherel", "--window", &w, "--backend", read(&w)["backend"].as_str().unwrap()],
        );
        assert_eq!(read(&ind)["passed"], true);
    }
    let e = dir.make("E.json", &["construct", "parabola", "--p", "5"]);
    let w = dir.make("ind.json", &["construct", "indicator", "--E", &e]);
    let e2 = dir.path("E2.json");
    let out = run(&["search", "find-tiling", "--E", &e]);
    std::fs::write(&e2, &out.stdout).unwrap();
    assert_eq!(read(&w)["values"].as_array().unwrap().len(), 25);
    let v = run(&["verify", "indicator", "--E", &e, "--A", e2.to_str().unwrap(), "--B", e2.to_str().unwrap()]);
    assert!(serde_json::from_slice::<Json>(&v.stdout).is_ok());
    let report = dir.make("r.json", &["search", "weighted-spectra", "--p", "2", "--d", "1", "--alphabet", "0,1,2"]);
    let text = run(&["report", &report]);
    assert_eq!(code(&text), 0);
    let merged = run(&["report", "--json", &report]);
    assert_eq!(stdout_json(&merged), read(&report));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["search", "question1", "--p", "2", "--alphabet", "0,1,-1,2,-2"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let parallel = run(&[&args[..], &["--jobs", "4", "--chunk", "37"]].concat());
    assert_eq!(first.stdout, parallel.stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = stdout_json(&run(&["search", "tiles", "--p", "2"]));
    assert!(plain.get("wall_time_ms").is_none());
    let timed = stdout_json(&run(&["search", "tiles", "--p", "2", "--timing"]));
    assert!(timed.get("wall_time_ms").is_some());
}

#[test]
fn fuglede_reports_equality() {
    for p in ["2", "3"] {
        let out = run(&["search", "fuglede", "--p", p]);
        assert_eq!(code(&out), 0);
        let r = stdout_json(&out);
        assert_eq!(r["complete"], true);
        assert_eq!(r["counts"]["tiles"], r["counts"]["spectral"]);
        assert!(r["counts"].get("mismatches").is_none());
        assert!(r["findings"].as_array().unwrap().is_empty());
    }
}

#[test]
fn hunt_with_budget() {
    let out = run(&["search", "question1", "--p", "2", "--alphabet", "0,1,-1", "--budget", "1e7"]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["visited"], 81);
    assert_eq!(r["counts"]["windows"], 80);
    assert_eq!(r["counts"].get("hits"), None);

    let out = run(&["search", "question1", "--p", "2", "--alphabet", "0,1,-1", "--budget", "10"]);
    assert_eq!(code(&out), 1, "a budget-limited run is incomplete");
    let r = stdout_json(&out);
    assert_eq!(r["visited"], 10);
    assert_eq!(r["complete"], false);
}

#[test]
fn shards_merge_to_the_full_report() {
    let dir = Dir::new();
    let full = dir.make("full.json", &["search", "tiles", "--p", "2"]);
    let parts: Vec<String> = (0..3)
        .map(|i| dir.make(&format!("s{i}.json"), &["search", "tiles", "--p", "2", "--shard", &format!("{i}/3")]))
        .collect();
    let merged = run(&["report", "--json", &parts[2], &parts[0], &parts[1]]);
    assert_eq!(code(&merged), 0);
    let merged = stdout_json(&merged);
    let full = read(&full);
    for field in ["kind", "params", "visited", "counts", "findings", "complete"] {
        assert_eq!(merged[field], full[field], "{field}");
    }
}

fn checkpoint_args<'a>(cp: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args =
        vec!["search", "weighted-spectra", "--p", "2", "--alphabet", "0,1,2,1/2", "--chunk", "16", "--checkpoint", cp];
    args.extend(extra);
    args
}

#[test]
fn checkpoint_resume_reproduces_the_uninterrupted_run() {
    let dir = Dir::new();
    let cp = dir.path("cp.json");
    let cp = cp.to_str().unwrap();
    let whole = run(&["search", "weighted-spectra", "--p", "2", "--alphabet", "0,1,2,1/2"]);
    assert_eq!(code(&whole), 0);

    let partial = run(&checkpoint_args(cp, &["--budget", "100"]));
    assert_eq!(code(&partial), 1);
    let saved = read(cp);
    assert_eq!(saved["last_subset_integer"], 100);
    assert!(saved["job"].is_object() && saved["partial_counts"].is_object());
    assert!(!Path::new(&format!("{cp}.tmp")).exists());

    let resumed = run(&["search", "resume", "--checkpoint", cp]);
    assert_eq!(code(&resumed), 1, "the budget is part of the job");

    let mut job = saved["job"].clone();
    job["budget"] = serde_json::json!({});
    let mut edited = saved.clone();
    edited["job"] = job;
    std::fs::write(cp, edited.to_string()).unwrap();
    let resumed = run(&["search", "resume", "--checkpoint", cp, "--jobs", "3"]);
    assert_eq!(code(&resumed), 0);
    assert_eq!(resumed.stdout, whole.stdout);
    assert_eq!(read(cp)["last_subset_integer"], 256);
}

#[test]
fn resume_rejects_a_corrupt_checkpoint() {
    let dir = Dir::new();
    let cp = dir.path("cp.json");
    std::fs::write(&cp, r#"{"job": {"p": 2, "d": 2, "kind": "tiles"}}"#).unwrap();
    let out = run(&["search", "resume", "--checkpoint", cp.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err: Json = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "format");
}

#[test]
fn structure_checkers_from_the_command_line() {
    let dir = Dir::new();
    let g = dir.make("qr.json", &["construct", "qr-row", "--p", "5"]);
    let out = run(&["verify", "thm17", "--window", &g, "--k", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let names: Vec<&str> = v["parts"].as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["a", "b", "basis", "equivalence"]);

    let e = dir.make("E.json", &["construct", "parabola", "--p", "3"]);
    let ind = dir.make("ind.json", &["construct", "indicator", "--E", &e]);
    let a = dir.make("A.json", &["construct", "complement", "--p", "3"]);
    let b = dir.make("B.json", &["construct", "subgroup", "--p", "3"]);
    for kind in ["thm15", "thm16", "indicator", "duality"] {
        let mut args = vec!["verify", kind, "--A", &a, "--B", &b];
        if kind == "indicator" {
            args.extend(["--E", &e]);
        } else {
            args.extend(["--window", &ind]);
        }
        let out = run(&args);
        assert_eq!(code(&out), 0, "{kind}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = run(&["verify", "square-sum", "--window", &ind, "--B", &b]);
    assert_eq!(code(&out), 0);
    let text =
        run(&["report", dir.make("v.json", &["verify", "thm16", "--window", &ind, "--A", &a, "--B", &b]).as_str()]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("PASS"), "{text}");
    assert!(text.contains("  PASS tiling"), "{text}");
}
