use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn docs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn quadra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadra")).args(args).env_remove("QUADRA_SEED").output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("not JSON ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quadra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn e8_file_gives_kappa_minus_one() {
    let path = docs().join("lattices/e8.json");
    let out = quadra(&["lattice", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["kappa"], "-1");
    assert_eq!(r["results"]["milgram"], true);
    assert_eq!(r["results"]["signature"], 8);
    assert_eq!(r["results"]["discriminant_group"], "0");
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn selftest_is_deterministic() {
    let args = ["selftest", "--milgram-trials", "1", "--seed", "0"];
    let a = quadra(&args);
    let b = quadra(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(report(&a)["passed"], true);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cp2_kappa_table() {
    let out = quadra(&["complex", "--builtin", "cp2", "--kappa"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["kappa"]["λ=g"], "0");
    assert_eq!(r["results"]["kappa"]["λ=3g"], "1");
    assert_eq!(r["results"]["signature"], 1);
    assert_eq!(r["results"]["lattice_agrees"], true);
}

#[test]
fn malformed_input_exits_with_two() {
    let p = scratch("bad-lattice.json", "{\"gram\": [[2, 1], [1, \"x\"]]}");
    let out = quadra(&["lattice", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gram[1][1]") && err.contains("line 1"), "{err}");

    let p = scratch("truncated.json", "{\"vertices\": 3, \"facets\": [[0, 1]");
    assert_eq!(quadra(&["complex", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(quadra(&["complex", "--builtin", "klein"]).status.code(), Some(2));
    assert_eq!(quadra(&["lattice"]).status.code(), Some(2));
}

#[test]
fn failed_verdict_exits_with_one() {
    let p = scratch("degenerate.json", "{\"orders\": [2], \"coeffs\": [[\"0\"]]}");
    let out = quadra(&["gauss", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn complex_examples_match_builtins() {
    for name in ["point", "s1", "s2", "s3", "s4", "rp2", "rp3", "t2", "cp2", "s2xs2"] {
        let path = docs().join(format!("complexes/{name}.json"));
        let exported = quadra(&["export", "complex", name]);
        let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(serde_json::from_slice::<Value>(&exported.stdout).unwrap(), file, "{name}");
        let out = quadra(&["complex", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn other_examples_run() {
    for dir in ["lattices", "forms", "doldkan", "picard"] {
        let cmd = match dir {
            "lattices" => "lattice",
            "forms" => "gauss",
            d => d,
        };
        for entry in std::fs::read_dir(docs().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let out = quadra(&[cmd, path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn picard_and_doldkan_values() {
    let r = report(&quadra(&["picard", docs().join("picard/z-two-z.json").to_str().unwrap()]));
    assert_eq!(r["results"]["class_group"]["group"], "Z/2");
    let r = report(&quadra(&["picard", docs().join("picard/z-zero-z.json").to_str().unwrap()]));
    assert_eq!(r["results"]["class_group"]["free_rank"], 1);
    let r = report(&quadra(&["doldkan", docs().join("doldkan/mixed.json").to_str().unwrap()]));
    let groups: Vec<&str> =
        r["results"]["homotopy_groups"].as_array().unwrap().iter().map(|g| g["group"].as_str().unwrap()).collect();
    assert_eq!(groups, ["Z/6", "Z", "Z/4"]);
}

#[test]
fn series_defaults() {
    let out = quadra(&["series"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["spin_wu"]["nu12"], "(-80*p3 + 60*p1*p2 - 17*p1^3)/16");
    assert_eq!(r["results"]["spin_wu_series"][6], "-17/16");
    let out = quadra(&["series", "--l-genus", "1"]);
    let r = report(&out);
    assert_eq!(r["results"]["l_genus"]["L1"], "p1/3");
    assert!(r["results"].get("spin_wu").is_none());
}

#[test]
fn seed_environment_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_quadra"))
        .args(["dcohom", "--builtin", "rp2", "--q", "2", "--k", "2", "--witnesses", "2", "--seed", "5"])
        .env("QUADRA_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["seed"], 9);
}

#[test]
fn timing_only_on_request() {
    let plain = report(&quadra(&["series", "--spin-wu", "4"]));
    assert!(plain.get("timing_ms").is_none());
    let timed = report(&quadra(&["--timing", "series", "--spin-wu", "4"]));
    assert!(timed["timing_ms"].is_string());
}
