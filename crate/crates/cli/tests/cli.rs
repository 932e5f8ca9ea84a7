use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tighttri_cli::format::ComplexFile;

fn tighttri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tighttri")).args(args).env_remove("TIGHTTRI_SEED").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = tighttri(&all);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn without_time(mut v: Value) -> String {
    v["wall_time_ms"] = Value::Null;
    serde_json::to_string(&v).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn boundary_of_four_simplex_is_tight_by_brute_force() {
    let (code, v) = json(&["check", "tight", "builtin:boundary-delta4", "--field", "q", "--mode", "brute"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["method"], "brute");
    assert_eq!(v["f_vector"], serde_json::json!([5, 10, 10, 5]));
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn icosahedron_fails_on_a_non_edge() {
    for mode in ["auto", "brute"] {
        let (code, v) = json(&["check", "tight", "builtin:icosahedron", "--field", "2", "--mode", mode]);
        assert_eq!(code, 1);
        let w = &v["witness"]["vertices"];
        assert_eq!(w.as_array().unwrap().len(), 2);
        assert_eq!(v["witness"]["degree"], 0);
        assert_eq!(*w, serde_json::json!([0, 6]));
    }
}

#[test]
fn report_schema_is_the_same_for_every_command() {
    let keys = |v: &Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    let (_, a) = json(&["admissible-k", "--limit", "10"]);
    let (_, b) = json(&["homology", "builtin:rp2-6", "--field", "2"]);
    let (_, c) = json(&["check", "manifold", "builtin:moebius-5"]);
    assert_eq!(keys(&a), keys(&b));
    assert_eq!(keys(&a), keys(&c));
    for k in ["verdict", "method", "field", "f_vector", "betti", "witness", "certificate", "wall_time_ms", "seed"] {
        assert!(a.get(k).is_some(), "{k}");
    }
    assert_eq!(b["betti"], serde_json::json!([1, 1, 1]));
}

#[test]
fn usage_and_input_errors_exit_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, "0 1 x\n").unwrap();
    let wrong_dim = path(dir.path(), "dim.json");
    std::fs::write(&wrong_dim, r#"{"name":"e","dim":3,"facets":[[0,1,2]]}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "tight", "builtin:icosahedron", "--no-such-flag"],
        vec!["check", "tight", &bad],
        vec!["check", "tight", &wrong_dim],
        vec!["check", "tight", "builtin:icosahedron", "--field", "4"],
        vec!["check", "tight", "builtin:nothing"],
        vec!["check", "stacked-sphere", "builtin:icosahedron", "--dim", "4"],
        vec!["homology", "/does/not/exist"],
        vec!["search", "tight", "--k", "2", "--budget", "1"],
        vec!["check", "tight", "builtin:cycle:31", "--mode", "brute"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = tighttri(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("tighttri: "));
    }
}

#[test]
fn exponential_override_lifts_the_cap() {
    let out = tighttri(&["check", "tight", "builtin:cycle:31", "--mode", "brute", "--i-know-this-is-exponential"]);
    // the first non-edge fails at once
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn field_spellings() {
    for (f, name) in [("q", "Q"), ("Q", "Q"), ("2", "GF(2)"), ("p:3", "GF(3)")] {
        let (code, v) = json(&["homology", "builtin:rp2-6", "--field", f]);
        assert_eq!(code, 0);
        assert_eq!(v["field"], name);
    }
}

#[test]
fn jobs_do_not_change_the_json() {
    let runs: Vec<String> = ["1", "2", "5"]
        .iter()
        .map(|j| {
            let (code, v) = json(&["check", "tight", "builtin:rp2-6", "--field", "q", "--mode", "brute", "--jobs", j]);
            assert_eq!(code, 1);
            without_time(v)
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let searches: Vec<String> = ["1", "4"]
        .iter()
        .map(|j| {
            let (code, v) =
                json(&["search", "tight", "--k", "1", "--field", "2", "--seed", "3", "--budget", "3000", "--jobs", j]);
            assert_eq!(code, 0);
            without_time(v)
        })
        .collect();
    assert_eq!(searches[0], searches[1]);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tighttri"));
        c.args(args).arg("--json").env_remove("TIGHTTRI_SEED");
        if let Some(s) = env {
            c.env("TIGHTTRI_SEED", s);
        }
        let out = c.output().unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let gen = ["gen", "stacked-sphere", "--n", "12", "--dim", "3"];
    let a = run(Some("17"), &gen);
    let b = run(None, &[&gen[..], &["--seed", "17"]].concat());
    assert_eq!(a["seed"], 17);
    assert_eq!(a["details"]["complex"]["facets"], b["details"]["complex"]["facets"]);
    assert_eq!(run(None, &gen)["seed"], 0);
}

#[test]
fn generate_check_and_classify_a_stacked_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "s.json");
    let r = path(dir.path(), "s.report");
    let out = tighttri(&["gen", "stacked-sphere", "--n", "14", "--dim", "3", "--seed", "9", "-o", &s, "--json"]);
    assert!(out.status.success());
    std::fs::write(&r, &out.stdout).unwrap();
    let (code, v) = json(&["check", "stacked-sphere", &s, "--dim", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["f_vector"][1], 4 * 14 - 10);
    assert_eq!(json(&["check", "locally-stacked", &s]).0, 0);
    assert_eq!(json(&["check", "manifold", &s]).0, 0);
    let (code, v) = json(&["classify", &s, "--cert", &r]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["topology"], "S3");
    // a certificate for a different complex is a failed verdict
    let (code, _) = json(&["classify", "builtin:boundary-delta4", "--cert", &r]);
    assert_eq!(code, 1);
}

#[test]
fn handles_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "path.txt");
    let mut text = String::from("# path sphere\n");
    let x = tighttri::constructions::path_stacked_sphere(13).unwrap();
    for f in x.facet_lists() {
        text += &format!("{}\n", f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    }
    std::fs::write(&s, text).unwrap();
    let idx = |f: &[u32]| x.facet_lists().iter().position(|g| g == f).unwrap().to_string();
    let (i, j) = (idx(&[0, 1, 2, 3]), idx(&[9, 10, 11, 12]));
    let m = path(dir.path(), "m.json");
    let (code, v) =
        json(&["gen", "handle", &s, "--facets", &format!("{i},{j}"), "--bijection", "0:9,1:10,2:11,3:12", "-o", &m]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["f_vector"], serde_json::json!([9, 36, 54, 27]));
    let (code, v) = json(&["check", "tight", &m, "--field", "2", "--mode", "brute"]);
    assert_eq!((code, &v["verdict"]), (0, &Value::Bool(true)));
    let (code, _) = json(&["check", "tight", &m, "--field", "q"]);
    assert_eq!(code, 1);

    // intersecting facets are rejected with a reason
    let k = idx(&[0, 1, 2, 4]);
    let (code, v) = json(&["gen", "handle", &s, "--facets", &format!("{i},{k}")]);
    assert_eq!(code, 1);
    assert!(v["witness"]["reason"].as_str().unwrap().contains("intersect"));
    assert_eq!(tighttri(&["gen", "handle", &s, "--facets", &i]).status.code(), Some(2));
}

#[test]
fn two_sphere_commands() {
    let (code, v) = json(&["decompose", "builtin:icosahedron"]);
    assert_eq!(code, 0);
    assert_eq!((v["details"]["t"].clone(), v["details"]["i"].clone()), (0.into(), 1.into()));
    let (code, v) = json(&["cycles", "builtin:cycle:7", "--mod3"]);
    assert_eq!(code, 1);
    assert_eq!(v["witness"]["len"], 7);
    let (code, v) = json(&["cycles", "builtin:icosahedron", "--max-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["count"], 20);
    assert_eq!(tighttri(&["decompose", "builtin:cycle:4"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert!(tighttri(&["--help"]).status.success());
    assert!(tighttri(&["check", "tight", "--help"]).status.success());
}

#[test]
fn plaintext_and_json_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "rp2.txt");
    let j = path(dir.path(), "rp2.json");
    let x = tighttri::builtin::rp2_6();
    let f = ComplexFile::from_complex("rp2", &x);
    std::fs::write(&t, f.to_text()).unwrap();
    std::fs::write(&j, f.to_json()).unwrap();
    let (_, a) = json(&["check", "tight", &t, "--field", "2"]);
    let (_, b) = json(&["check", "tight", &j, "--field", "2"]);
    assert_eq!(without_time(a), without_time(b));
}

fn arb_file() -> impl Strategy<Value = ComplexFile> {
    prop::collection::vec(prop::collection::btree_set(0u32..12, 1..=4), 1..8).prop_map(|fs| {
        let x =
            tighttri::complex::Complex::from_facets(fs.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap();
        ComplexFile::from_complex("random", &x)
    })
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(f in arb_file(), shuffle in any::<u64>()) {
        // JSON and text both round trip byte for byte
        let j = f.to_json();
        let parsed = ComplexFile::parse(&j, "x").unwrap();
        prop_assert_eq!(&parsed, &f);
        prop_assert_eq!(parsed.to_json(), j);
        let t = f.to_text();
        let parsed = ComplexFile::parse(&t, "x").unwrap();
        prop_assert_eq!(&parsed, &f);
        prop_assert_eq!(parsed.to_text(), t);

        // scrambled text parses to the same complex
        let mut lines: Vec<Vec<u32>> = f.facets.clone();
        let n = lines.len();
        lines.rotate_left(shuffle as usize % n);
        for l in &mut lines {
            l.reverse();
        }
        let scrambled: String = lines.iter().map(|l| format!("{}  # c\n", l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t"))).collect();
        let p1 = ComplexFile::parse(&scrambled, "random").unwrap();
        let p2 = ComplexFile::parse(&p1.to_json(), "random").unwrap();
        prop_assert_eq!(&p1, &p2);
        prop_assert_eq!(p1.to_complex().unwrap(), f.to_complex().unwrap());
    }
}
