use std::path::{Path, PathBuf};
use std::process::Command;

use conceptual_spaces::cli::run;
use conceptual_spaces::space_io::{fruit_space_json, load_space};
use serde_json::Value;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
    fruit: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let fruit = dir.path().join("fruit.json");
        std::fs::write(&fruit, fruit_space_json()).unwrap();
        Fixture { dir, fruit }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.path(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

fn cs(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("cs").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = cs(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    serde_json::from_str(&out).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_lists_the_fruit_concepts() {
    let f = Fixture::new();
    let v = json(&["validate", s(&f.fruit)]);
    assert_eq!(v["concepts"].as_object().unwrap().len(), 7);
    assert_eq!(v["concepts"]["apple"]["cuboids"], 3);
    assert_eq!(v["dimensions"], serde_json::json!(["hue", "round", "sweet"]));
}

#[test]
fn intersect_prints_the_golden_concept() {
    let f = Fixture::new();
    let v = json(&["op", "intersect", s(&f.fruit), "apple", "pear"]);
    assert!((v["mu0"].as_f64().unwrap() - 0.6872892788).abs() <= 1e-6);
    assert_eq!(v["c"], 10.0);
    let w = &v["domain_weights"];
    assert!((w["color"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert!((w["shape"].as_f64().unwrap() - 1.375).abs() <= 1e-12);
    assert!((w["taste"].as_f64().unwrap() - 1.125).abs() <= 1e-12);
    assert_eq!(v["cuboids"].as_array().unwrap().len(), 1);
}

#[test]
fn project_keeps_one_domain_with_full_weight() {
    let f = Fixture::new();
    let v = json(&["op", "project", s(&f.fruit), "apple", "--domains", "color"]);
    assert_eq!(v["domain_weights"], serde_json::json!({"color": 1.0}));
}

#[test]
fn cut_then_unify_through_saved_files() {
    let f = Fixture::new();
    let cut = f.path("cut.json");
    let v = json(&["op", "cut", s(&f.fruit), "banana", "--dim", "sweet", "--value", "0.6", "--save", "b", "--out", s(&cut)]);
    assert!(v["lower"].is_object() && v["upper"].is_object());
    let joined = f.path("joined.json");
    json(&["op", "unify", s(&cut), "b_lower", "b_upper", "--save", "back", "--out", s(&joined)]);
    let space = load_space(&joined).unwrap();
    let (banana, back) = (space.concept("banana").unwrap(), space.concept("back").unwrap());
    for i in 0..=10 {
        for j in 0..=10 {
            for k in 0..=10 {
                let x = [i as f64 / 10.0, j as f64 / 10.0, k as f64 / 10.0];
                assert!((banana.membership(&x) - back.membership(&x)).abs() <= 1e-9, "{x:?}");
            }
        }
    }
}

#[test]
fn cut_accepts_a_dimension_index() {
    let f = Fixture::new();
    let v = json(&["op", "cut", s(&f.fruit), "pear", "--dim", "0", "--value", "0.6"]);
    assert!(v["lower"].is_object() && v["upper"].is_object());
}

#[test]
fn relations_print_golden_values() {
    let f = Fixture::new();
    let fruit = s(&f.fruit);
    assert_eq!(json(&["rel", "subsethood", fruit, "granny_smith", "apple"]), 1.0);
    let imp = json(&["rel", "implies", fruit, "apple", "red"]).as_f64().unwrap();
    assert!((imp - 0.3333333333333332).abs() <= 1e-9);
    let sim = json(&["rel", "similarity", fruit, "pear", "apple"]).as_f64().unwrap();
    assert!(((sim - 0.007635094218859955) / sim).abs() <= 1e-12);
    assert!(json(&["rel", "between", fruit, "apple", "apple", "apple"]).as_bool().unwrap());
    let m = json(&["rel", "membership", fruit, "pear", "--point", "0.6,0.55,0.45"]);
    assert_eq!(m, 1.0);
}

#[test]
fn size_with_verification_reports_the_sampler() {
    let f = Fixture::new();
    let v = json(&["rel", "size", s(&f.fruit), "pear", "--verify", "--samples", "100000", "--seed", "7"]);
    assert_eq!(v["algorithm"], "ChaCha8");
    assert_eq!(v["samples"], 100000);
    assert_eq!(v["seed"], 7);
    assert!(v["relative_deviation"].as_f64().unwrap().abs() < 0.05);
    let plain = json(&["rel", "size", s(&f.fruit), "pear"]);
    assert_eq!(plain, v["closed_form"]);
}

#[test]
fn plot_writes_an_svg() {
    let f = Fixture::new();
    let out = f.path("fruit.svg");
    let v = json(&["plot", s(&f.fruit), "--dims", "hue,sweet", "--alpha", "0.3", "--alpha", "0.7", "--concepts", "apple,pear", "--out", s(&out)]);
    assert_eq!(v["alphas"], serde_json::json!([0.3, 0.7]));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains(r#"data-name="apple""#) && svg.contains(r#"data-name="pear""#));
    assert!(!svg.contains(r#"data-name="lemon""#));
}

#[test]
fn empty_space_is_valid() {
    let f = Fixture::new();
    let empty = f.write("empty.json", r#"{"dimensions": ["x"], "domains": {"d": [0]}, "concepts": {}}"#);
    let v = json(&["validate", s(&empty)]);
    assert_eq!(v["concepts"], serde_json::json!({}));
}

#[test]
fn bad_input_exits_with_2() {
    let f = Fixture::new();
    let fruit = s(&f.fruit);
    let mut broken: Value = serde_json::from_str(fruit_space_json()).unwrap();
    broken["concepts"]["apple"]["cuboids"][1]["hue"] = serde_json::json!([0.95, 1.0]);
    let broken = f.write("broken.json", &broken.to_string());
    let (code, _, err) = cs(&["validate", s(&broken)]);
    assert_eq!(code, 2);
    assert!(err.contains("apple"), "{err}");

    let missing = f.path("missing.json");
    let garbage = f.write("garbage.json", "{ not json");
    for args in [
        vec!["validate", s(&missing)],
        vec!["validate", s(&garbage)],
        vec!["op", "intersect", fruit, "apple", "kiwi"],
        vec!["op", "cut", fruit, "apple", "--dim", "weight", "--value", "1"],
        vec!["rel", "membership", fruit, "apple", "--point", "0.1,0.2"],
        vec!["plot", fruit, "--dims", "hue", "--out", "x.svg"],
        vec!["op", "intersect", fruit, "apple", "pear", "--save", "x"],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = cs(&args);
        assert_eq!(code, 2, "{args:?}: {out}{err}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_with_0() {
    let (code, out, _) = cs(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("validate") && out.contains("plot"));
}

#[test]
fn binary_uses_the_same_exit_codes() {
    let f = Fixture::new();
    let bin = env!("CARGO_BIN_EXE_cs");
    let ok = Command::new(bin).args(["rel", "subsethood", s(&f.fruit), "granny_smith", "apple"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().trim(), "1.0");
    let bad = Command::new(bin).args(["rel", "size", s(&f.fruit), "kiwi"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
