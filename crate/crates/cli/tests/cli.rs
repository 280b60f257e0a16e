use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const PLANE: &str = r#"{"rank": 2, "torsion_order": 1, "free_params": 1, "q": [{"i": 1, "j": 2, "tors": 0, "free": [1]}]}"#;
const WORKED: &str = r#"{"rank": 3, "torsion_order": 1, "free_params": 1, "q": [
    {"i": 1, "j": 2, "tors": 0, "free": [2]},
    {"i": 1, "j": 3, "tors": 0, "free": [1]},
    {"i": 2, "j": 3, "tors": 0, "free": [1]}]}"#;
const HEISENBERG: &str = r#"{"n": 2, "z": 1, "comm": [{"i": 1, "j": 2, "central": [1]}]}"#;
const GENERIC_CHI: &str = r#"{"images": [{"tors": 0, "free": [1]}], "torsion_order": 1, "free_params": 1}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

fn qtorus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(args)
        .env_remove("QTORUS_SEED")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn center_of_generic_plane_is_trivial() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", PLANE);
    let out = qtorus(&["center", p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out), json!({ "center_basis": [], "trivial": true }));
}

#[test]
fn complement_of_worked_example() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", WORKED);
    let c = ws.file("c.json", "[[1, 0, 0]]");
    let out = qtorus(&["complement", "--c-basis", p(&c), "--s-max", "10", p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out),
        json!({ "s": 1, "mu": [[1], [1]], "E_basis": [[1, 1, 0], [1, 0, 1]] })
    );
}

#[test]
fn non_commutative_subgroup_reports_pair() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", PLANE);
    let b = ws.file("b.json", "[[1, 0], [0, 1]]");
    let out = qtorus(&["commutative", "--subgroup", p(&b), p(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["commutative"], json!(false));
    assert_eq!(r["failing_pair"]["indices"], json!([1, 2]));

    let line = ws.file("line.json", r#"{"basis": [[2, 0]]}"#);
    let out = qtorus(&["commutative", "--subgroup", p(&line), p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_errors_name_the_field() {
    let ws = Workspace::new();
    let bad = ws.file(
        "bad.json",
        r#"{"rank": 2, "torsion_order": 1, "free_params": 1, "q": [{"i": 1, "j": 3, "tors": 0, "free": [1]}]}"#,
    );
    let out = qtorus(&["center", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("q[0].j"), "stderr: {err}");

    let garbled = ws.file("garbled.json", "{ not json");
    assert_eq!(qtorus(&["center", p(&garbled)]).status.code(), Some(2));
    assert_eq!(qtorus(&["center", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(qtorus(&["no-such-verb"]).status.code(), Some(2));
}

#[test]
fn missing_complement_exits_one() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", r#"{"rank": 2, "torsion_order": 1, "free_params": 1, "q": [{"i": 1, "j": 2, "tors": 0, "free": [1]}]}"#);
    let c = ws.file("c.json", "[[2, 0]]");
    let out = qtorus(&["complement", "--c-basis", p(&c), p(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["error"].is_string());
}

#[test]
fn multiply_monomials() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", PLANE);
    let one = r#"[{"free_exponents": [0], "cyclotomic": ["1"]}]"#;
    let x2 = ws.file("x2.json", &format!(r#"{{"terms": [{{"exponent": [0, 1], "coeff": {one}}}]}}"#));
    let x1 = ws.file("x1.json", &format!(r#"{{"terms": [{{"exponent": [1, 0], "coeff": {one}}}]}}"#));
    let out = qtorus(&["multiply", p(&spec), p(&x2), p(&x1)]);
    assert_eq!(out.status.code(), Some(0));
    // x̄_2 x̄_1 = t^{-1} x̄_1 x̄_2
    assert_eq!(
        report(&out),
        json!({ "terms": [{ "exponent": [1, 1], "coeff": [{ "free_exponents": [-1], "cyclotomic": ["1"] }] }] })
    );
}

/// Weight module over `C = span{e_1}`: `x̄_2` acts by the identity matrix.
fn weight_module_json() -> &'static str {
    r#"{"split": [[1, 0], [0, 1]], "r": 1, "d": 1, "actions": [{"j": 2, "matrix": [[
        {"terms": [{"exponent": [0, 0], "coeff": [{"free_exponents": [0], "cyclotomic": ["1"]}]}]}
    ]]}]}"#
}

#[test]
fn module_verbs_on_weight_module() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", PLANE);
    let m = ws.file("m.json", weight_module_json());

    let out = qtorus(&["consistency", "--module", p(&m), p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["passed"], json!(true));

    let out = qtorus(&["exterior", "--module", p(&m), p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["exponent"], json!(1));

    let out = qtorus(&["gk", "--module", p(&m), "--k-max", "5", p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out), json!({ "dims": [1, 3, 5, 7, 9, 11], "degree": 1 }));

    let c = ws.file("c.json", "[[1, 0]]");
    let out = qtorus(&["torsion", "--module", p(&m), "--subgroup", p(&c), "--deg-bound", "2", p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["annihilators"], json!([null]));

    let e = ws.file("e.json", "[[0, 1]]");
    let out = qtorus(&["torsion", "--module", p(&m), "--subgroup", p(&e), "--deg-bound", "1", p(&spec)]);
    let r = report(&out);
    let terms = r["annihilators"][0]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);

    let out = qtorus(&["dimension", "--module", p(&m), p(&spec)]);
    assert_eq!(report(&out)["dimension"], json!(1));

    let out = qtorus(&["cyclicity", "--module", p(&m), "--k-max", "4", p(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["generates_interior"], json!(true));
    assert_eq!(r["hypothesis"], json!("met"));
}

#[test]
fn inconsistent_module_exits_one() {
    let ws = Workspace::new();
    let spec = ws.file(
        "spec.json",
        r#"{"rank": 3, "torsion_order": 1, "free_params": 1, "q": [
            {"i": 1, "j": 2, "tors": 0, "free": [1]}, {"i": 1, "j": 3, "tors": 0, "free": [1]}]}"#,
    );
    let unit = r#"{"terms": [{"exponent": [0, 0, 0], "coeff": [{"free_exponents": [0], "cyclotomic": ["1"]}]}]}"#;
    let twisted = r#"{"terms": [{"exponent": [1, 0, 0], "coeff": [{"free_exponents": [0], "cyclotomic": ["1"]}]}]}"#;
    let m = ws.file(
        "m.json",
        &format!(
            r#"{{"split": [[1,0,0],[0,1,0],[0,0,1]], "r": 1, "d": 1,
               "actions": [{{"j": 2, "matrix": [[{unit}]]}}, {{"j": 3, "matrix": [[{twisted}]]}}]}}"#
        ),
    );
    let out = qtorus(&["consistency", "--module", p(&m), p(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["failing_pairs"], json!([[2, 3]]));
}

#[test]
fn nilpotent_reduction_and_harness() {
    let ws = Workspace::new();
    let d = ws.file("d.json", HEISENBERG);
    let chi = ws.file("chi.json", GENERIC_CHI);
    let out = qtorus(&["reduce-nilpotent", p(&d), p(&chi)]);
    assert_eq!(out.status.code(), Some(0));
    let golden = fs::read_to_string(format!(
        "{}/../core/tests/golden/generic_quantum_plane.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);

    let l = ws.file("l.json", r#"[{"a": [1, 0], "central": [0]}, {"a": [0, 0], "central": [1]}]"#);
    let out = qtorus(&["theorem-b", "--subgroup", p(&l), p(&d), p(&chi)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], json!("pass"));
    assert_eq!(r["torsion_free"], json!(true));
    assert_eq!(r["finite_length"], json!("finite length"));

    let m = ws.file("m.json", weight_module_json());
    let out = qtorus(&["theorem-b", "--subgroup", p(&l), "--module", p(&m), p(&d), p(&chi)]);
    assert_eq!(out.status.code(), Some(0));

    let whole = ws.file("h.json", r#"[{"a": [1, 0], "central": [0]}, {"a": [0, 1], "central": [0]}]"#);
    assert_eq!(qtorus(&["theorem-b", "--subgroup", p(&whole), p(&d), p(&chi)]).status.code(), Some(1));

    let n3 = ws.file("n3.json", r#"{"images": [{"tors": 1, "free": []}], "torsion_order": 3, "free_params": 0}"#);
    let out = qtorus(&["theorem-b", "--subgroup", p(&l), p(&d), p(&n3)]);
    assert_eq!(report(&out)["verdict"], json!("hypothesis not met"));
}

#[test]
fn bundled_scenarios() {
    let out = qtorus(&["verify-all", &scenario("generic_quantum_plane.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], json!(true));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == json!("pass")));

    let out = qtorus(&["verify-all", "--bundled", "cyclotomic-plane"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let cyc = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == json!("cyclicity"))
        .unwrap();
    assert_eq!(cyc["status"], json!("hypothesis not met"));
    assert!(cyc["detail"]["central_probes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["generates_interior"] == json!(false)));
}

#[test]
fn empty_scenario_is_an_input_error() {
    let ws = Workspace::new();
    let empty = ws.file("empty.json", "{}");
    assert_eq!(qtorus(&["verify-all", p(&empty)]).status.code(), Some(2));
    let no_modules = ws.file("none.json", &format!(r#"{{"spec": {PLANE}, "modules": []}}"#));
    assert_eq!(qtorus(&["verify-all", p(&no_modules)]).status.code(), Some(2));
}

#[test]
fn output_is_byte_stable_and_seeded() {
    let ws = Workspace::new();
    let a = ws.dir.path().join("a.json");
    let b = ws.dir.path().join("b.json");
    let path = scenario("generic_quantum_plane.json");
    assert_eq!(qtorus(&["verify-all", &path, "--output", p(&a)]).status.code(), Some(0));
    assert_eq!(qtorus(&["verify-all", &path, "--output", p(&b)]).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let seeded = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["verify-all", &path])
        .env("QTORUS_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(seeded.status.code(), Some(0));
    let bad_seed = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["verify-all", &path])
        .env("QTORUS_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(bad_seed.status.code(), Some(2));
}
