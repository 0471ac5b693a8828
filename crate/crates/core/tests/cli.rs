use std::process::Command;

use serde_json::{json, Value};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

fn azumaya(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_azumaya")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

#[test]
fn m2q_is_azumaya() {
    let r = azumaya(&["is-azumaya", "--algebra", &data("m2q.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["azumaya"], json!(true));
}

#[test]
fn dual_numbers_are_rejected_with_exit_1() {
    let r = azumaya(&["is-azumaya", "--algebra", &data("dual_numbers_q.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json(), json!({"azumaya": false, "determinant": "0", "inverse": null}));
}

#[test]
fn bad_cover_names_the_cover_node() {
    let r = azumaya(&["verify-tree", &data("bad_cover.json")]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["valid"], json!(false));
    assert_eq!(v["failure"]["path"], json!("node"));
    assert_eq!(v["failure"]["kind"], json!("cover"));
}

#[test]
fn x_squared_over_z_is_not_unramifiable() {
    let r = azumaya(&["unramifiable", "--ring", &data("z.json"), "--poly", &data("xsq.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.json(),
        json!({"unramifiable": false, "deltas": ["0", "0"], "cofactors": null})
    );
}

#[test]
fn hensel_subcommands() {
    let (z25, z9) = (data("z25.json"), data("z9.json"));
    let r = azumaya(&[
        "lift-root",
        "--ring",
        &z25,
        "--poly",
        &data("x2_plus_1.json"),
        "--root",
        &data("residue_2.json"),
    ]);
    assert_eq!((r.code, r.json()), (0, json!({"root": "7"})));
    let r = azumaya(&[
        "hensel-factor",
        "--ring",
        &z25,
        "--poly",
        &data("x2_plus_1.json"),
        "--f",
        &data("f_x_minus_2.json"),
        "--g",
        &data("g_x_minus_3.json"),
    ]);
    assert_eq!((r.code, r.json()), (0, json!({"f": ["18", "1"], "g": ["7", "1"]})));
    for method in ["newton", "paper"] {
        let r = azumaya(&[
            "lift-idempotent",
            "--ring",
            &z9,
            "--poly",
            &data("x2_minus_3x_plus_2.json"),
            "--element",
            &data("idempotent_2x_plus_2.json"),
            "--method",
            method,
        ]);
        assert_eq!((r.code, r.json()), (0, json!({"idempotent": ["2", "8"]})));
    }
}

#[test]
fn split_reproduces_the_golden_tree() {
    let args = [
        "split",
        "--algebra",
        &data("quaternion_z_half.json"),
        "--family",
        "quaternion",
    ];
    let first = azumaya(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    let golden = std::fs::read_to_string(data("golden/quaternion_z_half.json")).unwrap();
    assert_eq!(first.stdout, golden);
    assert_eq!(azumaya(&args).stdout, first.stdout);
}

#[test]
fn golden_trees_verify_in_both_modes() {
    for name in [
        "cover_m2_z",
        "m2_q",
        "m2_z25_scrambled",
        "quaternion_z9",
        "quaternion_z_half",
    ] {
        let path = data(&format!("golden/{name}.json"));
        for mode in ["etale", "fppf"] {
            let r = azumaya(&["verify-tree", &path, "--mode", mode]);
            assert_eq!(r.code, 0, "{name} in {mode} mode: {}", r.stdout);
        }
    }
}

#[test]
fn skolem_noether_finds_the_conjugator() {
    let r = azumaya(&[
        "skolem-noether",
        "--algebra",
        &data("m2z9.json"),
        "--psi",
        &data("psi_conj_z9.json"),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["rank"], json!(1));
    assert_eq!(v["conjugator"], json!(["1", "1", "0", "1"]));
}

#[test]
fn center_of_dual_numbers_is_everything() {
    let r = azumaya(&["center", "--algebra", &data("dual_numbers_q.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    let r = azumaya(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert!(!r.stderr.is_empty());

    let r = azumaya(&["is-azumaya", "--algebra", "/nonexistent/a.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--algebra"), "{}", r.stderr);

    let r = azumaya(&["is-azumaya", "--algebra", &data("m2q.json"), "--bogus"]);
    assert_eq!(r.code, 2);

    let r = azumaya(&["lift-root", "--ring", &data("z.json"), "--poly", &data("xsq.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("locality"), "{}", r.stderr);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = std::env::temp_dir().join(format!("azumaya-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ring = dir.join("ring.json");
    std::fs::write(&ring, r#"{"base": {"kind": "zmod_pk", "p": 5, "k": 2}, "steps": [{"kind": "monic_quotient", "var": "x", "modulus": [1, "one", 1]}]}"#).unwrap();
    let r = azumaya(&[
        "unramifiable",
        "--ring",
        ring.to_str().unwrap(),
        "--poly",
        &data("xsq.json"),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("ring.steps[0].modulus[1]"), "{}", r.stderr);

    let alg = dir.join("alg.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("m2q.json")).unwrap()).unwrap();
    v["sc"][0][0][0] = json!("2");
    std::fs::write(&alg, v.to_string()).unwrap();
    let r = azumaya(&["is-azumaya", "--algebra", alg.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("algebra"), "{}", r.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}
