use std::path::PathBuf;
use std::process::Command;

use regmod::{passport, Field, FieldSpec};
use regmod_cli::{parse_module_file, render_module_file, AnyModule};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn regmod(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_regmod"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().expect("exit code"),
    }
}

#[test]
fn passport_of_fixture() {
    let r = regmod(&["passport", &data("fixture.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "rank=1 piece={q2}\nrank=2 piece={q1,q3}\nfaithful=true\n"
    );
}

#[test]
fn passport_of_empty_generators() {
    let r = regmod(&["passport", &data("empty.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "rank=0 piece={q1,q2,q3}\nfaithful=false\n");
}

#[test]
fn passport_over_rationals() {
    let r = regmod(&["passport", &data("rational.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "rank=1 piece={q2}\nrank=2 piece={q1,q3}\nfaithful=true\n"
    );
}

#[test]
fn bad_files_exit_2_with_diagnostic() {
    let r = regmod(&["passport", &data("malformed.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);

    let r = regmod(&["passport", &data("p4.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("field.p"), "{}", r.stderr);

    let r = regmod(&["passport", &data("no-such-file.json")]);
    assert_eq!(r.code, 2);
}

#[test]
fn passport_json() {
    let r = regmod(&["--json", "passport", &data("fixture.json")]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["faithful"], true);
    assert_eq!(v["passport"][0]["rank"], 1);
    assert_eq!(v["passport"][1]["piece"], serde_json::json!(["q1", "q3"]));
}

#[test]
fn iso_with_rescaled_fixture() {
    let r = regmod(&["iso", &data("fixture.json"), &data("rescaled.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "ISOMORPHIC\n");

    let r = regmod(&[
        "iso",
        &data("fixture.json"),
        &data("rescaled.json"),
        "--emit-map",
    ]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.starts_with("ISOMORPHIC\nmap rank=1 piece={q2}\n"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.contains("map rank=2 piece={q1,q3}"));
    assert!(r.stdout.contains("generator images:"));

    let r = regmod(&[
        "--json",
        "iso",
        &data("fixture.json"),
        &data("rescaled.json"),
        "--emit-map",
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["map"]["pieces"].as_array().unwrap().len(), 2);
}

#[test]
fn iso_with_different_profile() {
    let r = regmod(&["iso", &data("fixture.json"), &data("rank122.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stdout,
        "NOT ISOMORPHIC\nentry 1: rank=1 piece={q2} vs rank=1 piece={q1}\n"
    );
}

#[test]
fn iso_exit_codes_are_symmetric() {
    let files = [
        "fixture.json",
        "rescaled.json",
        "rank122.json",
        "empty.json",
        "other_atoms.json",
        "rational.json",
    ];
    for a in files {
        for b in files {
            let ab = regmod(&["iso", &data(a), &data(b)]).code;
            let ba = regmod(&["iso", &data(b), &data(a)]).code;
            assert_eq!(ab, ba, "{a} vs {b}");
        }
    }
}

#[test]
fn iso_context_errors() {
    let r = regmod(&["iso", &data("fixture.json"), &data("other_atoms.json")]);
    assert_eq!(r.code, 2);
    let r = regmod(&["iso", &data("fixture.json"), &data("rational.json")]);
    assert_eq!(r.code, 2);
    let r = regmod(&["iso", &data("fixture.json"), &data("malformed.json")]);
    assert_eq!(r.code, 2);
}

#[test]
fn iso_of_non_faithful_modules_omits_map() {
    let r = regmod(&[
        "iso",
        &data("empty.json"),
        &data("empty.json"),
        "--emit-map",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "ISOMORPHIC\nmap omitted: modules are not faithful\n"
    );
}

#[test]
fn basis_on_homogeneous_piece() {
    let r = regmod(&["basis", &data("fixture.json"), "--piece", "q1,q3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "rank=2 piece={q1,q3}\nb1: [(1,0,1),(0,0,0)]\nb2: [(0,0,0),(1,0,1)]\n"
    );

    let r = regmod(&[
        "basis",
        &data("fixture.json"),
        "--piece",
        "{q2}",
        "--strategy",
        "last",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "rank=1 piece={q2}\nb1: [(0,1,0),(0,0,0)]\n");
}

#[test]
fn basis_on_mixed_piece_reports_parts() {
    let r = regmod(&["basis", &data("fixture.json"), "--piece", "q1,q2"]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stdout,
        "NOT HOMOGENEOUS piece={q1,q2}\nrank=1 piece={q2}\nrank=2 piece={q1}\n"
    );

    let r = regmod(&["basis", &data("fixture.json"), "--piece", "q9"]);
    assert_eq!(r.code, 2);
    let r = regmod(&["basis", &data("fixture.json"), "--piece", ""]);
    assert_eq!(r.code, 2);
}

#[test]
fn membership_decisions() {
    let r = regmod(&[
        "member",
        &data("fixture.json"),
        "--vector",
        &data("member.json"),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(
        r.stdout.starts_with("MEMBER\nc1: (2,3,4)\nc2: (1,"),
        "{}",
        r.stdout
    );

    let r = regmod(&[
        "member",
        &data("fixture.json"),
        "--vector",
        &data("nonmember.json"),
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "NOT MEMBER\nfails at atom q2\n");

    // outside q2 the vector is zero, hence a member
    let r = regmod(&[
        "member",
        &data("fixture.json"),
        "--vector",
        &data("nonmember.json"),
        "--piece",
        "q1,q3",
    ]);
    assert_eq!(r.code, 0);

    let r = regmod(&[
        "--json",
        "member",
        &data("fixture.json"),
        "--vector",
        &data("nonmember.json"),
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"member": false, "atom": "q2"}));

    let r = regmod(&[
        "member",
        &data("rational.json"),
        "--vector",
        &data("member.json"),
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let r = regmod(&["verify", "--seed", "42", "--cases", "100"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(
        r.stdout.contains("all 24 properties passed"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.contains("oracle_equivalence"));

    let a = regmod(&["verify", "--seed", "9", "--cases", "10"]);
    let b = regmod(&["verify", "--seed", "9", "--cases", "10"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_with_zero_cases() {
    let r = regmod(&["verify", "--seed", "1", "--cases", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("0/0 ok"));
}

#[test]
fn verify_catches_injected_fault() {
    let r = regmod(&[
        "verify", "--seed", "42", "--cases", "20", "--fault", "passport",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("oracle_equivalence"));
    assert!(
        r.stdout.contains("counterexample for oracle_equivalence"),
        "{}",
        r.stdout
    );

    let r = regmod(&[
        "--json",
        "verify",
        "--seed",
        "42",
        "--cases",
        "20",
        "--fault",
        "inversion",
    ]);
    assert_eq!(r.code, 1);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let regularity = v["properties"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["name"] == "regularity")
        .unwrap();
    assert!(regularity["counterexample"].is_object());
}

#[test]
fn gen_is_deterministic_and_reparses() {
    let args = [
        "gen",
        "--seed",
        "1",
        "--atoms",
        "3",
        "--ambient",
        "2",
        "--gens",
        "2",
        "--field",
        "fp:5",
    ];
    let a = regmod(&args);
    let b = regmod(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let AnyModule::Fp(g) = parse_module_file(&a.stdout).unwrap() else {
        panic!("expected F_5 module");
    };
    assert_eq!(g.field().spec(), FieldSpec::Prime(5));
    assert_eq!((g.len(), g.ambient_dim(), g.algebra().dim()), (2, 2, 3));
    assert_eq!(render_module_file(&g), a.stdout);
}

#[test]
fn gen_rejects_bad_parameters() {
    for args in [
        [
            "gen",
            "--seed",
            "1",
            "--atoms",
            "3",
            "--ambient",
            "2",
            "--gens",
            "0",
            "--field",
            "fp:5",
        ],
        [
            "gen",
            "--seed",
            "1",
            "--atoms",
            "0",
            "--ambient",
            "2",
            "--gens",
            "1",
            "--field",
            "fp:5",
        ],
        [
            "gen",
            "--seed",
            "1",
            "--atoms",
            "3",
            "--ambient",
            "2",
            "--gens",
            "1",
            "--field",
            "fp:6",
        ],
        [
            "gen",
            "--seed",
            "1",
            "--atoms",
            "3",
            "--ambient",
            "2",
            "--gens",
            "1",
            "--field",
            "reals",
        ],
    ] {
        assert_eq!(regmod(&args).code, 2, "{args:?}");
    }
}

#[test]
fn render_then_parse_is_identity() {
    for seed in 0..40u64 {
        let field = if seed % 2 == 0 {
            "rational".to_string()
        } else {
            format!("fp:{}", [2, 3, 97][seed as usize % 3])
        };
        let out = regmod_cli::cmd_gen(
            seed,
            1 + seed as usize % 6,
            1 + seed as usize % 4,
            1 + seed as usize % 5,
            &field,
        );
        assert_eq!(out.code, 0);
        let parsed = parse_module_file(&out.stdout).unwrap();
        let rendered = match &parsed {
            AnyModule::Fp(g) => render_module_file(g),
            AnyModule::Q(g) => render_module_file(g),
        };
        assert_eq!(rendered, out.stdout);
        let again = parse_module_file(&rendered).unwrap();
        match (parsed, again) {
            (AnyModule::Fp(a), AnyModule::Fp(b)) => {
                assert_eq!(passport(&a).unwrap(), passport(&b).unwrap())
            }
            (AnyModule::Q(a), AnyModule::Q(b)) => assert_eq!(a, b),
            _ => panic!("field changed in round trip"),
        }
    }
}
