//! End-to-end tests of the binary: exit codes, determinism, and the JSON
//! surfaces of every subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use superalg::iwasawa::generate_instance;
use superalg::json::{self, InstanceJson, TermJson};
use superalg::{GaussianRational, SuperDims};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superalg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("superalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_is_byte_deterministic_under_seed() {
    let a = tmp("gen-a.json");
    let b = tmp("gen-b.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--seed",
            "7",
            "--output",
            a.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "gen",
            "--seed",
            "7",
            "--output",
            b.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = tmp("gen-c.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--seed",
            "8",
            "--output",
            c.to_str().unwrap()
        ])),
        0
    );
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn decompose_output_is_byte_deterministic() {
    let inst = tmp("det-inst.json");
    let a = tmp("det-a.json");
    let b = tmp("det-b.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--seed",
            "11",
            "--output",
            inst.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "decompose",
            "--input",
            inst.to_str().unwrap(),
            "--output",
            a.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "decompose",
            "--input",
            inst.to_str().unwrap(),
            "--output",
            b.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn decompose_generated_instance_passes() {
    let inst = tmp("dec-inst.json");
    let out = tmp("dec-out.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--n",
            "2",
            "--m",
            "1",
            "--degree",
            "3",
            "--seed",
            "42",
            "--output",
            inst.to_str().unwrap()
        ])),
        0
    );
    let r = run(&[
        "decompose",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&r),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&r.stderr)
    );
    let v = read_json(&out);
    assert_eq!(
        v["verification"]["all_passed"],
        serde_json::Value::Bool(true)
    );
    assert!(v["phi"].is_object() && v["psi"].is_object() && v["norms"].is_array());
}

#[test]
fn decompose_identity_instance_is_trivial() {
    // density-0 instance: M = δ, so Φ = Ψ = δ
    let spec =
        generate_instance::<GaussianRational>(SuperDims::new(2, 1).unwrap(), 3, 0, 0.0).unwrap();
    let inst = tmp("dec-id.json");
    let out = tmp("dec-id-out.json");
    std::fs::write(
        &inst,
        serde_json::to_string_pretty(&json::instance_to_json(&spec)).unwrap(),
    )
    .unwrap();
    let r = run(&[
        "decompose",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let v = read_json(&out);
    // δ decomposes as δ·δ: every off-diagonal entry of both factors is empty
    for factor in ["phi", "psi"] {
        let entries = v[factor]["entries"].as_array().unwrap();
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.as_array().unwrap().iter().enumerate() {
                let terms = e.as_array().unwrap();
                if i == j {
                    assert_eq!(terms.len(), 1);
                    assert_eq!(terms[0]["coeff"][0], "1/1");
                } else {
                    assert!(terms.is_empty());
                }
            }
        }
    }
}

#[test]
fn decompose_rejects_nonunit_sdet_with_exit_3() {
    let spec =
        generate_instance::<GaussianRational>(SuperDims::new(1, 1).unwrap(), 3, 0, 0.0).unwrap();
    let mut inst_json: InstanceJson = json::instance_to_json(&spec);
    // 1 + th1·thb1 on the even diagonal breaks sdet = 1 but not the pattern
    inst_json.matrix.entries[0][0].push(TermJson {
        coeff: ["1/1".into(), "0/1".into()],
        monomial: vec![0, 1],
    });
    let inst = tmp("dec-sl.json");
    std::fs::write(&inst, serde_json::to_string_pretty(&inst_json).unwrap()).unwrap();
    let r = run(&["decompose", "--input", inst.to_str().unwrap()]);
    assert_eq!(code(&r), 3);
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("SL constraint"), "stderr: {err}");
}

#[test]
fn decompose_rejects_malformed_input_with_exit_2() {
    let inst = tmp("dec-bad.json");
    std::fs::write(&inst, "{ not json").unwrap();
    assert_eq!(
        code(&run(&["decompose", "--input", inst.to_str().unwrap()])),
        2
    );

    let missing = tmp("does-not-exist.json");
    assert_eq!(
        code(&run(&["decompose", "--input", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn hopf_graded_passes_and_normal_fails() {
    let out = tmp("hopf-g.json");
    let r = run(&[
        "hopf",
        "--n",
        "1",
        "--m",
        "1",
        "--degree",
        "3",
        "--kind",
        "graded",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let v = read_json(&out);
    assert_eq!(v["passed"], serde_json::Value::Bool(true));

    let out = tmp("hopf-n.json");
    let r = run(&[
        "hopf",
        "--n",
        "1",
        "--m",
        "1",
        "--degree",
        "3",
        "--kind",
        "normal",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 1);
    let v = read_json(&out);
    for axiom in v["axioms"].as_array().unwrap() {
        let name = axiom["axiom"].as_str().unwrap();
        let status = axiom["status"].as_str().unwrap();
        if name == "(5a)" || name == "(6a)" {
            assert_eq!(status, "fail", "{name}");
            assert!(
                axiom["counterexample"].is_array(),
                "{name} needs a counterexample"
            );
        } else {
            assert_eq!(status, "pass", "{name}");
        }
    }
}

#[test]
fn hopf_m_zero_passes_either_kind() {
    for kind in ["graded", "normal"] {
        let r = run(&[
            "hopf", "--n", "2", "--m", "0", "--degree", "3", "--kind", kind,
        ]);
        assert_eq!(code(&r), 0, "kind {kind}");
    }
}

#[test]
fn oracle_passes_and_rejects_odd_block() {
    let out = tmp("oracle.json");
    let r = run(&[
        "oracle",
        "--n",
        "3",
        "--samples",
        "25",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let v = read_json(&out);
    assert!(v["max_phi_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["passed"], serde_json::Value::Bool(true));

    let r = run(&["oracle", "--n", "3", "--m", "1", "--samples", "1"]);
    assert_eq!(code(&r), 2);
    assert!(String::from_utf8_lossy(&r.stderr).contains("unsupported mode"));
}

#[test]
fn sdet_routes_agree_on_generated_instances() {
    let inst = tmp("sdet-inst.json");
    let out = tmp("sdet-out.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--n",
            "2",
            "--m",
            "1",
            "--degree",
            "3",
            "--seed",
            "5",
            "--output",
            inst.to_str().unwrap()
        ])),
        0
    );
    let r = run(&[
        "sdet",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let v = read_json(&out);
    assert_eq!(v["agree"], serde_json::Value::Bool(true));
    // generated instances have sdet = 1 = 1/1 + nothing else
    let sdet = v["sdet"].as_array().unwrap();
    assert_eq!(sdet.len(), 1);
    assert_eq!(sdet[0]["coeff"][0], "1/1");
    assert!(sdet[0]["monomial"].as_array().unwrap().is_empty());
}

#[test]
fn invert_round_trip_verifies() {
    let inst = tmp("inv-inst.json");
    let out = tmp("inv-out.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--n",
            "1",
            "--m",
            "1",
            "--degree",
            "3",
            "--seed",
            "3",
            "--output",
            inst.to_str().unwrap()
        ])),
        0
    );
    let r = run(&[
        "invert",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let v = read_json(&out);
    assert_eq!(v["verified"], serde_json::Value::Bool(true));
}

#[test]
fn float_mode_instances_decompose() {
    let inst = tmp("float-inst.json");
    let out = tmp("float-out.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--n",
            "2",
            "--m",
            "0",
            "--degree",
            "2",
            "--seed",
            "1",
            "--mode",
            "float",
            "--output",
            inst.to_str().unwrap()
        ])),
        0
    );
    let v = read_json(&inst);
    assert_eq!(v["mode"], "float");
    let r = run(&[
        "decompose",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&r),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&r.stderr)
    );
}
