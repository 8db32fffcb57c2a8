use std::path::PathBuf;
use std::process::{Command, Output};

use heisenberg_core::grouprec::{recognize, FiniteGroup};
use heisenberg_core::text::{parse_cayley, parse_cocycle, parse_pairing, parse_refinement};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisenberg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn has_line(o: &Output, line: &str) -> bool {
    stdout(o).lines().any(|l| l == line)
}

#[test]
fn classify_examples() {
    for (group, expected) in [("Z/6", "H2_order=1"), ("Z/2xZ/4", "H2_order=2"), ("Z/3xZ/3xZ/3", "H2_order=27")] {
        let o = run(&["classify", "--group", group, "--coeff", "QZ"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(has_line(&o, expected), "{group}: {}", stdout(&o));
    }
}

#[test]
fn classify_brute_cross_check() {
    let o = run(&["classify", "--group", "Z/2xZ/4", "--coeff", "QZ", "--brute"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "brute_H2_order=2"));
    assert!(has_line(&o, "brute_agrees=yes"));

    let o = run(&["classify", "--group", "Z/2xZ/2", "--coeff", "Z/2", "--brute"]);
    assert!(has_line(&o, "H2_order=8"));
    assert!(has_line(&o, "brute_agrees=yes"));
}

#[test]
fn classify_brute_refuses_large_inputs() {
    let o = run(&["classify", "--group", "Z/3xZ/3xZ/3", "--coeff", "QZ", "--brute"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(has_line(&o, "H2_order=27"));
    assert!(stderr(&o).contains("search space too large"));
}

#[test]
fn classify_reports_parse_position() {
    let o = run(&["classify", "--group", "Z/2 x Q", "--coeff", "QZ"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1, column 7"), "{}", stderr(&o));
}

#[test]
fn d4_and_q8_models_are_cohomologous_over_qz() {
    let cert = scratch("d4_q8_cert.txt");
    let o = run(&["equiv", &fixture("d4_qz.txt"), &fixture("q8_qz.txt"), "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "cohomologous=yes"));

    let c = parse_cocycle(&std::fs::read_to_string(fixture("d4_qz.txt")).unwrap()).unwrap();
    let c2 = parse_cocycle(&std::fs::read_to_string(fixture("q8_qz.txt")).unwrap()).unwrap();
    let f = parse_refinement(&std::fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(f.defect(), c.sub(&c2).unwrap());
}

#[test]
fn d4_and_q8_models_differ_over_z2() {
    let o = run(&["equiv", &fixture("d4_z2.txt"), &fixture("q8_z2.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "omega_equal=yes"));
    assert!(has_line(&o, "refinement=absent"));
    assert!(has_line(&o, "cohomologous=no"));
    assert!(stdout(&o).contains("reason="));
}

#[test]
fn equiv_separates_different_omega() {
    let zero = scratch("zero_pairing.txt");
    std::fs::write(&zero, "pairing on Z/2xZ/2 coeff QZ\n").unwrap();
    let o = run(&["equiv", &fixture("d4_qz.txt"), zero.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "omega_equal=no"));
    assert!(has_line(&o, "separator=(e1,e2) omega_a=1/2 omega_b=0"));
}

#[test]
fn equiv_with_itself_gives_trivial_certificate() {
    for name in ["d4_qz.txt", "d4_z2.txt", "carry_z4.txt"] {
        let cert = scratch(&format!("self_{name}"));
        let o = run(&["equiv", &fixture(name), &fixture(name), "--out", cert.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let f = parse_refinement(&std::fs::read_to_string(cert).unwrap()).unwrap();
        assert!(f.values().iter().all(|v| v.is_zero()), "{name}: {f}");
    }
}

#[test]
fn equiv_rejects_mismatched_inputs() {
    let o = run(&["equiv", &fixture("d4_z2.txt"), &fixture("d4_qz.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mismatched"));
}

#[test]
fn malformed_files_are_input_errors() {
    let o = run(&["refine", &fixture("duplicate.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 1"));

    let o = run(&["refine", &fixture("bad_index.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 2"));

    let o = run(&["refine", &fixture("not_cocycle.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a cocycle"));

    let o = run(&["refine", &fixture("missing.txt")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn refine_depends_on_coefficients() {
    let o = run(&["refine", &fixture("sym_qz.txt"), "--brute"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "f(1) = 1/4"));
    assert!(has_line(&o, "brute_agrees=yes"));

    let o = run(&["refine", &fixture("sym_z2.txt"), "--brute"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "refinement=absent"));
    assert!(has_line(&o, "brute_refinement=absent"));

    let o = run(&["refine", &fixture("d4_qz.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(has_line(&o, "symmetric=no"));
}

#[test]
fn refine_carry_cocycle() {
    let out = scratch("carry_refinement.txt");
    let o = run(&["refine", &fixture("carry_z4.txt"), "--brute", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let c = parse_cocycle(&std::fs::read_to_string(fixture("carry_z4.txt")).unwrap()).unwrap();
    let f = parse_refinement(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(f.defect(), c);
}

#[test]
fn recognize_d4_and_q8() {
    let o = run(&["recognize", "builtin:d4", "--subgroup", "center", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    for line in ["class=2", "omega_nondegenerate=yes", "equivalent_over_original=yes", "check_diagram=pass"] {
        assert!(has_line(&o, line), "{line}");
    }

    let o = run(&["recognize", "builtin:q8", "--subgroup", "center", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    for line in [
        "class=2",
        "omega_nondegenerate=yes",
        "equivalent_over_original=no",
        "equivalent_over_divisible=yes",
        "check_omega_factorization=pass",
    ] {
        assert!(has_line(&o, line), "{line}");
    }
}

#[test]
fn recognize_rejects_s3() {
    let o = run(&["recognize", "builtin:s3", "--subgroup", "trivial"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("[G,G] ⊄ Z(G)"));
}

#[test]
fn recognize_input_errors() {
    let o = run(&["recognize", "builtin:nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["recognize", "builtin:d4", "--subgroup", "0,1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn recognize_beta_certificate_reverifies() {
    let beta = scratch("q8_beta.txt");
    let o = run(&["recognize", "builtin:q8", "--out", beta.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = parse_pairing(&std::fs::read_to_string(beta).unwrap()).unwrap();
    let g = heisenberg_core::grouprec::quaternion8();
    let p = recognize(&g, &g.center()).unwrap();
    assert_eq!(parsed, p.beta);
    assert_eq!(parsed.omega(), p.beta.omega());
}

#[test]
fn build_then_recognize_round_trip() {
    let table = scratch("q8_model.cay");
    let o = run(&["build", &fixture("q8_z2.txt"), "--out", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "order=8"));
    assert!(has_line(&o, "center_order=2"));
    let g: FiniteGroup = parse_cayley(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(g.order(), 8);

    // central elements (t, 0) are listed at indices 0 and 4
    let o = run(&["recognize", table.to_str().unwrap(), "--subgroup", "0 4", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "equivalent_over_original=no"));
    assert!(stdout(&o).contains("(1,2) = 1/2"));
}

#[test]
fn outputs_are_deterministic() {
    let cases: [&[&str]; 4] = [
        &["build", "--seed", "11", "--group", "Z/2xZ/4", "--coeff", "QZ"],
        &["build", "--seed", "3", "--group", "Z/3xZ/3", "--coeff", "Z/3"],
        &["recognize", "builtin:unitriangular(3,Z/3)", "--check"],
        &["equiv", &fixture("d4_qz.txt"), &fixture("q8_qz.txt")],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn build_random_cocycle_is_reusable() {
    let o = run(&["build", "--seed", "5", "--group", "Z/2xZ/2", "--coeff", "Z/4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let body = &text[text.find("cocycle table").unwrap()..];
    let c = parse_cocycle(body).unwrap();
    assert!(c.is_cocycle());
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "--group", "Z/2xZ/2", "--coeff", "Z/2"]);
    assert_eq!(o.status.code(), Some(0));
    for line in ["count=16", "distinct_omega=2", "classes=8", "H2_order=8"] {
        assert!(has_line(&o, line), "{line}");
    }
    let o = run(&["enumerate", "--group", "Z/2", "--coeff", "QZ"]);
    assert_eq!(o.status.code(), Some(2));
}
