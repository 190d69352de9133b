use std::path::PathBuf;

use novdef_cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn novdef(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("novdef").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_tpa_on_a01() {
    let (code, out, _) = novdef(&["check", "--identity", "tpa", &fixture("A01.alg")]);
    assert_eq!(code, 0);
    assert_eq!(out, "TPA: pass\n");
}

#[test]
fn check_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(
        &path,
        r#"{"dim": 2, "ops": {"dot": [[1, 1, 1, "1"]], "bracket": [[1, 2, 2, "1"], [2, 1, 2, "-1"]]}}"#,
    )
    .unwrap();
    let (code, out, _) = novdef(&["check", "--identity", "TPA", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out, "TPA: FAIL at (e1,e2,e1) residual -e2\n");
}

#[test]
fn equiv_without_admissible_epsilon() {
    let (code, out, _) = novdef(&["equiv", &fixture("F_0_h.def"), &fixture("F_0_2h.def")]);
    assert_eq!(code, 1);
    assert!(out.contains("no admissible ε_h"), "{out}");
}

#[test]
fn equiv_methods_agree_on_equivalent_pair() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.def");
    let y = dir.path().join("y.def");
    let (c1, _, _) = novdef(&["family2d", "--a", "h", "--b", "0", "--order", "4", "-o", x.to_str().unwrap()]);
    let (c2, _, _) = novdef(&["family2d", "--a", "h", "--b", "h^2+h^3", "--order", "4", "-o", y.to_str().unwrap()]);
    assert_eq!((c1, c2), (0, 0));
    for method in ["auto", "closed-form", "solver"] {
        let (code, out, err) = novdef(&["equiv", x.to_str().unwrap(), y.to_str().unwrap(), "--method", method]);
        assert_eq!(code, 0, "{method}: {out}{err}");
        assert!(out.contains("equivalent\nwitness:"), "{out}");
    }
}

#[test]
fn closed_form_rejects_non_family_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.def");
    let (code, _, _) = novdef(&["deform-commutator", &fixture("poly3_gelfand.alg"), "--order", "3", "-o", d.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, err) = novdef(&["equiv", d.to_str().unwrap(), d.to_str().unwrap(), "--method", "closed-form"]);
    assert_eq!(code, 3, "{err}");
    let (code, out, _) = novdef(&["equiv", d.to_str().unwrap(), d.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("method: solver\nequivalent"), "{out}");
}

#[test]
fn operad_dims_five() {
    let (code, out, _) = novdef(&["operad-dims", "5"]);
    assert_eq!((code, out.as_str()), (0, "Nov(5)=70 TPois(5)=74\n"));
    let (code, _, err) = novdef(&["operad-dims", "6"]);
    assert_eq!(code, 3);
    assert!(err.contains("outside the tabulated range"));
}

#[test]
fn solve_compatible_standard_bracket() {
    let (code, out, _) = novdef(&["solve-compatible", &fixture("bracket2.alg")]);
    assert_eq!(code, 0);
    assert!(out.contains("e1*e1 = p2*e1+p1*e2\ne1*e2 = (p2+1)*e2\ne2*e1 = p2*e2\n"), "{out}");
    assert!(out.contains("NOV_RIGHTCOMM holds identically"));
    let (code, _, _) = novdef(&["solve-compatible", &fixture("sl2.alg")]);
    assert_eq!(code, 1);
}

#[test]
fn deform_np_identifies_family_member() {
    let (code, out, _) = novdef(&["deform-np", &fixture("A01_np.alg"), "--params", "a=1/2,b=-1", "--order", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("family member: a_h = 1/2h@order=4, b_h = 1-h@order=4"), "{out}");
    assert!(out.contains("NOVIKOV: pass") && out.contains("TPA: pass") && out.contains("LIE: pass"));
}

#[test]
fn deform_np_symbolic_parameters() {
    let (code, out, _) = novdef(&["deform-np", &fixture("Alam_np.alg"), "--order", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("e1*e1 = lambda*e1"));
}

#[test]
fn deform_np_rejects_non_np_pair() {
    let (code, _, err) = novdef(&["deform-np", &fixture("A01.alg")]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("circ"));
}

#[test]
fn limit_of_written_deformation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.def");
    let (code, _, _) = novdef(&["deform-np", &fixture("A00_np.alg"), "--params", "a=2,b=3", "-o", d.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = novdef(&["limit", d.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.ends_with("TPA: pass\nLIE: pass\n"), "{out}");
}

#[test]
fn normalize_examples() {
    let (code, out, _) = novdef(&["normalize", "--a=-h", "--b", "3h^2+5h^3", "--order", "6"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("case: Case1(m=2, b_m=3)\n"), "{out}");
    let (code, out, _) = novdef(&["normalize", "--a", "0", "--b", "2h+h^2", "--order", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("Case3"), "{out}");
    let (code, _, err) = novdef(&["normalize", "--a", "1", "--b", "1", "--order", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("catalog"), "{err}");
    let (code, out, _) = novdef(&["normalize", &fixture("F_0_2h.def")]);
    assert_eq!(code, 0);
    assert!(out.contains("Case3"), "{out}");
}

#[test]
fn gelfand_constructions() {
    let (code, out, _) = novdef(&["gelfand", "--euler", "7", "--identity", "s5"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("S5: pass\n"));
    let (code, out, _) = novdef(&["gelfand", &fixture("poly3_euler.alg"), "--identity", "nov-leftsym"]);
    assert_eq!(code, 0);
    assert!(out.contains("[circ]\ne1*e2 = e2\ne1*e3 = 2*e3\ne2*e2 = e3\n"), "{out}");
    let (code, out, _) = novdef(&["gelfand", "--dd", "5", "--span", "1,0,0,0,0;0,2,0,0,0;0,0,-1,0,0"]);
    assert_eq!(code, 0);
    assert!(out.contains("[span] closed\n"), "{out}");
    assert!(out.contains("e2*e3 = 2*e3") && out.contains("e2*e1 = -2*e1") && out.contains("e3*e1 = e2"), "{out}");
}

#[test]
fn catalog_lists_three_entries() {
    let (code, out, _) = novdef(&["catalog", "--lambda", "2"]);
    assert_eq!(code, 0);
    for name in ["== A00", "== A01", "== Alam", "e1*e1 = 2*e1"] {
        assert!(out.contains(name), "{out}");
    }
}

#[test]
fn json_format_is_machine_readable() {
    let (code, out, _) = novdef(&["--format", "json", "check", "--identity", "tpa", &fixture("A01.alg")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["identity"], "TPA");
    assert_eq!(v["passed"], true);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--format", "json", "normalize", "--a", "h^2", "--b", "h^3", "--order", "6"];
    assert_eq!(novdef(&args), novdef(&args));
}

#[test]
fn file_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad_index = dir.path().join("a.alg");
    std::fs::write(&bad_index, r#"{"dim": 2, "ops": {"dot": [[3, 1, 1, "1"]]}}"#).unwrap();
    let (code, _, err) = novdef(&["check", "--identity", "lie", bad_index.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("index 3 is outside 1..=2"), "{err}");

    let bad_scalar = dir.path().join("b.alg");
    std::fs::write(&bad_scalar, r#"{"dim": 1, "ops": {"dot": [[1, 1, 1, "x"]]}}"#).unwrap();
    let (code, _, err) = novdef(&["check", "--identity", "lie", bad_scalar.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("ops.dot"), "{err}");

    let (code, _, _) = novdef(&["check", "--identity", "lie", "/nonexistent.alg"]);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(novdef(&["frobnicate"]).0, 3);
    assert_eq!(novdef(&["check", &fixture("A01.alg")]).0, 3);
    assert_eq!(novdef(&["check", "--identity", "nope", &fixture("A01.alg")]).0, 3);
    let (code, out, _) = novdef(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("operad-dims"));
}

#[test]
fn empty_ops_is_zero_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.alg");
    std::fs::write(&path, r#"{"dim": 3, "ops": {"circ": []}}"#).unwrap();
    let (code, out, _) = novdef(&["check", "--identity", "nov-leftsym", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "NOV_LEFTSYM: pass\n"));
}
