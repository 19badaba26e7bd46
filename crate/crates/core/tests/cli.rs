//! End-to-end exercise of the command-line surface: the model-file grammar,
//! the subcommand dispatch, the exit-code contract, and the structured
//! output schema.

use std::path::PathBuf;

use koszul::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("koszul-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn kb_table_on_builtin() {
    let (code, out, _) = invoke(&["kb", "--model", "iwasawa3", "--pi", "X1^X2 + X2^X3"]);
    assert_eq!(code, 0);
    assert!(out.contains("dim  1  5  11  14  11  5  1"), "{out}");
}

#[test]
fn hodge_pyramid_text() {
    let (code, out, _) = invoke(&["hodge", "--model", "torus3"]);
    assert_eq!(code, 0);
    let pyramid: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.contains("hodge diamond"))
        .skip(1)
        .take(7)
        .collect();
    assert_eq!(pyramid.len(), 7);
    assert_eq!(pyramid[3].split_whitespace().collect::<Vec<_>>(), vec!["1", "9", "9", "1"]);
}

#[test]
fn check_nil6_pi2_matches_expected_verdicts() {
    let (code, out, _) = invoke(&["check", "--model", "nil6", "--pi", "X1^X6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("poisson:         true"), "{out}");
    assert!(out.contains("e1-degenerate:   false"), "{out}");
    assert!(out.contains("unimodular:      true"), "{out}");
    // defect table starts 0 3 ...
    assert!(out.contains("defect[k]:       0 3"), "{out}");
}

#[test]
fn json_report_schema_and_values() {
    let (code, out, _) =
        invoke(&["report", "--model", "nil6", "--pi", "X2^X3", "--format", "json", "--pages", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["model", "n", "pi", "hodge", "kb", "lp", "pages", "checks"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["model"], "nil6");
    assert_eq!(v["n"], 6);
    let kb: Vec<u64> =
        v["kb"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(kb.len(), 13);
    assert_eq!(&kb[..3], &[1, 9, 38]);
    assert_eq!(v["checks"]["e1_degenerate"], true);
    assert_eq!(v["checks"]["euler"], 0);
}

#[test]
fn ss_pages_flag() {
    let (code, out, _) =
        invoke(&["ss", "--model", "iwasawa3", "--pi", "X2^X3", "--pages", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("page r=1"), "{out}");
    assert!(out.contains("page r=2"), "{out}");
    assert!(out.contains("d_1 = 0"), "{out}");
}

#[test]
fn dims_pipeline_via_files() {
    // Compute the two input tables through the CLI, reuse them as @files.
    let dir = scratch_dir();
    let x_path = dir.join("nil6_pi3.dims");
    let z_path = dir.join("torus3.dims");

    let (code, out, _) =
        invoke(&["kb", "--model", "nil6", "--pi", "X1^X3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let x: Vec<String> =
        v["kb"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    std::fs::write(&x_path, x.join(",")).unwrap();

    let (code, out, _) =
        invoke(&["kb", "--model", "torus3", "--pi", "X1^X3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let z: Vec<String> =
        v["kb"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    std::fs::write(&z_path, z.join(",")).unwrap();

    let (code, out, _) = invoke(&[
        "blowup",
        "--x",
        &format!("@{}", x_path.display()),
        "--z",
        &format!("@{}", z_path.display()),
        "--codim",
        "3",
        "--z-ddbar",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("1  8  31  80  155  232  266"), "{out}");
}

#[test]
fn trivial_from_model_and_diamond_literal() {
    let (code, out, _) = invoke(&["trivial", "--model", "torus3"]);
    assert_eq!(code, 0);
    assert!(out.contains("1  6  15  20  15  6  1"), "{out}");

    // The projective plane via a pyramid literal.
    let (code, out, _) =
        invoke(&["trivial", "--diamond", "1; 0,0; 0,1,0; 0,0; 1"]);
    assert_eq!(code, 0);
    assert!(out.contains("0  0  3  0  0"), "{out}");
}

#[test]
fn pbundle_line_over_line() {
    let (code, out, _) = invoke(&["pbundle", "--z", "0,2,0", "--rank", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("0  0  4  0  0"), "{out}");
}

#[test]
fn model_file_with_embedded_pi() {
    let dir = scratch_dir();
    let path = dir.join("nil6_pi1.model");
    std::fs::write(
        &path,
        "model nilsix\ndim 6\nd w2 = - w1^w4\nd w3 = - w1^w5 - w2^w6\nd w5 = - w4^w6\npi = X2^X3\n",
    )
    .unwrap();
    let (code, out, _) = invoke(&["kb", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pi:    X2^X3"), "{out}");
    assert!(out.contains("308"), "{out}");
}

#[test]
fn exit_codes() {
    // usage error
    let (code, _, _) = invoke(&[]);
    assert_eq!(code, 2);
    // missing file
    let (code, _, err) = invoke(&["kb", "--model", "/nonexistent/m.model"]);
    assert_eq!(code, 2, "{err}");
    // parse error in pi expression
    let (code, _, err) = invoke(&["kb", "--model", "nil6", "--pi", "X2^X2"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"), "{err}");
    // domain refusal: non-Poisson bivector
    let (code, _, err) = invoke(&["kb", "--model", "iwasawa3", "--pi", "X1^X3"]);
    assert_eq!(code, 1);
    assert!(err.contains("Schouten"), "{err}");
    // domain refusal: codimension too small
    let (code, _, _) =
        invoke(&["blowup", "--x", "0,0,3,0,0", "--z", "1", "--codim", "1", "--z-ddbar"]);
    assert_eq!(code, 1);
    // success
    let (code, _, _) = invoke(&["validate", "--model", "nil6"]);
    assert_eq!(code, 0);
}

#[test]
fn byte_identical_reruns() {
    for args in [
        vec!["report", "--model", "nil6", "--pi", "X1^X6", "--format", "json", "--pages", "2"],
        vec!["report", "--model", "iwasawa3", "--pi", "X2^X3"],
        vec!["hodge", "--model", "nil6", "--format", "json"],
    ] {
        let first = invoke(&args);
        let second = invoke(&args);
        assert_eq!(first, second, "{args:?}");
    }
}
