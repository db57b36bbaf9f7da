use std::fs;
use std::path::Path;

use etf_core::cli::{run, CheckGraphJson, SearchManifest, SolutionLine, StandardFormJson, VerifyJson};
use etf_core::feasibility::SieveReport;
use etf_core::frames::FrameFile;
use etf_core::seidel::FrameParams;
use etf_core::{frame_9_6, CubeRoot, SeidelMatrix};

fn etf(args: &[&str]) -> (i32, String, String) {
    let out = run(std::iter::once("etf").chain(args.iter().copied()));
    (out.exit_code, out.stdout, out.stderr)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn corrupted_nine() -> SeidelMatrix {
    let q = frame_9_6();
    SeidelMatrix::from_upper(9, |i, j| if (i, j) == (1, 3) { q.root(i, j).conj() } else { q.root(i, j) }).unwrap()
}

#[test]
fn verify_nine() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "nine.crsm", &frame_9_6().to_crsm());
    let (code, out, _) = etf(&["verify", &f]);
    assert_eq!(code, 0);
    assert_eq!(out, "signature: mu=-2 n=9 k=6\n");
    let (code, out, _) = etf(&["verify", &f, "--conditions", "--format", "json"]);
    assert_eq!(code, 0);
    let v: VerifyJson = serde_json::from_str(&out).unwrap();
    assert_eq!((v.mu, v.k, v.conditions_mu), (Some(-2), Some(6), Some(-2)));
}

#[test]
fn verify_corrupted_reports_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.crsm", &corrupted_nine().to_crsm());
    let (code, out, err) = etf(&["verify", &f]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not a signature matrix: (Q^2)["), "{out}");
    assert!(!err.is_empty());
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.crsm", "2\n1 1\n1 0\n");
    let (code, _, err) = etf(&["verify", &f]);
    assert_eq!(code, 2);
    assert!(err.contains("diagonal"), "{err}");
    assert_eq!(etf(&["verify", "/nonexistent.crsm"]).0, 2);
    let (code, _, err) = etf(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(etf(&["--help"]).0, 0);
}

#[test]
fn feasible_tsv_and_json() {
    let (code, out, _) = etf(&["feasible", "--max-n", "100", "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n\tk\tmu\te\tlambda1\tlambda2");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "9\t6\t-2\t3\t-4\t2");
    let (_, out, _) = etf(&["feasible", "--max-n", "100", "--format", "json"]);
    let rows: Vec<FrameParams> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 8);
    let (_, out, _) = etf(&["feasible", "--explain", "12", "--format", "json"]);
    let r: SieveReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.candidates.len(), 1);
}

#[test]
fn params_command() {
    let (code, out, _) = etf(&["params", "--n", "81", "--mu", "-2", "--format", "json"]);
    assert_eq!(code, 0);
    let p: FrameParams = serde_json::from_str(&out).unwrap();
    assert_eq!((p.k, p.lambda1, p.lambda2), (45, -10, 8));
    let (code, _, err) = etf(&["params", "--n", "12", "--mu", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("45"));
}

#[test]
fn standard_form_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = [0u8, 1, 2, 0, 1, 1, 2, 0, 2].map(CubeRoot::from_exponent);
    let f = write(dir.path(), "sw.crsm", &frame_9_6().conjugate_diagonal(&d).unwrap().to_crsm());
    let (code, out, _) = etf(&["standard-form", &f, "--format", "json"]);
    assert_eq!(code, 0);
    let s: StandardFormJson = serde_json::from_str(&out).unwrap();
    let q = SeidelMatrix::parse_crsm(&s.matrix).unwrap();
    assert!(q.is_standard_form());
    assert_eq!(s.diagonal.len(), 9);
}

#[test]
fn graph_round_trip_and_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let nine = write(dir.path(), "nine.crsm", &frame_9_6().to_crsm());
    let bad = write(dir.path(), "bad.crsm", &corrupted_nine().to_crsm());
    for (name, matrix, ok) in [("g", &nine, true), ("h", &bad, false)] {
        let (code, dg, _) = etf(&["to-graph", matrix, "--isolate", "1"]);
        assert_eq!(code, 0);
        let g = write(dir.path(), &format!("{name}.dg"), &dg);
        let (check, out, _) = etf(&["check-graph", &g, "--format", "json"]);
        let report: CheckGraphJson = serde_json::from_str(&out).unwrap();
        assert_eq!(report.e.is_some(), ok);
        let (code, bordered, _) = etf(&["from-graph", &g, "--border"]);
        assert_eq!(code, 0);
        let b = write(dir.path(), &format!("{name}.crsm"), &bordered);
        let (verify, _, _) = etf(&["verify", &b]);
        assert_eq!(check, verify, "check-graph and verify disagree on {name}");
        assert_eq!(check == 0, ok);
    }
    let (code, dg, _) = etf(&["to-graph", &nine]);
    assert_eq!(code, 0);
    let g = write(dir.path(), "full.dg", &dg);
    let (_, back, _) = etf(&["from-graph", &g]);
    assert_eq!(back, frame_9_6().to_crsm());
    assert_eq!(etf(&["to-graph", &nine, "--isolate", "10"]).0, 2);
}

#[test]
fn construct_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = etf(&["construct", "nine"]);
    assert_eq!((code, out.as_str()), (0, frame_9_6().to_crsm().as_str()));
    let a = write(dir.path(), "a.crsm", &out);
    let (code, t, _) = etf(&["construct", "tensor", &a, &a]);
    assert_eq!(code, 0);
    let (code, p, _) = etf(&["construct", "power9", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(t, p);
    assert_eq!(SeidelMatrix::parse_crsm(&p).unwrap().order(), 81);
    assert_eq!(etf(&["construct", "power9", "--m", "2", "--size-cap", "80"]).0, 3);
    let triv = write(dir.path(), "t.crsm", &SeidelMatrix::trivial(3).unwrap().to_crsm());
    assert_eq!(etf(&["construct", "tensor", &triv, &a]).0, 1);
    let out_path = dir.path().join("p1.crsm");
    assert_eq!(etf(&["construct", "power9", "--m", "1", "--out", out_path.to_str().unwrap()]).0, 0);
    assert_eq!(fs::read_to_string(out_path).unwrap(), frame_9_6().to_crsm());
}

#[test]
fn search_streams_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("out");
    let (code, out, _) =
        etf(&["search", "--n", "9", "--mu", "-2", "--limit", "3", "--emit-dir", emit.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    for (t, line) in lines[..3].iter().enumerate() {
        let s: SolutionLine = serde_json::from_str(line).unwrap();
        assert_eq!(s.solution, t + 1);
        let file = emit.join(s.path.unwrap());
        let q = SeidelMatrix::parse_crsm(&fs::read_to_string(file).unwrap()).unwrap();
        assert_eq!(q.token_rows().count(), s.rows.len());
    }
    let manifest: SearchManifest = serde_json::from_str(&fs::read_to_string(emit.join("manifest.json")).unwrap()).unwrap();
    assert_eq!((manifest.solutions, manifest.complete, manifest.files.len()), (3, false, 3));
    assert!(manifest.nodes > 0);
    let (code, _, err) = etf(&["search", "--n", "12", "--mu", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("necessary"));
}

#[test]
fn frame_command_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "nine.crsm", &frame_9_6().to_crsm());
    let out_path = dir.path().join("v.json");
    let (code, out, _) = etf(&["frame", &f, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("passed"));
    let file = FrameFile::from_json(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!((file.n, file.k), (9, 6));
    assert!(file.report.passed);
    let (_, json, _) = etf(&["frame", &f, "--format", "json"]);
    assert_eq!(FrameFile::from_json(&json).unwrap(), file);
    let bad = write(dir.path(), "bad.crsm", &corrupted_nine().to_crsm());
    assert_eq!(etf(&["frame", &bad]).0, 1);
}
