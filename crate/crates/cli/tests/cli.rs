//! End-to-end tests of the binary: exit codes, JSON schema round-trips, and
//! the worked quotient example from the fixture documents.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lrcohom_cli::report::{CheckReport, CohomologyReport, ConnectionReport};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrcohom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_passes_on_canonical_fixture() {
    let out = run(&["check", fixture("cubic_z3.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("check: ok"));
    assert!(text.contains("pseudo-reflections: none"));
    assert!(text.contains("m1+m2+m3-m = 1"));
}

#[test]
fn check_json_roundtrips() {
    let out = run(&[
        "check",
        fixture("cubic_z3.toml").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: CheckReport = serde_json::from_str(&stdout(&out)).unwrap();
    let again: CheckReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    assert_eq!(report.algebra.degree_shift, 0);
    let action = report.action.unwrap();
    assert!(action.compatible);
    assert!(!action.strict_equality);
    assert_eq!(action.residue_sum, 1);
}

#[test]
fn check_fails_on_inhomogeneous_input() {
    let dir = std::env::temp_dir().join("lrcohom_test_badspec");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "f = \"x1^3 + x2^2\"\nweights = [1, 1, 1]\n").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "validation failure exits 1");
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("not weighted homogeneous"), "stderr: {err}");
    assert!(
        err.contains("x2^2") || err.contains("x1^3"),
        "an offending monomial is named: {err}"
    );
}

#[test]
fn malformed_document_exits_parse_code() {
    let dir = std::env::temp_dir().join("lrcohom_test_parse");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("garbled.toml");
    std::fs::write(&path, "f = \"x1^3 +\"\nweights = [1, 1, 1]\n").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "parse failure exits 3");
    let path2 = dir.join("notoml.toml");
    std::fs::write(&path2, "this is not toml [[").unwrap();
    let out = run(&["check", path2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cohomology_plain_cubic_dimensions() {
    let out = run(&[
        "cohomology",
        fixture("cubic.toml").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: CohomologyReport = serde_json::from_str(&stdout(&out)).unwrap();
    let again: CohomologyReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    for row in &report.rows {
        for cell in &row.cells {
            let expected = if row.degree == 0 { 1 } else { 0 };
            assert_eq!(cell.dim, expected, "n={}, e={}", cell.n, row.degree);
        }
    }
    assert!(report.warnings.is_empty());
}

#[test]
fn cohomology_invariants_quotient_example() {
    let out = run(&[
        "cohomology",
        fixture("cubic_z3.toml").to_str().unwrap(),
        "--invariants",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: CohomologyReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.bridge_note.is_some());
    for row in &report.rows {
        for cell in &row.cells {
            if cell.n >= 1 {
                assert_eq!(cell.invariant, Some(0), "invariant H^{}", cell.n);
            }
            if row.degree == 0 && cell.n >= 1 {
                assert_eq!(cell.dim, 1);
                assert_eq!(cell.blocks.len(), 1);
                assert_eq!(cell.blocks[0].xi_weight, 1);
            }
        }
    }
}

#[test]
fn cohomology_invariants_require_galois_assertion() {
    let dir = std::env::temp_dir().join("lrcohom_test_nogalois");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.toml");
    std::fs::write(
        &path,
        "f = \"x1^3 + x2^3 + x3^3\"\nweights = [1, 1, 1]\ndegree_window = [-2, 2]\n\
         [action]\norder = 3\nexponents = [1, 1, 2]\n",
    )
    .unwrap();
    let out = run(&["cohomology", path.to_str().unwrap(), "--invariants"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("galois"), "stderr: {err}");
}

#[test]
fn connection_equivariant_report() {
    let out = run(&[
        "connection",
        fixture("cubic_z3.toml").to_str().unwrap(),
        "--module",
        fixture("module_x3.toml").to_str().unwrap(),
        "--connection",
        fixture("conn_invariant.toml").to_str().unwrap(),
        "--second",
        fixture("conn_trivial.toml").to_str().unwrap(),
        "--equivariant",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: ConnectionReport = serde_json::from_str(&stdout(&out)).unwrap();
    let again: ConnectionReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    assert!(report.verified);
    assert_eq!(report.curvature_zero, Some(true));
    assert_eq!(report.integrability_zero, Some(true));
    let eq = report.equivariant.unwrap();
    assert!(eq.average_invariant);
    assert!(eq.invariant_class_zero);
    assert_eq!(eq.invariant_h1_total, 0);
    assert!(eq.conclusion.contains("unique"));
    assert!(report.comparison.unwrap().equivalent);
}

#[test]
fn connection_two_generator_module() {
    // connections on the redundant presentation (x3, x1*x3) must respect the
    // syzygy; a valid gamma is computed from the one-generator picture:
    // ∇(u1) = 0 forces ∇(u2) = ∇(x1·u1) = G(x1)·u1.
    let cx = lrcohom::lrc::Complex::build_default(
        lrcohom::wpoly::WeightedAlgebra::new(
            lrcohom::wpoly::parse_poly("x1^3+x2^3+x3^3").unwrap(),
            [1, 1, 1],
        )
        .unwrap(),
        None,
    )
    .unwrap();
    let gens = &cx.presentation().gens;
    let dir = std::env::temp_dir().join("lrcohom_test_twogen");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("conn.toml");
    let mut doc = String::new();
    for g in gens {
        let gx1 = g.apply(cx.alg(), &lrcohom::wpoly::parse_poly("x1").unwrap());
        doc.push_str(&format!(
            "[[gamma]]\nmatrix = [[\"0\", \"{}\"], [\"0\", \"0\"]]\n\n",
            gx1
        ));
    }
    std::fs::write(&path, doc).unwrap();
    let out = run(&[
        "connection",
        fixture("cubic.toml").to_str().unwrap(),
        "--module",
        fixture("module_x3_two_gens.toml").to_str().unwrap(),
        "--connection",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("connection: verified"));
    assert!(text.contains("curvature: zero"));
}

#[test]
fn connection_broken_file_pinpoints_violation() {
    let out = run(&[
        "connection",
        fixture("cubic_z3.toml").to_str().unwrap(),
        "--module",
        fixture("module_x3.toml").to_str().unwrap(),
        "--connection",
        fixture("conn_broken.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("INVALID"));
    assert!(text.contains("derivation syzygy"));
}

#[test]
fn undersized_presentation_bound_is_flagged_as_instability() {
    // bound 1 harvests no syzygies at all, so cochain spaces are too big and
    // the B vs B+2 re-check must catch the discrepancy
    let dir = std::env::temp_dir().join("lrcohom_test_unstable");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.toml");
    std::fs::write(
        &path,
        "f = \"x1^3 + x2^3 + x3^3\"\nweights = [1, 1, 1]\ndegree_window = [-2, 2]\n\
         presentation_bound = 1\n",
    )
    .unwrap();
    let out = run(&["cohomology", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "instability exits 2");
    assert!(stdout(&out).contains("instability"));
}

#[test]
fn e8_sweep_is_clean_and_fast() {
    let out = run(&[
        "cohomology",
        fixture("e8.toml").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: CohomologyReport = serde_json::from_str(&stdout(&out)).unwrap();
    for row in &report.rows {
        for cell in &row.cells {
            if cell.n >= 1 {
                assert_eq!(cell.dim, 0, "H^{} at {}", cell.n, row.degree);
            }
        }
    }
}
