use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oncross::{CrossSection, GreenRelation, OrderedTree, Transformation};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn read_golden(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap()
}

fn oncross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oncross")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn phi_table_matches_golden() {
    let out = oncross(&["phi", "--tree", path(&golden("t3_5.json")), "--table"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), read_golden("table1.txt"));
    assert_eq!(stdout(&out).lines().count(), 18);
}

#[test]
fn single_element() {
    let out = oncross(&["phi", "--tree", path(&golden("t3_5.json")), "--partition", "1,2|3,4|5"]);
    assert!(out.status.success());
    let t: Transformation = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(t.images(), &[1, 1, 3, 3, 4]);
}

#[test]
fn render_matches_golden() {
    let out = oncross(&["render", "--tree", path(&golden("t2_5.json")), "--format", "ascii"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), read_golden("t2_5_ascii.txt"));
    let dot = oncross(&["render", "--tree", path(&golden("t2_5.json")), "--format", "dot"]);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn json_outputs_read_back() {
    let out = oncross(&["render", "--tree", path(&golden("t3_5.json")), "--format", "json"]);
    assert_eq!(stdout(&out), read_golden("t3_5.json"));

    let out = oncross(&["enumerate-trees", "--n", "4"]);
    let trees: Vec<OrderedTree> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(trees.len(), 12);
    assert!(trees.iter().all(OrderedTree::is_decreasing));

    let out = oncross(&["phi", "--tree", path(&golden("t3_5.json"))]);
    let s: CrossSection = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(s.len(), 16);
    s.validate().unwrap();
}

#[test]
fn l_section_and_dual() {
    let out = oncross(&["l-section", "--tree", path(&golden("right_comb3.json"))]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), read_golden("fig_dual_l.json"));

    let dir = tempfile::tempdir().unwrap();
    let l_file = dir.path().join("l.json");
    std::fs::write(&l_file, stdout(&out)).unwrap();
    for (fix, value) in [("1", 1), ("n+1", 4), ("4", 4)] {
        let out = oncross(&["dual", "--l-section", l_file.to_str().unwrap(), "--fix", fix]);
        assert!(out.status.success());
        let r: CrossSection = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(r.relation(), GreenRelation::R);
        assert_eq!(r.len(), 8);
        assert!(r.contains(&Transformation::constant(4, value)));
    }
    let bad = oncross(&["dual", "--l-section", l_file.to_str().unwrap(), "--fix", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_exits_zero() {
    for (theorem, n) in [("description", "4"), ("l-sections", "3"), ("dual", "3")] {
        let out = oncross(&["verify", "--theorem", theorem, "--n", n]);
        assert_eq!(out.status.code(), Some(0), "{theorem}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["discrepancies"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn brute_force_is_deterministic() {
    let a = oncross(&["brute-force", "--n", "4", "--relation", "R"]);
    let b = oncross(&["brute-force", "--n", "4", "--relation", "R"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["count"], 12);
}

#[test]
fn classify_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let t: OrderedTree = serde_json::from_str(&read_golden("t3_5.json")).unwrap();
    let m = dir.path().join("mirror.json");
    std::fs::write(&m, serde_json::to_string(&t.mirror()).unwrap()).unwrap();

    let out = oncross(&[
        "classify",
        "--tree",
        path(&golden("t3_5.json")),
        "--tree",
        m.to_str().unwrap(),
        "--oracle",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"]["pairs"].as_array().unwrap().len(), 16);

    let out = oncross(&[
        "classify",
        "--tree",
        path(&golden("t3_5.json")),
        "--tree",
        path(&golden("t2_5.json")),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["isomorphic"], false);
    assert_eq!(v["orientation"], "none");

    let one = oncross(&["classify", "--tree", path(&golden("t3_5.json"))]);
    assert_eq!(one.status.code(), Some(2));
}

#[test]
fn theta_counts() {
    let out = oncross(&["theta", "--tree", path(&golden("t3_5.json"))]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let counts: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["cardinality"].as_u64().unwrap())
        .collect();
    // skeleton 1, 3, 4, 5
    assert_eq!(counts, vec![2, 1, 1, 1]);
    let off = oncross(&["theta", "--tree", path(&golden("t3_5.json")), "--vertex", "2"]);
    assert_eq!(off.status.code(), Some(2));
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"n\": 4,\n \"root\": }").unwrap();
    let out = oncross(&["render", "--tree", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");

    // a search tree that is not decreasing
    let t4 = dir.path().join("t4.json");
    std::fs::write(
        &t4,
        r#"{"n":4,"root":1,"nodes":{"1":{"daughter":2},"2":{"daughter":4},"4":{"son":3}}}"#,
    )
    .unwrap();
    let out = oncross(&["phi", "--tree", t4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("subordinate"));

    assert_eq!(
        oncross(&["phi", "--tree", t4.to_str().unwrap(), "--partition", "1,3|2,4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(oncross(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(oncross(&["brute-force", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn counts() {
    let out = oncross(&["count", "--n", "4"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["r_cross_sections"].as_u64().unwrap())
        .collect();
    assert_eq!(r, vec![1, 2, 5, 12]);
}
