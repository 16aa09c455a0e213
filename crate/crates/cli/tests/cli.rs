use std::path::Path;
use std::process::{Command, Output};

fn nrdsts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrdsts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d19.design");
    let o = nrdsts(&["construct", "own", "19", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nrdsts(&["verify", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS self_orthogonal.class_pair_intersection"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("d.design");
    assert!(nrdsts(&["construct", "cyclotomic", "103", "--out", p(&good)]).status.success());
    let text = std::fs::read_to_string(&good).unwrap();

    let cut = dir.path().join("cut.design");
    std::fs::write(&cut, text.lines().take(40).collect::<Vec<_>>().join("\n")).unwrap();
    let o = nrdsts(&["verify", p(&cut)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    // Exchange the first labels of the first two classes.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let c = lines.iter().position(|l| l.starts_with("classes")).unwrap();
    let mut a: Vec<String> = lines[c + 1].split(' ').map(String::from).collect();
    let mut b: Vec<String> = lines[c + 2].split(' ').map(String::from).collect();
    std::mem::swap(&mut a[0], &mut b[0]);
    lines[c + 1] = a.join(" ");
    lines[c + 2] = b.join(" ");
    let bad = dir.path().join("bad.design");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = nrdsts(&["verify", p(&bad)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL near_resolution"));
}

#[test]
fn base_rows_listing() {
    let o = nrdsts(&["emit", "base-rows", "103"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 17);
    assert_eq!(out.lines().next().unwrap(), "{1, 4, 6}\t{21, 24, 26}\t20, 83");
}

#[test]
fn searches_report_nonexistence() {
    let o = nrdsts(&["search", "starters", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("exhausted"));
    let o = nrdsts(&["frame", "search", "2^4", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nrdsts(&["search", "k4", "37"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn randomized_frame_search_needs_a_seed() {
    let o = nrdsts(&["frame", "search", "2^13"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn frame_inflate_fill() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.frame");
    let big = dir.path().join("big.frame");
    let filler = dir.path().join("d19.design");
    let out = dir.path().join("d235.design");
    assert!(nrdsts(&["frame", "search", "2^13", "--seed", "17", "--out", p(&f)]).status.success());
    let o = nrdsts(&["frame", "inflate", p(&f), "--n", "9", "--out", p(&big)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("type 18^13"));
    assert!(nrdsts(&["construct", "own", "19", "--out", p(&filler)]).status.success());
    let o = nrdsts(&["frame", "fill", p(&big), "--filler", p(&filler), "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("235 points, 235 classes"));
    assert_eq!(nrdsts(&["verify", p(&out)]).status.code(), Some(0));
    assert_eq!(nrdsts(&["verify", p(&big)]).status.code(), Some(0));
}

#[test]
fn pipeline_run_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = dir.path().join("r.recipe");
    std::fs::write(
        &recipe,
        "# two rows\nx = 17\nconstruction = cyclotomic\n\nx = 19\nconstruction = none\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = nrdsts(&["pipeline", "run", p(&recipe), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("x=17 v=103 [cyclotomic] constructed"));
    assert!(s.contains("x=18"));
    assert!(s.contains("x=19 v=115 [none] skipped"));
    assert!(out.join("nrdsts-103.design").exists());

    std::fs::write(&recipe, "x = 17\nconstruction = magic\n").unwrap();
    assert_eq!(nrdsts(&["pipeline", "run", p(&recipe)]).status.code(), Some(2));
}

#[test]
fn field_table_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = nrdsts(&["pipeline", "field-table", "--out", p(d)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("15/15 pass"));
    }
    for q in [103, 349] {
        let name = format!("nrdsts-{q}.design");
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
    }
}

#[test]
fn latin_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.gdd");
    let o = nrdsts(&["latin", "truncate", "--variant", "2", "--n", "8", "--w", "0", "--y", "3", "--out", p(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("type 8^7 3^1"));
    assert_eq!(nrdsts(&["verify", p(&out)]).status.code(), Some(0));
    let o = nrdsts(&["latin", "mols", "4"]);
    assert_eq!(stdout(&o).lines().count(), 3 * 4 + 2);
}
