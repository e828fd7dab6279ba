use std::path::Path;
use std::process::{Command, Output};

fn symlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlen"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn theorem3_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = symlen(&[
        "gen", "--theorem", "3", "--p", "2", "--m", "2", "--n", "2", "--k", "2", "--seed", "3",
        "--deg", "2", "--out", &p(d, "t3"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = symlen(&[
        "decompose", "--theorem", "3", "--in", &p(d, "t3.instance"), "--witness",
        &p(d, "t3.witness"), "--out", &p(d, "t3.out"), "--cert", &p(d, "t3.cert"),
    ]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{r}");
    assert_eq!(value(&r, "bound"), Some("4"));
    assert_eq!(value(&r, "bound_check"), Some("PASS"));
    let count: u32 = value(&r, "count").unwrap().parse().unwrap();
    assert!(count <= 4);
    let o = symlen(&["verify", "--cert", &p(d, "t3.cert")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "verify"), Some("PASS"));

    // same seed, same report
    let again = symlen(&[
        "decompose", "--theorem", "3", "--in", &p(d, "t3.instance"), "--witness",
        &p(d, "t3.witness"), "--out", &p(d, "t3b.out"), "--cert", &p(d, "t3b.cert"),
    ]);
    assert_eq!(
        std::fs::read_to_string(d.join("t3.cert")).unwrap(),
        std::fs::read_to_string(d.join("t3b.cert")).unwrap()
    );
    assert_eq!(value(&stdout(&again), "count"), value(&r, "count"));

    // search instead of the witness file
    let o = symlen(&[
        "decompose", "--theorem", "3", "--in", &p(d, "t3.instance"), "--provider", "search",
        "--deg", "2", "--support", "2", "--out", &p(d, "s.out"), "--cert", &p(d, "s.cert"),
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(3) | Some(4)), "{}", stdout(&o));
}

#[test]
fn corrupted_certificate_is_rejected_at_its_step() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    symlen(&["gen", "--theorem", "3", "--n", "1", "--seed", "1", "--out", &p(d, "a")]);
    let o = symlen(&[
        "decompose", "--theorem", "3", "--in", &p(d, "a.instance"), "--witness",
        &p(d, "a.witness"), "--out", &p(d, "a.out"), "--cert", &p(d, "a.cert"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(d.join("a.cert")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // the result line of the first step: change a Witt slot
    let k = lines.iter().position(|l| l.starts_with("step ")).unwrap() + 1;
    let bad = lines[k].replacen('[', "[1+", 1);
    let mut out: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
    out[k] = bad;
    std::fs::write(d.join("bad.cert"), out.join("\n")).unwrap();
    let o = symlen(&["verify", "--cert", &p(d, "bad.cert")]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{r}");
    assert_eq!(value(&r, "verify"), Some("FAIL"));
    assert!(value(&r, "step").is_some(), "{r}");
}

#[test]
fn dependent_slots_exit_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("dep.instance"),
        "field p=2 vars=x,y\ninstance theorem=4\n[x, 0] (x)\n[y, 0] (x^2)\n[x, 1] (y)\n",
    )
    .unwrap();
    std::fs::write(d.join("dep.witness"), "field p=2 vars=x,y\nwitness\n").unwrap();
    let o = symlen(&[
        "decompose", "--theorem", "4", "--in", &p(d, "dep.instance"), "--witness",
        &p(d, "dep.witness"), "--out", &p(d, "o"), "--cert", &p(d, "c"),
    ]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(3), "{r}");
    assert_eq!(value(&r, "dependent"), Some("yes"));
    assert!(r.lines().any(|l| l.starts_with("x[")), "{r}");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.instance"), "field p=2 vars=x\ninstance theorem=3\n[x^, 1] (x)\n")
        .unwrap();
    let o = symlen(&[
        "decompose", "--theorem", "3", "--in", &p(d, "bad.instance"), "--provider", "search",
        "--out", &p(d, "o"), "--cert", &p(d, "c"),
    ]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(2), "{r}");
    assert!(r.contains("line 3, column 4"), "{r}");
    let o = symlen(&["verify", "--cert", &p(d, "missing.cert")]);
    assert_eq!(o.status.code(), Some(2));
    let o = symlen(&["wittcalc", "--p", "2", "--m", "2", "--vars", "x", "[x, 1] +"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn desk_caps_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = symlen(&["gen", "--theorem", "3", "--p", "2", "--m", "5", "--n", "1", "--out", &p(d, "x")]);
    assert_eq!(o.status.code(), Some(2));
    let o = symlen(&[
        "--no-caps", "gen", "--theorem", "3", "--p", "2", "--m", "5", "--n", "1", "--deg", "1",
        "--out", &p(d, "x"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn search_reports_and_caps() {
    let o = symlen(&["search", "--field", "field p=2 vars=x", "--alpha", "x^2", "--betas", "x"]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&r, "found"), Some("yes"));
    let o = symlen(&[
        "search", "--field", "field p=2 vars=x,y", "--alpha", "y", "--betas", "x", "--deg", "0",
    ]);
    assert_eq!(value(&stdout(&o), "found"), Some("no"));
    let o = Command::new(env!("CARGO_BIN_EXE_symlen"))
        .args(["search", "--field", "field p=2 vars=x,y", "--alpha", "x", "--betas", "x,y"])
        .env("WITT_SYMBOL_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
}

#[test]
fn wittcalc_matches_the_length_two_sum() {
    let o = symlen(&["wittcalc", "--p", "2", "--m", "2", "--vars", "a,b", "[a, 0] + [b, 0]"]);
    assert_eq!(value(&stdout(&o), "result"), Some("[a+b, a*b]"));
    let o = symlen(&["wittcalc", "--p", "3", "--m", "2", "--vars", "a", "9*[a, a+1]"]);
    assert_eq!(value(&stdout(&o), "result"), Some("[0, 0]"));
    let o = symlen(&["wittcalc", "--p", "3", "--m", "2", "--vars", "a", "trunc(shift([a, 1], 1), 2)"]);
    assert_eq!(value(&stdout(&o), "result"), Some("[0, a]"));
}

#[test]
fn pdep_reports() {
    let o = symlen(&["pdep", "--field", "field p=3 vars=x,y", "--elems", "x,y"]);
    assert_eq!(value(&stdout(&o), "result"), Some("independent"));
    let o = symlen(&["pdep", "--field", "field p=3 vars=x,y", "--elems", "x,x*y^3"]);
    assert_eq!(value(&stdout(&o), "result"), Some("dependent"));
}

#[test]
fn theorem4_and_theorem5_pipelines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = symlen(&[
        "gen", "--theorem", "4", "--r", "2", "--k", "2", "--deg", "1", "--seed", "2", "--top-only",
        "--out", &p(d, "t4"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = symlen(&[
        "decompose", "--theorem", "4", "--in", &p(d, "t4.instance"), "--witness",
        &p(d, "t4.witness"), "--provider", "search", "--out", &p(d, "t4.out"), "--cert",
        &p(d, "t4.cert"),
    ]);
    let r = stdout(&o);
    assert!(matches!(o.status.code(), Some(0) | Some(3)), "{r}");
    if o.status.code() == Some(0) {
        assert_eq!(value(&r, "bound"), Some("5"));
    }

    let o = symlen(&[
        "gen", "--theorem", "5", "--n", "2", "--k", "2", "--deg", "1", "--seed", "4", "--out",
        &p(d, "t5"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = symlen(&[
        "decompose", "--theorem", "5", "--in", &p(d, "t5.instance"), "--witness",
        &p(d, "t5.witness"), "--out", &p(d, "t5.out"), "--cert", &p(d, "t5.cert"),
    ]);
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{r}");
    assert_eq!(value(&r, "bound"), Some("20"));
    let o = symlen(&["verify", "--cert", &p(d, "t5.cert")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn batch_generation_writes_every_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = symlen(&[
        "gen", "--theorem", "3", "--n", "2", "--seed", "10", "--batch", "4", "--out", &p(d, "b"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for s in 10..14 {
        assert!(d.join(format!("b-{s}.instance")).exists());
        assert!(d.join(format!("b-{s}.witness")).exists());
    }
    let seq = symlen(&[
        "--sequential", "gen", "--theorem", "3", "--n", "2", "--seed", "10", "--batch", "4",
        "--out", &p(d, "c"),
    ]);
    assert_eq!(seq.status.code(), Some(0));
    assert_eq!(
        std::fs::read(d.join("b-12.instance")).unwrap(),
        std::fs::read(d.join("c-12.instance")).unwrap()
    );
}
