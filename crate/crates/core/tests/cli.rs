use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn mdi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("mdi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn check_reports_shape() {
    let o = mdi(&["check", &data("hpsg.decl")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: 16 types, 9 dimensions, root `sign`\n");
}

#[test]
fn encode_prints_the_doubly_instantiated_term() {
    let o = mdi(&["encode", &data("hpsg.decl"), "--type", "su_wh_rel"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sign(headed_ph(h_su(su_wh_rel)),rel(wh_rel(su_wh_rel)))\n");
}

#[test]
fn inconsistent_conjunction_exits_one() {
    let o = mdi(&["conj", &data("hpsg.decl"), "--a", "h_su", "--b", "h_co"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "INCONSISTENT\n");
    let o = mdi(&["encode", &data("hpsg.decl"), "--type", "wh_int & that_rel"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn open_world_conjunction() {
    let o = mdi(&["conj", &data("hpsg.decl"), "--a", "headed_ph", "--b", "rel"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "headed_ph & rel\nsign(headed_ph(_),rel(_))\n");
}

#[test]
fn count_network_and_declarations() {
    let o = mdi(&["count", &data("pronoun.sysnet"), "--format", "lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "count=54\nquestion=10\npersonal=40\ndemonstrative=4\n");
    let o = mdi(&["count", &data("hpsg.decl")]);
    assert_eq!(stdout(&o), "25 classifications\n");
}

#[test]
fn convert_writes_a_loadable_file() {
    let out = scratch("pronoun.decl", "");
    let o = mdi(&["convert", &data("pronoun.sysnet"), "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("lifted `case` into `kind` as case / not_case"));
    let o = mdi(&["count", &out]);
    assert_eq!(stdout(&o), "54 classifications\n");
    let o = mdi(&["stats", &out, "--format", "lines"]);
    assert!(stdout(&o).contains("types=25\nmax_arity=2\n"));
}

#[test]
fn oracle_exit_codes() {
    let o = mdi(&["oracle", &data("hpsg.decl")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("faithful\n"));
    let o = mdi(&["oracle", &data("hpsg.decl"), "--corrupt", "h_fi=h_co", "--format", "lines"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("mismatch\th_co & h_fi\tinconsistent\tunifies\n"));
    let o = mdi(&["oracle", &data("hpsg.decl"), "--corrupt", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diagnostics_carry_file_and_line() {
    let bad = scratch("cycle.decl", "a > [b].\nb > [c].\nc > [b].\n");
    let o = mdi(&["check", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{bad}:3:1:")), "{}", stderr(&o));

    let bad = scratch("syntax.decl", "a > [b].\nb > [c,].\n");
    let o = mdi(&["check", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{bad}:2:")), "{}", stderr(&o));

    let bad = scratch("dup.sysnet", "root r.\nchoice a -> x.\nentry a <- r.\nentry a <- x.\n");
    let o = mdi(&["count", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{bad}:4:1:")), "{}", stderr(&o));

    let o = mdi(&["check", "/nonexistent/x.decl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn redundant_edges_warn_on_stderr() {
    let f = scratch("redundant.decl", "a > [b,c]. b > [d]. a > [x]. b > [x].\n");
    let o = mdi(&["check", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(mdi(&[]).status.code(), Some(2));
    assert_eq!(mdi(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mdi(&["encode", &data("hpsg.decl")]).status.code(), Some(2));
    assert_eq!(mdi(&["encode", &data("hpsg.decl"), "--type", "nope"]).status.code(), Some(2));
    assert_eq!(mdi(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["stats", "DATA"], vec!["oracle", "DATA"]] {
        let args: Vec<String> =
            args.iter().map(|a| if *a == "DATA" { data("hpsg.decl") } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(mdi(&args).stdout, mdi(&args).stdout);
    }
}
