use std::process::{Command, Output};

fn omegacat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegacat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn temp_path(name: &str) -> String {
    std::env::temp_dir().join(format!("omegacat-cli-{}-{name}", std::process::id())).display().to_string()
}

#[test]
fn identities_pass() {
    let out = omegacat(&["identities", "--max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("violations  0"));
}

#[test]
fn bridge_one_one_passes() {
    let out = omegacat(&["bridge", "1", "1", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r\tcylinders\telements\tbijective\tatoms_agree\trelevant");
    assert_eq!(&lines[1..], ["0\t4\t4\tyes\tyes\tyes", "1\t4\t4\tyes\tyes\tyes", "2\t1\t1\tyes\tyes\tyes"]);
}

#[test]
fn oriental_two_has_one_top_cell() {
    let out = omegacat(&["oriental", "2", "--cells", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "dim\telements\tcells\n0\t3\t3\n1\t3\t4\n2\t1\t1\n");
}

#[test]
fn oriental_collapse_counts_classes() {
    let out = omegacat(&["oriental", "3", "--collapse"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("classes: 22"));
    assert!(text.contains("2-category: yes"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(omegacat(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(omegacat(&["shuffles", "x", "1"]).status.code(), Some(2));
    assert_eq!(omegacat(&["oriental", "5"]).status.code(), Some(2));
    assert_eq!(omegacat(&["check-complicial", "adm:2"]).status.code(), Some(2));
    assert_eq!(omegacat(&["verify-parity", "/no/such/file.pcx"]).status.code(), Some(2));
    assert_eq!(omegacat(&["--help"]).status.code(), Some(0));
}

#[test]
fn complicial_verdicts_set_the_exit_code() {
    assert_eq!(omegacat(&["check-complicial", "delta_t:2"]).status.code(), Some(0));
    let out = omegacat(&["check-complicial", "delta:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("complicial                  no"));
}

#[test]
fn reflection_round_trips_through_files() {
    let path = temp_path("reflect.spc");
    let out = omegacat(&["lp-reflect", "adm:3:1", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("precomplicial  yes"));
    let piped = omegacat(&["lp-reflect", &path, "-"]);
    assert_eq!(piped.status.code(), Some(0));
    assert_eq!(stdout(&piped), std::fs::read_to_string(&path).unwrap());
    std::fs::remove_file(path).ok();
}

#[test]
fn nerve_of_collapsed_triangle_is_complicial() {
    let out = omegacat(&["nerve", "delta_t:2", "--dim", "3", "--check-complicial", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("simplices_2\t1\n"));
    assert!(text.contains("complicial\tyes\n"));
}

#[test]
fn parity_builtins_satisfy_the_axioms() {
    for spec in ["osimp:3", "prod:2:1", "susp:2:osimp:2"] {
        assert_eq!(omegacat(&["verify-parity", spec]).status.code(), Some(0), "{spec}");
    }
}

#[test]
fn witness_chain_between_standard_simplices() {
    let out = omegacat(&["witness-chain", "delta:1", "delta_t:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("outcome: undecided"));
}

#[test]
fn output_is_deterministic() {
    let a = omegacat(&["tensor-table", "2", "2", "--pretensor", "--format", "tsv"]);
    let b = omegacat(&["tensor-table", "2", "2", "--pretensor", "--format", "tsv"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 6);
}
