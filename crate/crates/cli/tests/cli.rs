use std::process::{Command, Output};

fn svtab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svtab"))
        .args(args)
        .env_remove("SVTAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = svtab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn qtables_match_golden_csv() {
    assert_eq!(stdout(&["qtable", "catalan", "--format", "csv"]), include_str!("golden/qtable_catalan.csv"));
    assert_eq!(
        stdout(&["qtable", "narayana", "--max-n", "4", "--format", "csv"]),
        include_str!("golden/qtable_narayana.csv")
    );
}

#[test]
fn ef_table_matches_golden_csv() {
    assert_eq!(stdout(&["table", "ef", "--format", "csv"]), include_str!("golden/table_ef.csv"));
}

#[test]
fn counts() {
    assert_eq!(stdout(&["count", "--family", "two-row-union", "--n", "6"]).trim(), "42");
    assert_eq!(stdout(&["count", "--formula", "ballot", "--n", "8", "--i", "2"]).trim(), "1002");
    assert_eq!(stdout(&["count", "--formula", "ballot", "--n", "0", "--i", "0"]).trim(), "1");
    let text = stdout(&["count", "--formula", "act", "--b", "3", "--k", "2", "--oracle"]);
    assert!(text.ends_with("agree true\n"), "{text}");
}

#[test]
fn json_count() {
    let text = stdout(&["count", "--family", "avoid321", "--n", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["value"], "42");
}

#[test]
fn exit_codes() {
    assert_eq!(svtab(&["count", "--formula", "ballot", "--n", "2", "--i", "5"]).status.code(), Some(2));
    assert_eq!(svtab(&["count", "--formula", "catalan"]).status.code(), Some(2));
    assert_eq!(svtab(&["biject", "alpha-inv", "3 2 1"]).status.code(), Some(2));
    assert_eq!(svtab(&["count", "--formula", "catalan", "--n", "5", "--expect", "43"]).status.code(), Some(1));
    assert_eq!(svtab(&["count", "--formula", "catalan", "--n", "5", "--expect", "42"]).status.code(), Some(0));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_svtab"))
        .args(["count", "--formula", "catalan", "--n", "3"])
        .env("SVTAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn bijections_from_the_command_line() {
    assert_eq!(stdout(&["biject", "alpha-inv", "2 1 3"]).trim(), "{1} {3} / {2} {4}");
    assert_eq!(stdout(&["biject", "rotate", "{1} {3} / {2}"]).trim(), "_ {2} / {1} {3}");
    assert_eq!(stdout(&["biject", "rotate-inv", "_ {2} / {1} {3}"]).trim(), "{1} {3} / {2}");
    let path = stdout(&["biject", "phi", "UuDd"]);
    assert_eq!(stdout(&["biject", "phi-inv", path.trim()]).trim(), "UuDd");
}

#[test]
fn series_suite_passes() {
    let out = svtab(&["verify", "--suite", "series", "--order", "10", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass" && c.get("wall_ms").is_none()));
}

#[test]
fn poset_suite_passes_and_is_reproducible() {
    let args = ["verify", "--suite", "posets", "--max-elements", "4", "--format", "csv"];
    let first = stdout(&args);
    assert!(first.lines().skip(1).all(|l| l.contains(",pass,")), "{first}");
    assert_eq!(stdout(&args), first);
}

#[test]
fn quick_budget_runs_every_suite() {
    let text = stdout(&["verify", "--budget", "quick", "--parallel", "2"]);
    for suite in ["catalan", "ef", "ballot", "closed-forms", "bijections", "paths", "series", "expect", "qtables", "posets", "pi", "equidistribution", "peaks"] {
        assert!(text.contains(&format!("[{suite}]")), "{suite} missing");
    }
    assert!(text.ends_with("all checks passed\n"));
}
