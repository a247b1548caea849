use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mcadvice(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcadvice"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_then_run_path_member() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcadvice(
        &[
            "gen", "path", "--n", "40", "--index", "2", "--out", "i2.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = mcadvice(&["run", "i2.json", "--algo", "greedy_opt"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    let row = csv.lines().nth(1).unwrap();
    assert_eq!(
        row,
        "greedy_opt,path-n40-i2,12,12,11,12,1.0,true,12,11,true,,ok"
    );
}

#[test]
fn hex_edge_golden_tape() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("edge.json"),
        r#"{"graph":{"kind":"hexagonal","nodes":["u","v"],"cells":{"u":[0,0],"v":[1,0]}},
           "requests":[{"node":"u","op":"color"},{"node":"v","op":"color"},{"node":"u","op":"color"}],
           "tape":"00110"}"#,
    )
    .unwrap();
    for extra in [&[][..], &["--file-tape"][..]] {
        let mut args = vec![
            "run",
            "edge.json",
            "--algo",
            "hex43",
            "--format",
            "json",
            "--log",
            "log.json",
        ];
        args.extend_from_slice(extra);
        let o = mcadvice(&args, dir.path());
        assert!(o.status.success());
        let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(report[0]["max_color"], 4);
        assert_eq!(report[0]["advice_bits_read"], 5);
        assert_eq!(
            fs::read_to_string(dir.path().join("log.json")).unwrap(),
            r#"[{"color":1},{"color":2},{"color":4}]"#
        );
    }
    let o = mcadvice(&["verify", "edge.json", "log.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "ok");

    fs::write(
        dir.path().join("bad.json"),
        r#"[{"color":1},{"color":1},{"color":4}]"#,
    )
    .unwrap();
    let o = mcadvice(&["verify", "edge.json", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("violation"));
}

#[test]
fn batch_is_ordered_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(mcadvice(
        &[
            "gen",
            "random",
            "--kind",
            "bipartite",
            "--seed",
            "4",
            "--out",
            "b.json"
        ],
        p
    )
    .status
    .success());
    assert!(
        mcadvice(&["gen", "chain", "--branch", "10", "--out", "c.json"], p)
            .status
            .success()
    );
    fs::write(
        p.join("manifest.json"),
        r#"[{"instance":"b.json","algo":"greedy_opt"},
            {"instance":"c.json","algo":"fpa"},
            {"instance":"b.json","algo":"greedy_truncated:2"},
            {"instance":"missing.json","algo":"trivial"}]"#,
    )
    .unwrap();
    let first = mcadvice(&["batch", "manifest.json"], p);
    let second = mcadvice(&["batch", "manifest.json"], p);
    assert_eq!(first.stdout, second.stdout);
    // the unreadable file makes the batch fail but still yields its row
    assert_eq!(first.status.code(), Some(1));
    let csv = stdout(&first);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("greedy_opt,random-bipartite-s4,"));
    assert!(rows[2].starts_with("fpa,chain-10,"));
    assert!(rows[3].starts_with("greedy_truncated:2,"));
    assert!(rows[4].contains("error:"));
}

#[test]
fn opt_reports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(mcadvice(
        &["gen", "gadget", "--p", "8", "--branch", "0", "--out", "g.json"],
        p
    )
    .status
    .success());
    let o = mcadvice(&["opt", "g.json", "--budget", "16:48:100000"], p);
    assert!(o.status.success());
    let w: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(w["value"], 4);
    assert_eq!(w["coloring"]["O0"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        mcadvice(&["gen", "path", "--n", "40", "--out", "i.json"], dir.path())
            .status
            .success()
    );
    let o = mcadvice(&["run", "i.json", "--algo", "greedy_truncated"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = mcadvice(&["gen", "path", "--n", "12"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
