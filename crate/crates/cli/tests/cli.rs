use std::path::PathBuf;
use std::process::{Command, Output};

fn codecirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codecirc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn synth_prints_summary() {
    for (k, d, line) in [
        ("2", "3", "#In 4, r 3, Area 5, Len 4"),
        ("3", "3", "#In 6, r 4, Area 10, Len 4"),
        ("4", "4", "#In 12, r 4, Area 68, Len 6"),
    ] {
        let o = codecirc(&["synth", "--k", k, "--d", d]);
        assert!(o.status.success(), "{o:?}");
        assert_eq!(stdout(&o).trim(), line);
    }
}

#[test]
fn synth_writes_artifacts_that_verify() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let v = dir.path().join("net.v");
    let rep = dir.path().join("report.json");
    let o = codecirc(&[
        "synth",
        "--k",
        "3",
        "--d",
        "4",
        "--out",
        net.to_str().unwrap(),
        "--verilog",
        v.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(std::fs::read_to_string(&v).unwrap().contains("module"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["n_in"], 9);
    assert_eq!(report["optimal"], true);
    let o = codecirc(&["verify", "--netlist", net.to_str().unwrap(), "--d", "4"]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).starts_with("PASS k=3 r=4 d=4"));
}

#[test]
fn synth_timeout_is_best_effort() {
    let o = codecirc(&["synth", "--k", "6", "--d", "5", "--timeout", "0.2"]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("not proven optimal"));
    assert!(stdout(&o).starts_with("#In "));
}

#[test]
fn greedy_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let tt = dir.path().join("tt.txt");
    let o = codecirc(&["greedy", "--k", "3", "--d", "3", "--truth-table", tt.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o).trim(), "#In 7, r 3, Area 27, Len 6");
    assert_eq!(std::fs::read_to_string(&tt).unwrap().lines().count(), 8);
}

#[test]
fn verify_accepts_good_netlist() {
    let o = codecirc(&["verify", "--netlist", &fixture("c3_3.json"), "--d", "3"]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o).trim(), "PASS k=3 r=4 d=3 detect_checked=224 correct_checked=56");
}

#[test]
fn verify_names_distance_witness() {
    let o = codecirc(&["verify", "--netlist", &fixture("c3_3.json"), "--d", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("failed=distance,detection"), "{out}");
    assert!(out.contains("distance: distance 3, lightest message"), "{out}");
}

#[test]
fn verify_rejects_shared_gates() {
    let o = codecirc(&["verify", "--netlist", &fixture("c3_3_shared.json"), "--d", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("independence: gates"), "{out}");
    assert!(out.contains("equivalence"), "{out}");
}

#[test]
fn verify_reports_unreadable_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"k\": 3").unwrap();
    let o = codecirc(&["verify", "--netlist", p.to_str().unwrap(), "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: parsing"));
}

#[test]
fn bench_rows() {
    let o = codecirc(&["bench", "--suite", "table3", "--kd-filter", "k<=2,d=3", "--omit-time"]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(
        stdout(&o),
        "k,d,tool,n_in,r,area,len,parts,combs,seconds,optimal\n\
         1,3,greedy,2,2,0,1,,,,\n\
         1,3,search,2,2,0,1,0,0,,true\n\
         2,3,greedy,4,3,5,4,,,,\n\
         2,3,search,4,3,5,4,1,2,,true\n"
    );
    let o = codecirc(&["bench", "--suite", "table2", "--kd-filter", "k=3,d=3", "--omit-time"]);
    let out = stdout(&o);
    assert!(out.contains("3,3,search,6,4,10,4,6,22,,true\n"), "{out}");
    assert!(out.contains("3,3,search-noreduce,6,4,10,4,6,251,,true\n"), "{out}");
    let o = codecirc(&["bench", "--suite", "table1", "--kd-filter", "k=4,d=3", "--omit-time"]);
    assert!(stdout(&o).contains("4,3,search,8,5,15,4,10,130,,true\n"));
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = codecirc(&[
            "bench",
            "--suite",
            "table1",
            "--kd-filter",
            "k<=3,d<=4",
            "--omit-time",
            "--csv",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{o:?}");
        assert!(o.stdout.is_empty());
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 2 * 4);
}

#[test]
fn partitions_listing() {
    let o = codecirc(&["partitions", "--m", "8", "--r", "4", "--k", "4", "--order", "desc"]);
    assert_eq!(stdout(&o), "4,2,1,1\n3,3,1,1\n3,2,2,1\n2,2,2,2\n");
    let o = codecirc(&["partitions", "--m", "8", "--r", "4", "--k", "4"]);
    assert_eq!(stdout(&o), "2,2,2,2\n3,2,2,1\n3,3,1,1\n4,2,1,1\n");
}

#[test]
fn combinations_listing() {
    let o = codecirc(&["combinations", "--partition", "2,1,1", "--k", "3"]);
    assert_eq!(stdout(&o), "(1,2)(1)(3)\n(1,2)(3)(3)\n");
    let o = codecirc(&["combinations", "--partition", "2,1,1", "--k", "3", "--reduce", "off"]);
    assert_eq!(stdout(&o).lines().count(), 15);
    let o = codecirc(&["combinations", "--partition", "4,1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_arguments_fail() {
    for args in [
        &["synth", "--k", "2"][..],
        &["synth", "--k", "2", "--d", "3", "--reduction", "maybe"],
        &["synth", "--k", "2", "--d", "3", "--backend", "magic"],
        &["synth", "--k", "2", "--d", "3", "--jobs", "0"],
        &["synth", "--k", "2", "--d", "3", "--dump-smt", "/tmp"],
        &["synth", "--k", "2", "--d", "3", "--timeout", "-1"],
        &["bench", "--suite", "table1", "--kd-filter", "x=1"],
        &["bench", "--suite", "table9"],
        &["partitions", "--m", "3", "--r", "2", "--k", "2", "--order", "sideways"],
    ] {
        let o = codecirc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {o:?}");
    }
}
