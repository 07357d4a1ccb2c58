use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use permcover::{characteristic_sequence, CyclicPerm};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_permcover"))
        .args(args)
        .env_remove("PERMCOVER_WORKERS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    {
        let mut pipe = child.stdin.take().expect("stdin is piped");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("binary finishes")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn pipe(first: &[&str], second: &[&str]) -> Output {
    let a = run(first, None);
    assert!(a.status.success());
    run(second, Some(&stdout(&a)))
}

#[test]
fn generated_sequences() {
    let out = pipe(&["gen", "shift", "5"], &["charseq", "--sorted"]);
    assert_eq!(stdout(&out), "1 2 3 4\n");
    let out = pipe(&["gen", "stefan", "2"], &["charseq", "--sorted"]);
    assert_eq!(stdout(&out), "1 2 2 4\n");
    let out = pipe(&["gen", "stefan", "2"], &["charseq", "--raw", "--sorted"]);
    assert_eq!(stdout(&out), "2 4 1 2\n1 2 2 4\n");
}

#[test]
fn gen_round_trips_in_process() {
    for seed in 0..5 {
        let seed = seed.to_string();
        let word = stdout(&run(&["gen", "random", "8", "--seed", &seed], None));
        let f: CyclicPerm = word.trim().parse().unwrap();
        let piped = stdout(&run(&["charseq"], Some(&word)));
        let expected = characteristic_sequence(&f)
            .raw
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        assert_eq!(piped, expected + "\n");
    }
}

#[test]
fn non_transitive_needs_flag() {
    let out = run(&["charseq", "--allow-nontransitive", "3 2 1"], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2 2\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let out = run(&["charseq", "3 2 1"], None);
    assert_eq!(out.status.code(), Some(1));

    let out = run(
        &["charseq", "--allow-nontransitive", "--check", "3 2 1"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("bound violated at index 1"));
}

#[test]
fn charseq_json_and_pointwise() {
    let out = run(&["charseq", "--json", "--check", "1 2 4 3"], None);
    assert_eq!(
        stdout(&out),
        "{\"bound\":\"holds\",\"perm\":\"1 2 4 3\",\"raw\":[2,1,2],\"sorted\":[1,2,2]}\n"
    );
    let out = run(&["charseq", "--no-hull", "1 2 4 3"], None);
    assert_eq!(stdout(&out), "3 1 3\n");
    // the same cycle as an image array
    let out = run(&["charseq", "--image", "2 4 1 3"], None);
    assert_eq!(stdout(&out), "2 1 2\n");
}

#[test]
fn graph_outputs() {
    let out = pipe(&["gen", "stefan", "2"], &["graph", "--dot"]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph markov {\n"));
    assert_eq!(
        text.lines()
            .filter(|l| l.ends_with(';') && !l.contains("->"))
            .count(),
        4
    );

    let out = run(&["graph", "--json", "1 2 3 4"], None);
    assert_eq!(
        stdout(&out),
        "{\"n\":4,\"edges\":[[1,2],[2,3],[3,1],[3,2],[3,3]]}\n"
    );

    let out = run(&["graph", "--cycles", "1 2 3 4"], None);
    assert_eq!(stdout(&out), "A1 3 1 2 3 1\nA2 2 2 3 2\nA3 1 3 3\n");
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "2..8", "--workers", "2", "--prune"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.contains("\"violations\":[]")));

    assert_eq!(run(&["verify", "1"], None).status.code(), Some(1));
    assert_eq!(run(&["verify", "8..3"], None).status.code(), Some(1));
    assert_eq!(run(&["verify", "20"], None).status.code(), Some(1));
    assert_eq!(run(&["verify"], None).status.code(), Some(1));
}

#[test]
fn verify_worker_env_and_json_file() {
    let dir = std::env::temp_dir().join(format!("permcover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("reports.json");
    let out = Command::new(env!("CARGO_BIN_EXE_permcover"))
        .args(["verify", "5", "--json"])
        .arg(&file)
        .env("PERMCOVER_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"workers\":3"));
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(saved[0]["examined"], 24);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn partition_witness() {
    let out = run(&["partition", "1 3 4 2 5", "--cuts", "2"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["t"], 3);
    assert_eq!(v["l"], 1);
    assert_eq!(
        run(&["partition", "1 3 4 2 5", "--cuts", "9"], None)
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn reduce_fixtures() {
    let out = run(&["reduce", &fixture("ten_piece_cover.json")], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cycle"], "1 8 4 6 2 10 5 3 7");
    assert_eq!(v["relabeled"], "1 8 4 6 2 9 5 3 7");
    assert_eq!(v["deleted"], serde_json::json!([9]));

    let out = run(&["reduce", &fixture("singleton_cover.json")], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cycle"], "1");

    let out = run(&["reduce", &fixture("two_orbit_cover.json")], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cycle"], "1 3");
    assert_eq!(v["relabeling"], serde_json::json!({"1": 1, "3": 2}));

    let system = fixture("five_interval_system.json");
    let out = run(
        &["reduce", &system, "--depth", "3", "--extra-cut", "12"],
        None,
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pieces"], 10);
    assert_eq!(v["displacement"], "1/10");
    assert_eq!(v["cycle"], "1 8 4 6 2 10 5 3 7");

    let out = run(&["reduce", "-"], Some("{\"n\": 2}"));
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["reduce", "-"], Some("{\"n\":2,\"image\":[[],[]]}"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn periodic_witness() {
    let out = run(
        &[
            "periodic",
            &fixture("three_interval_system.json"),
            "-k",
            "3",
        ],
        None,
    );
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "{\"x\":\"25/6\",\"period\":1,\"cycle\":[3]}\n"
    );

    let out = run(
        &["periodic", &fixture("five_interval_system.json"), "-k", "5"],
        None,
    );
    assert_eq!(
        stdout(&out),
        "{\"x\":\"389/56\",\"period\":4,\"cycle\":[7,10]}\n"
    );

    // a 3-cycle of thin intervals has no point of period <= 2
    let system = r#"{"intervals": [["0","1"],["2","3"],["4","5"]],
        "map": {"breakpoints": [["0","2"],["1","3"],["2","4"],["3","5"],["4","0"],["5","1"]]}}"#;
    let out = run(&["periodic", "-", "-k", "2"], Some(system));
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["periodic", "-", "-k", "3"], Some(system));
    assert!(out.status.success());
}

#[test]
fn output_is_deterministic() {
    let args = ["reduce", &fixture("five_interval_system.json")];
    let a = stdout(&run(&args, None));
    let b = stdout(&run(&args, None));
    assert_eq!(a, b);
}
