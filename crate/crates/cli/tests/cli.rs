use std::path::Path;
use std::process::{Command, Output};

fn evolvesort(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evolvesort"))
        .args(args)
        .env("EVOLVESORT_OUT", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_prints_one_line_per_repetition() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(
        &[
            "run",
            "--n",
            "100",
            "--algo",
            "insertion",
            "--adversary",
            "uniform",
            "--r",
            "1",
            "--start",
            "sorted",
            "--seed",
            "7",
            "--reps",
            "2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains("ratio=")).count(), 2);
    assert!(text.contains("convergence_time="));
    let written: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(written.len(), 2);
}

#[test]
fn run_rejects_tiny_lists() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(&["run", "--n", "1"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 2"));
}

#[test]
fn run_rejects_unknown_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(&["run", "--algo", "bogosort"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn run_reads_json_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n": 40, "algorithm": "quicksort", "adversary": {"kind": "hotspot"}, "start": "reversed", "seed": 3}"#,
    )
    .unwrap();
    let o = evolvesort(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("quicksort-hotspot-r1-n40-reversed-s3"));
}

#[test]
fn sweep_writes_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(
        &[
            "sweep",
            "--n",
            "30,40",
            "--algo",
            "bubble,quicksort",
            "--r",
            "1,2",
            "--reps",
            "2",
            "--workers",
            "3",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.contains("mean ratio"))
            .count(),
        8
    );
    let aggregate = std::fs::read_to_string(dir.path().join("sweep_aggregate.csv")).unwrap();
    assert_eq!(aggregate.lines().count(), 1 + 8);
}

#[test]
fn reproduce_unknown_preset_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(&["reproduce", "nonsense"], dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("table-ratio") && err.contains("fig-hot"),
        "{err}"
    );
}

#[test]
fn reproduce_small_hot_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(
        &[
            "reproduce",
            "fig-hot",
            "--n",
            "40",
            "--reps",
            "1",
            "--max-steps",
            "800",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("fig-hot_table.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("algorithm,uniform,hotspot"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--n", "32", "--ops", "3000", "--seed", "3"];
    let a = evolvesort(&args, dir.path());
    let b = evolvesort(&args, dir.path());
    assert!(a.status.success(), "{}", stdout(&a));
    assert!(stdout(&a).contains("all properties passed"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let o = evolvesort(
        &[
            "verify",
            "--n",
            "16",
            "--ops",
            "200",
            "--seed",
            "11",
            "--inject-fault",
            "57",
        ],
        dir.path(),
    );
    assert!(!o.status.success());
    let text = stdout(&o);
    assert!(text.contains("counterexample: seed=11"), "{text}");
    assert!(text.contains("op=57"), "{text}");
}
