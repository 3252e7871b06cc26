use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TRIBES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tribes.edges");

fn signet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signet")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn train_writes_tribes_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let o = signet(
        dir.path(),
        &["train", "--input", TRIBES, "--undirected", "--dim", "2", "--samples", "200000", "--out", "t.emb"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("t.emb")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "16 2");
    assert_eq!(lines.len(), 17);
    assert!(lines[1..].iter().all(|l| l.split_whitespace().count() == 3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sampling time") && err.contains("optimization time"));
}

#[test]
fn negative_sampling_skips_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = signet(
        dir.path(),
        &["train", "--input", TRIBES, "--mode", "ns", "--dim", "4", "--samples", "1000", "--out", "e"],
    );
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sampling time: 0.000s"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&signet(d, &["train", "--input", TRIBES, "--directed", "--dim", "41", "--out", "x"])), 2);
    assert_eq!(code(&signet(d, &["eval-nodes", "--input", TRIBES])), 2);
    assert_eq!(code(&signet(d, &["gen", "--nodes", "100", "--neg", "1.5", "--out", "g"])), 2);
    assert_eq!(code(&signet(d, &["gen", "--nodes", "1", "--out", "g"])), 2);
    assert_eq!(code(&signet(d, &["train", "--input", TRIBES, "--walk-len", "1", "--out", "x"])), 2);
    assert_eq!(code(&signet(d, &["partial", "--input", TRIBES, "--undirected", "--labels", "l"])), 2);
    assert!(!d.join("x").exists() && !d.join("g").exists());
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.edges"), "0 1 1\n1 2 zero\n").unwrap();
    let o = signet(d, &["stats", "--input", "bad.edges"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    fs::write(d.join("small.emb"), "2 1\n0 0.5\n1 0.25\n").unwrap();
    assert_eq!(code(&signet(d, &["stats", "--input", TRIBES, "--embedding", "small.emb"])), 1);
}

#[test]
fn experiment_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let quick = ["--dim", "8", "--samples", "50000", "--walk-len", "20"];
    assert_eq!(
        code(&signet(
            d,
            &["gen", "--model", "two-community", "--nodes", "80", "--out", "u.edges", "--labels-out", "u.labels"]
        )),
        0
    );
    assert_eq!(
        code(&signet(
            d,
            &[
                "gen",
                "--model",
                "two-community",
                "--nodes",
                "80",
                "--directed",
                "--out",
                "d.edges",
                "--labels-out",
                "d.labels"
            ]
        )),
        0
    );

    let o =
        signet(d, &[&["eval-edges", "--input", "u.edges", "--op", "hadamard", "--repeats", "5"][..], &quick].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "experiment,mode,operator,repeat,micro_f1,macro_f1,ratio");
    assert_eq!(lines.len(), 7);
    assert!(lines[6].starts_with("edge-sign,targeted,hadamard,mean,"));

    let o = signet(
        d,
        &[
            &["eval-nodes", "--input", "u.edges", "--labels", "u.labels", "--repeats", "2", "--out", "n.csv"][..],
            &quick,
        ]
        .concat(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(d.join("n.csv")).unwrap().lines().count(), 4);
    assert!(String::from_utf8_lossy(&o.stdout).contains("micro F1"));

    let o = signet(
        d,
        &[&["partial", "--input", "d.edges", "--labels", "d.labels", "--fractions", "0.1,0.2,0.3"][..], &quick]
            .concat(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.contains("partial:0.3,ns,"));
}

#[test]
fn stats_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = signet(d, &["stats", "--input", TRIBES, "--undirected"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("nodes 16") && text.contains("edges 58") && text.contains("% negative edges 50.000"));

    fs::write(d.join("pos.edges"), "0 1 1\n1 2 2\n").unwrap();
    fs::write(d.join("pos.emb"), "3 1\n0 0.0\n1 1.0\n2 3.0\n").unwrap();
    let o = signet(d, &["stats", "--input", "pos.edges", "--embedding", "pos.emb"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("+ 2 1.5000 0.5000"), "{text}");
    assert!(text.contains("ratio absent"));
}

#[test]
fn generation_is_reproducible_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["a", "b"] {
        assert_eq!(
            code(&signet(
                d,
                &["gen", "--nodes", "2000", "--avg-degree", "10", "--neg", "0.2", "--seed", "1", "--out", name]
            )),
            0
        );
    }
    assert_eq!(fs::read(d.join("a")).unwrap(), fs::read(d.join("b")).unwrap());
    let o = signet(d, &["train", "--input", "a", "--dim", "4", "--samples", "20000", "--out", "a.emb"]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(d.join("a.emb")).unwrap().starts_with("2000 4\n"));
}

#[test]
fn cache_dump_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = signet(dir.path(), &["dump-cache", "--input", TRIBES, "--walk-len", "10"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().all(|l| l.contains(" [+]") && l.contains(" [-]")));
}

#[test]
fn remapped_ids_survive_training() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("s.edges"), "100 200 1\n200 300 -1\n300 100 1\n").unwrap();
    let o =
        signet(d, &["train", "--input", "s.edges", "--remap-ids", "--dim", "2", "--samples", "1000", "--out", "s.emb"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ids: Vec<String> = fs::read_to_string(d.join("s.emb"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["100", "200", "300"]);
    let o = signet(d, &["stats", "--input", "s.edges", "--remap-ids", "--embedding", "s.emb"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
