use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sparsify(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsify"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPARSIFY_SEED")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_pairs_sparsify_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&sparsify(
        &[
            "generate", "--kind", "gnm", "--n", "300", "--m", "1200", "--seed", "4", "--out",
            "g.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "pairs", "--graph", "g.txt", "--p", "80", "--seed", "4", "--out", "p.txt",
        ],
        d,
    ));
    assert_eq!(
        fs::read_to_string(d.join("p.txt")).unwrap().lines().count(),
        80
    );

    for (kind, k) in [
        ("preserver", "0"),
        ("plus2", "2"),
        ("plus4", "4"),
        ("plus6", "6"),
    ] {
        let args = [
            "sparsify", "--kind", kind, "--graph", "g.txt", "--pairs", "p.txt", "--seed", "9",
            "--out", "h.txt", "--report", "r.csv",
        ];
        ok(&sparsify(&args, d));
        let report = fs::read_to_string(d.join("r.csv")).unwrap();
        assert!(report.starts_with("round,pairs_remaining,satisfied,edges_added,cumulative_edges"));
        ok(&sparsify(
            &[
                "verify", "--graph", "g.txt", "--sub", "h.txt", "--pairs", "p.txt", "--k", k,
                "--out", "v.csv",
            ],
            d,
        ));
        let rows = fs::read_to_string(d.join("v.csv")).unwrap();
        assert_eq!(rows.lines().count(), 81);
        assert!(rows.lines().skip(1).all(|l| l.ends_with(",true")));
    }
}

#[test]
fn slack_mode_and_reachability() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&sparsify(
        &[
            "generate",
            "--kind",
            "layered-dag",
            "--n",
            "200",
            "--m",
            "700",
            "--seed",
            "2",
            "--out",
            "g.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "pairs", "--graph", "g.txt", "--mode", "sxv", "--s", "5", "--p", "40", "--seed", "2",
            "--out", "p.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "sparsify", "--kind", "reach", "--mode", "slack", "--graph", "g.txt", "--pairs",
            "p.txt", "--out", "h.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "sparsify", "--kind", "reach", "--graph", "g.txt", "--pairs", "p.txt", "--out", "h.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "verify", "--graph", "g.txt", "--sub", "h.txt", "--pairs", "p.txt", "--k", "inf",
        ],
        d,
    ));
}

#[test]
fn failed_verification_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.txt"), "4 4 0 0\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    fs::write(d.join("h.txt"), "4 3 0 0\n0 1\n1 2\n2 3\n").unwrap();
    fs::write(d.join("p.txt"), "0 3\n").unwrap();
    let out = sparsify(
        &[
            "verify", "--graph", "g.txt", "--sub", "h.txt", "--pairs", "p.txt", "--k", "0",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(1));
    ok(&sparsify(
        &[
            "verify", "--graph", "g.txt", "--sub", "h.txt", "--pairs", "p.txt", "--k", "2",
        ],
        d,
    ));
}

#[test]
fn bad_input_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.txt"), "3 1 0 0\n0 7\n").unwrap();
    fs::write(d.join("p.txt"), "0 1\n").unwrap();
    let out = sparsify(
        &[
            "sparsify", "--kind", "plus2", "--graph", "g.txt", "--pairs", "p.txt",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = sparsify(
        &[
            "sparsify", "--kind", "plus9", "--graph", "g.txt", "--pairs", "p.txt",
        ],
        d,
    );
    assert!(!out.status.success());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&sparsify(
        &[
            "generate", "--kind", "grid", "--side", "15", "--out", "g.txt",
        ],
        d,
    ));
    ok(&sparsify(
        &[
            "pairs", "--graph", "g.txt", "--p", "60", "--seed", "1", "--out", "p.txt",
        ],
        d,
    ));
    let run = |tag: &str| {
        let h = format!("h{tag}.txt");
        let r = format!("r{tag}.csv");
        let out = Command::new(env!("CARGO_BIN_EXE_sparsify"))
            .args([
                "sparsify", "--kind", "plus4", "--graph", "g.txt", "--pairs", "p.txt", "--out", &h,
                "--report", &r,
            ])
            .env("SPARSIFY_SEED", "31")
            .current_dir(d)
            .output()
            .unwrap();
        ok(&out);
        (fs::read(d.join(h)).unwrap(), fs::read(d.join(r)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn bench_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = sparsify(
        &[
            "bench",
            "--kind",
            "plus2",
            "--spec",
            "tree:n=80",
            "--p-list",
            "4,8,16,32",
            "--seeds",
            "1,2",
            "--fit-baseline",
            "0",
        ],
        dir.path(),
    );
    ok(&out);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 9);
}
