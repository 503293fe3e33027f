use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn maxpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxpres"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const GRAPHS: &str =
    "t # 0\nv 1\nv 2\nv 3\ne 1 2\ne 2 3\nt # 1\nv 1\nv 2\nv 3\nv 4\ne 1 2\ne 1 3\ne 2 3\ne 3 4\n";

#[test]
fn mine_itemsets() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "db.txt", "1 2 3\n1 2\n2 3\n");
    let out = maxpres(&["mine", &db, "--tau", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let patterns: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(patterns, ["1 2", "2 3"]);
    assert!(text.contains("# level\tcandidates\tfrequent\tfeasible_frequent"));
}

#[test]
fn relative_thresholds_round_up() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "db.txt", "1 2 3\n1 2\n2 3\n");
    let out = maxpres(&["mine", &db, "--tau-frac", "0.5"]);
    assert!(stdout(&out).starts_with("# tau=2 "), "{}", stdout(&out));
}

#[test]
fn threshold_ranges_give_one_block_each() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "g.txt", GRAPHS);
    let out = maxpres(&["mine", &db, "--domain", "graph", "--tau-range", "1..2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let blocks: Vec<&str> = text.lines().filter(|l| l.starts_with("# tau=")).collect();
    assert_eq!(blocks, ["# tau=1 maximal=1", "# tau=2 maximal=1"]);
}

#[test]
fn miner_and_oracle_agree_on_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "g.txt", GRAPHS);
    let strip = |s: String| {
        s.lines()
            .filter(|l| !l.starts_with("# "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for reduce in [None, Some("g2bdg3")] {
        let mut args = vec!["mine", &db, "--domain", "graph", "--tau", "2"];
        if let Some(r) = reduce {
            args.extend(["--reduce", r]);
        }
        let mined = maxpres(&args);
        let oracle = maxpres(&["oracle", &db, "--domain", "graph", "--tau", "2"]);
        assert!(mined.status.success(), "{}", stderr(&mined));
        assert_eq!(strip(stdout(&mined)), strip(stdout(&oracle)));
    }
}

#[test]
fn degree_three_reduction_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "g.txt", GRAPHS);
    let reduced = dir.path().join("r.txt");
    let back = dir.path().join("back.txt");
    let out = maxpres(&[
        "reduce",
        &db,
        "--domain",
        "graph",
        "--reduce",
        "g2bdg3",
        "-o",
        reduced.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&reduced).unwrap();
    assert!(text.starts_with("# reduction g2bdg3@4\n"), "{text}");
    let out = maxpres(&[
        "reduce",
        "--inverse",
        reduced.to_str().unwrap(),
        "-o",
        back.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read(&back).unwrap(), fs::read(&db).unwrap());
}

#[test]
fn reduced_files_parse_in_the_target_domain() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "s.txt", "1 3 2\n3 1 2\n");
    let out = maxpres(&[
        "reduce",
        &db,
        "--domain",
        "sequence",
        "--reduce",
        "compose:seq2dag,dirg2fis",
    ]);
    let pairs = write(dir.path(), "p.txt", &stdout(&out));
    let mined = maxpres(&[
        "mine",
        &pairs,
        "--domain",
        "pairs",
        "--tau",
        "2",
        "--phi",
        "preimage(compose:seq2dag,dirg2fis)",
    ]);
    assert!(mined.status.success(), "{}", stderr(&mined));
    let patterns: Vec<String> = stdout(&mined)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    // <1,2> and <3,2> as transitive tournaments with their markers
    assert_eq!(patterns, ["1,1 1,2 2,2", "2,2 3,2 3,3"]);
}

#[test]
fn random_verification_exits_zero() {
    let out = maxpres(&["verify", "--random", "100", "--seed", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}{}",
        stdout(&out),
        stderr(&out)
    );
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verifying_an_input_reports_each_check() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "g.txt", GRAPHS);
    let out = maxpres(&[
        "verify",
        &db,
        "--domain",
        "graph",
        "--tau-range",
        "1..2",
        "--reduce",
        "g2fis",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for check in [
        "max-equals-oracle",
        "round-trip",
        "order-preserved",
        "target-class",
        "count-preserved",
    ] {
        assert!(text.contains(&format!("PASS\t{check}")), "{text}");
    }
}

#[test]
fn stats_show_more_maximal_patterns_under_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let text = "t # 0\nv 1\nv 2\nv 3\nv 4\ne 1 2\ne 2 3\ne 3 4\nt # 1\nv 1\nv 2\nv 3\nv 4\nv 5\ne 1 2\ne 2 5\ne 3 5\ne 3 4\n";
    let db = write(dir.path(), "g.txt", text);
    let out = maxpres(&["stats", &db, "--domain", "graph", "--tau", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let tsv = stdout(&out);
    assert!(tsv.contains("# maximal pattern counts by tau\ntau\tunconstrained\tconstrained\n"));
    assert!(tsv.contains("\n2\t1\t2\n"), "{tsv}");
    for row in tsv.lines().skip(2).take_while(|l| !l.starts_with('#')) {
        let cols: Vec<usize> = row.split('\t').map(|c| c.parse().unwrap()).collect();
        assert!(cols[2] <= cols[1], "{row}");
    }
}

#[test]
fn edge_list_directories() {
    let dir = tempfile::tempdir().unwrap();
    let lists = dir.path().join("forums");
    fs::create_dir(&lists).unwrap();
    fs::write(lists.join("a.txt"), "1 2\n2 3\n3 3\n").unwrap();
    fs::write(lists.join("b.txt"), "1 2\n2 3\n4 5\n").unwrap();
    let keep = maxpres(&[
        "mine",
        lists.to_str().unwrap(),
        "--domain",
        "graph",
        "--format",
        "edgelist",
        "--tau",
        "2",
    ]);
    assert_eq!(keep.status.code(), Some(3), "{}", stderr(&keep));
    assert!(stderr(&keep).contains("error[validation]"));
    let split = maxpres(&[
        "mine",
        lists.to_str().unwrap(),
        "--domain",
        "graph",
        "--format",
        "edgelist",
        "--components",
        "split",
        "--tau",
        "2",
    ]);
    assert!(split.status.success(), "{}", stderr(&split));
    assert!(
        stderr(&split).contains("warning: "),
        "self-loop warning expected"
    );
    assert!(stdout(&split).contains("e 1 2\ne 2 3\n"));
}

#[test]
fn exit_codes_and_error_tags() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1 2\n1 x\n");
    let seq = write(dir.path(), "seq.txt", "1 2 1\n");
    let ok = write(dir.path(), "ok.txt", "1 2\n");
    let cases: [(Vec<&str>, i32, &str); 6] = [
        (vec!["mine", &ok, "--tau", "1", "--bogus"], 1, "usage"),
        (vec!["mine", &ok, "--tau", "0"], 1, "usage"),
        (vec!["mine", &bad, "--tau", "1"], 2, "parse"),
        (
            vec!["mine", &seq, "--domain", "sequence", "--tau", "1"],
            2,
            "parse",
        ),
        (
            vec!["mine", &ok, "--tau", "1", "--phi", "connected-edges"],
            3,
            "validation",
        ),
        (
            vec!["mine", &ok, "--tau", "1", "--reduce", "nope"],
            1,
            "usage",
        ),
    ];
    for (args, code, tag) in cases {
        let out = maxpres(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
        assert!(
            stderr(&out).starts_with(&format!("error[{tag}]: ")),
            "{args:?}: {}",
            stderr(&out)
        );
    }
    let missing = maxpres(&["mine", "/nonexistent/file", "--tau", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = maxpres(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mine"));
}
