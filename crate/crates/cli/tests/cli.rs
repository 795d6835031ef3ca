//! End-to-end runs of the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratifold"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

const SMALL_TABLE: &str = "n,total,created,reduction_percent\n\
                           2,1,1,\n\
                           3,3,3,\n\
                           4,6,11,\n\
                           5,18,37,\n";

#[test]
fn enumerate_prints_and_writes_the_stats_table() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["enumerate", "--max-white", "5", "--mode", "naive"],
    );
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), SMALL_TABLE);

    let catalog = std::fs::read_to_string(dir.path().join("catalog.jsonl")).unwrap();
    assert_eq!(catalog.lines().count(), 1 + 3 + 6 + 18);
    let stats = std::fs::read_to_string(dir.path().join("catalog.csv")).unwrap();
    assert_eq!(stats, SMALL_TABLE);

    let progress = String::from_utf8(output.stderr).unwrap();
    assert!(progress.contains("n=5 distinct=18 created=37"));
}

#[test]
fn enumerate_runs_are_byte_identical() {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let output = run_in(
            dir.path(),
            &["enumerate", "--max-white", "8", "--mode", "symmetry"],
        );
        assert!(output.status.success());
        outputs.push((
            std::fs::read(dir.path().join("catalog.jsonl")).unwrap(),
            std::fs::read(dir.path().join("catalog.csv")).unwrap(),
            output.stdout,
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn canon_canonicalizes_strings() {
    let dir = tempfile::tempdir().unwrap();
    let round = run_in(dir.path(), &["canon", "--string", "00101011"]);
    assert!(round.status.success());
    assert_eq!(stdout_of(&round), "00101011\n");

    let off_center = run_in(dir.path(), &["canon", "--string", "002311"]);
    assert!(off_center.status.success());
    assert_eq!(stdout_of(&off_center), "001231\n");
}

#[test]
fn canon_reads_edge_lists_and_catalog_records() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("edges.txt"), "0 1 1 B W\n0 2 2 B W\n").unwrap();
    let from_edges = run_in(dir.path(), &["canon", "--in", "edges.txt"]);
    assert!(from_edges.status.success());
    assert_eq!(stdout_of(&from_edges), "001231\n");

    std::fs::write(
        dir.path().join("record.jsonl"),
        "{\"n\":2,\"id\":0,\"canon\":\"001231\",\"tag\":[2,1,2,2,2,0]}\n",
    )
    .unwrap();
    let from_record = run_in(dir.path(), &["canon", "--in", "record.jsonl"]);
    assert!(from_record.status.success());
    assert_eq!(stdout_of(&from_record), "001231\n");
}

#[test]
fn decode_emits_dot_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let dot = run_in(
        dir.path(),
        &["decode", "--string", "001231", "--format", "dot"],
    );
    assert!(dot.status.success());
    assert_eq!(
        stdout_of(&dot),
        "graph g {\n\
         \u{20} v0 [shape=circle, style=filled, fillcolor=black, fontcolor=white];\n\
         \u{20} v1 [shape=circle];\n\
         \u{20} v2 [shape=circle];\n\
         \u{20} v0 -- v1;\n\
         \u{20} v0 -- v2 [label=\"2\"];\n\
         }\n"
    );

    let record = run_in(
        dir.path(),
        &["decode", "--string", "002311", "--format", "jsonl"],
    );
    assert!(record.status.success());
    assert_eq!(
        stdout_of(&record),
        "{\"n\":2,\"id\":0,\"canon\":\"001231\",\"tag\":[2,1,2,2,2,0]}\n"
    );
}

#[test]
fn verify_passes_on_a_small_bound() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["verify", "--max-white", "4"]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("OK"));
}

#[test]
fn export_writes_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["enumerate", "--max-white", "3"])
        .status
        .success());

    let split = run_in(
        dir.path(),
        &[
            "export",
            "--catalog",
            "catalog.jsonl",
            "--format",
            "dot",
            "--out",
            "dots",
        ],
    );
    assert!(split.status.success());
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("dots"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["g2_0.dot", "g3_0.dot", "g3_1.dot", "g3_2.dot"]);

    let concat = run_in(
        dir.path(),
        &[
            "export",
            "--catalog",
            "catalog.jsonl",
            "--format",
            "dot",
            "--out",
            "bundle",
            "--concat",
        ],
    );
    assert!(concat.status.success());
    let bundle = std::fs::read_to_string(dir.path().join("bundle/catalog.dot")).unwrap();
    assert!(bundle.contains("graph g2_0 {"));
    assert!(bundle.contains("graph g3_2 {"));
}

#[test]
fn stats_recomputes_the_table_from_a_catalog() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(
        dir.path(),
        &["enumerate", "--max-white", "5", "--mode", "symmetry"]
    )
    .status
    .success());
    let output = run_in(dir.path(), &["stats", "--catalog", "catalog.jsonl"]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), SMALL_TABLE);
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let invalid_graph = run_in(dir.path(), &["decode", "--string", "0011"]);
    assert_eq!(invalid_graph.status.code(), Some(1));

    let bad_syntax = run_in(dir.path(), &["decode", "--string", "01xy"]);
    assert_eq!(bad_syntax.status.code(), Some(2));

    let bound_too_high = run_in(dir.path(), &["verify", "--max-white", "9"]);
    assert_eq!(bound_too_high.status.code(), Some(2));

    let bound_too_low = run_in(dir.path(), &["enumerate", "--max-white", "1"]);
    assert_eq!(bound_too_low.status.code(), Some(2));

    let no_input = run_in(dir.path(), &["canon"]);
    assert_eq!(no_input.status.code(), Some(2));

    let missing_file = run_in(dir.path(), &["stats", "--catalog", "absent.jsonl"]);
    assert_eq!(missing_file.status.code(), Some(2));

    let tampered = "{\"n\":2,\"id\":0,\"canon\":\"001231\",\"tag\":[2,1,2,2,9,0]}\n";
    std::fs::write(dir.path().join("bad.jsonl"), tampered).unwrap();
    let integrity = run_in(dir.path(), &["stats", "--catalog", "bad.jsonl"]);
    assert_eq!(integrity.status.code(), Some(2));
}
