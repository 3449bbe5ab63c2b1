use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normalizing"))
        .args(args)
        .env_remove("NORMALIZING_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json on stdout")
}

#[test]
fn check_normalizing_map() {
    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "AGL(1,5)",
        "--map",
        "1,1,3,4,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict   normalizing"));
}

#[test]
fn check_failing_map_prints_a_witness() {
    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,1,3,4,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("not normalizing"));
    assert!(text.contains("witness"));
}

#[test]
fn check_m12_reports_the_reference_element() {
    let out = run(&[
        "check",
        "--degree",
        "12",
        "--group",
        "M12",
        "--map",
        "1,2,3,4,5,5,6,6,6,6,6,6",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["verdict"], "not-normalizing");
    assert_eq!(v["report"]["witness"]["g"], "(1 3 2)(4 6 5)(7 9 8)");
    assert_eq!(v["report"]["strategy"], "shortcut");
}

#[test]
fn witnesses_replay_through_single_pair_mode() {
    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,1,3,4,1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let g = v["report"]["witness"]["g"].as_str().unwrap().to_string();
    let replay = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,1,3,4,1",
        "--element",
        &g,
        "--format",
        "json",
    ]);
    assert_eq!(replay.status.code(), Some(1));
    let r = json(&replay);
    assert_eq!(r["report"]["member"], false);
    assert_eq!(r["report"]["product"], v["report"]["witness"]["product"]);

    // a conjugate product is a member
    let member = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,1,3,4,1",
        "--element",
        "()",
    ]);
    assert_eq!(member.status.code(), Some(0));
}

#[test]
fn classify_degree_six() {
    let out = run(&["classify", "--degree", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut found: Vec<String> = v["report"]["normalizing"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    found.sort();
    assert_eq!(found, ["1", "A6", "PGL(2,5)", "PSL(2,5)", "S6"]);
    assert_eq!(v["report"]["matches"], true);
}

#[test]
fn classify_degree_seven_has_no_proper_primitive_group() {
    let out = run(&["classify", "--degree", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("normalizing: 1, A7, S7\n"));
    assert!(text.contains("matches classification: yes"));
}

#[test]
fn classify_rejects_other_degrees() {
    let out = run(&["classify", "--degree", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degrees 4 to 9"));
}

#[test]
fn groups_list_degree_nine() {
    let out = run(&["groups", "list", "--degree", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for expected in [
        "PSL(2,8)       order 504",
        "PGammaL(2,8)   order 1512",
        "ASL(2,3)       order 216",
        "AGL(2,3)       order 432",
        "A9             order 181440",
        "S9             order 362880",
        "1              order 1",
    ] {
        assert!(text.contains(expected), "{expected}");
    }
}

#[test]
fn reps_of_s2() {
    let out = run(&["reps", "--degree", "2", "--group", "S2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["count"], 1);
}

#[test]
fn reps_stream_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reps.txt");
    let out = run(&[
        "reps",
        "--degree",
        "4",
        "--group",
        "A4",
        "--rank",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.contains("rank 2")).collect();
    assert!(!lines.is_empty());
    assert!(text.ends_with(&format!("{} representatives\n", lines.len())));
}

#[test]
fn filters_of_d10() {
    let out = run(&["filters", "--degree", "5", "--group", "D(2*5)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("transitive  true"));
    assert!(text.contains("primitive   true"));
    assert!(text.contains("(2,3)-homogeneous  true"));
    assert!(text.contains("passes all filters"));
}

#[test]
fn filters_explain_rejections() {
    let out = run(&[
        "filters", "--degree", "5", "--group", "C5", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["report"]["rejected_by"], Value::Null);
    let out = run(&[
        "filters", "--degree", "7", "--group", "AGL(1,7)", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["report"]["rejected_by"], Value::Null);
    assert_eq!(v["report"]["homogeneity"][1]["holds"], true);
}

#[test]
fn json_output_does_not_depend_on_workers() {
    let args = |w: &'static str| {
        vec![
            "normalizing",
            "--degree",
            "6",
            "--group",
            "PGL(2,5)",
            "--format",
            "json",
            "--workers",
            w,
        ]
    };
    let one = run(&args("1"));
    let three = run(&args("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let v = json(&one);
    assert_eq!(v["schema"], 1);
    assert!(v.get("elapsed_ms").is_none());

    let timed = run(&[
        "normalizing",
        "--degree",
        "5",
        "--group",
        "C5",
        "--format",
        "json",
        "--timings",
    ]);
    assert_eq!(timed.status.code(), Some(1));
    assert!(json(&timed).get("elapsed_ms").is_some());
}

#[test]
fn k_normalizing_by_rank() {
    let out = run(&[
        "k-normalizing",
        "--degree",
        "5",
        "--group",
        "C5",
        "--rank",
        "4",
    ]);
    let code = out.status.code();
    assert!(code == Some(0) || code == Some(1));
    let bad = run(&[
        "k-normalizing",
        "--degree",
        "5",
        "--group",
        "C5",
        "--rank",
        "5",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn parse_errors_report_position() {
    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,1,x,4,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 5"));

    let out = run(&[
        "check", "--degree", "5", "--group", "C5", "--map", "1,1,3,4",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "C5",
        "--map",
        "1,2,3,4,5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "Nope",
        "--map",
        "1,1,3,4,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generator_files_define_groups() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dihedral.txt");
    std::fs::write(&path, "# D10\n(1 2 3 4 5)\n(2 5)(3 4)\n").unwrap();
    let p = path.to_str().unwrap();
    let out = run(&[
        "check",
        "--degree",
        "5",
        "--group",
        p,
        "--map",
        "1,1,1,3,2",
        "--format",
        "json",
    ]);
    let via_file = json(&out);
    assert_eq!(via_file["report"]["group"], "dihedral");
    let catalog = json(&run(&[
        "check",
        "--degree",
        "5",
        "--group",
        "D10",
        "--map",
        "1,1,1,3,2",
        "--format",
        "json",
    ]));
    assert_eq!(via_file["report"]["verdict"], catalog["report"]["verdict"]);

    std::fs::write(&path, "(1 2 3 4 5)\n(1 1)\n").unwrap();
    let out = run(&["filters", "--degree", "5", "--group", p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn caches_resume_and_refuse_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("run.cache");
    let c = cache.to_str().unwrap();
    let first = run(&[
        "normalizing",
        "--degree",
        "6",
        "--group",
        "PSL(2,5)",
        "--cache",
        c,
        "--format",
        "json",
    ]);
    assert_eq!(first.status.code(), Some(0));
    assert!(Path::new(c).exists());
    let again = run(&[
        "normalizing",
        "--degree",
        "6",
        "--group",
        "PSL(2,5)",
        "--resume",
        c,
        "--format",
        "json",
    ]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(
        json(&again)["report"]["representatives"],
        json(&first)["report"]["representatives"]
    );

    let other = run(&[
        "normalizing",
        "--degree",
        "6",
        "--group",
        "PGL(2,5)",
        "--cache",
        c,
    ]);
    assert_eq!(other.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&other.stderr).contains("cache"));
}

#[test]
fn cache_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_normalizing"))
        .args(["classify", "--degree", "5", "--format", "json"])
        .env("NORMALIZING_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n == "n5-AGL_1_5_.cache"), "{names:?}");
}
