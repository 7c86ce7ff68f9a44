//! Black-box tests of the command line: exit codes, output formats,
//! and the subprocess solver protocol.

use std::io::Write;
use std::process::{Command, Stdio};

fn elp(args: &[&str], stdin: &str) -> (String, String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_elp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn elp");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("wait for elp");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("exit code"),
    )
}

#[test]
fn solve_reports_world_views_and_exits_zero() {
    let (stdout, _, code) = elp(&["solve"], "a :- M a.\n");
    assert_eq!(stdout, "World view 1: { a }\n");
    assert_eq!(code, 0);
}

#[test]
fn solve_without_world_views_exits_one() {
    let (stdout, _, code) = elp(&["solve"], "a :- not K a.\n");
    assert_eq!(stdout, "no world views\n");
    assert_eq!(code, 1);
}

#[test]
fn parse_errors_exit_two_on_standard_error() {
    let (stdout, stderr, code) = elp(&["solve"], "a :- K X.\n");
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn missing_input_file_exits_two() {
    let (_, stderr, code) = elp(&["solve", "/no/such/file.elp"], "");
    assert_eq!(code, 2);
    assert!(stderr.contains("/no/such/file.elp"));
}

#[test]
fn world_view_cap_keeps_one_view() {
    let (stdout, _, code) = elp(
        &["solve", "--max-world-views", "1"],
        "a :- not K b. b :- not K a.\n",
    );
    assert_eq!(code, 0);
    assert!(
        stdout == "World view 1: { a }\n" || stdout == "World view 1: { b }\n",
        "{stdout}"
    );
}

#[test]
fn json_output_is_stable_and_matches_text() {
    let program = "a :- not K b. b :- not K a.\n";
    let (first, _, code) = elp(&["solve", "--format", "json"], program);
    assert_eq!(code, 0);
    let (second, _, _) = elp(&["solve", "--format", "json"], program);
    assert_eq!(first, second, "equal runs must print identical bytes");

    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["semantics"], "se16");
    let digest = doc["program_digest"].as_str().unwrap();
    assert!(
        digest.starts_with("sha256:") && digest.len() == 71,
        "{digest}"
    );
    let views = doc["world_views"].as_array().unwrap();
    assert_eq!(views.len(), 2);
    assert_eq!(views[0]["index"], 1);
    assert_eq!(views[0]["phi"], serde_json::json!(["not K b"]));
    assert_eq!(views[0]["belief_sets"], serde_json::json!([["a"]]));
    assert_eq!(views[1]["phi"], serde_json::json!(["not K a"]));
    assert!(
        doc.get("stats").is_none(),
        "stats only appear when asked for"
    );

    let (text, _, _) = elp(&["solve"], program);
    assert_eq!(text, "World view 1: { a }\nWorld view 2: { b }\n");
}

#[test]
fn stats_flag_adds_counters_in_both_formats() {
    let program = "a :- M a.\n";
    let (text, _, _) = elp(&["solve", "--stats"], program);
    assert!(text.contains("World view 1: { a }"));
    assert!(text.contains("solver calls:      1"), "{text}");

    let (json, _, _) = elp(&["solve", "--format", "json", "--stats"], program);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["stats"]["solver_calls"], 1);
    assert_eq!(doc["stats"]["guesses_generated"], 2);
}

#[test]
fn semantics_flag_switches_the_mode() {
    let program = "a :- K b. b :- K a. a | b.\n";
    let (se, _, _) = elp(&["solve"], program);
    assert_eq!(se, "World view 1: { a } { b }\n");
    let (all, _, _) = elp(&["solve", "--semantics", "kwbgz15"], program);
    assert_eq!(all, "World view 1: { a } { b }\nWorld view 2: { a, b }\n");
}

#[test]
fn algorithm_route_and_worker_flags_agree_on_the_answer() {
    let program = "a :- not K b. b :- not K a.\n";
    let expected = "World view 1: { a }\nWorld view 2: { b }\n";
    for algorithm in ["naive", "level", "group", "parallel"] {
        for route in ["translate", "direct"] {
            let (stdout, stderr, code) = elp(
                &[
                    "solve",
                    "--algorithm",
                    algorithm,
                    "--route",
                    route,
                    "--guesses-per-call",
                    "2",
                    "--jobs",
                    "2",
                ],
                program,
            );
            assert_eq!(code, 0, "{algorithm} {route}: {stderr}");
            assert_eq!(stdout, expected, "{algorithm} {route}");
        }
    }
}

#[test]
fn fix_flag_narrows_the_guess_space() {
    let program = "a :- not K b. b :- not K a.\n";
    let (stdout, _, code) = elp(&["solve", "--fix", "0=0"], program);
    assert_eq!(code, 0);
    assert_eq!(stdout, "World view 1: { b }\n");
    let (_, stderr, code) = elp(&["solve", "--fix", "9=1"], program);
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"), "{stderr}");
}

#[test]
fn level_start_flag_skips_levels() {
    let program = "a :- not K b. b :- not K a.\n";
    let (json, _, _) = elp(
        &["solve", "--level-start", "1", "--format", "json", "--stats"],
        program,
    );
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["stats"]["levels_visited"], 2);
    assert_eq!(doc["world_views"].as_array().unwrap().len(), 2);
}

#[test]
fn translate_emits_the_bare_rewrite_by_default() {
    let (stdout, _, code) = elp(&["translate"], "a :- M a.\n");
    assert_eq!(code, 0);
    assert_eq!(stdout, "m_a :- m1_a.\nm_a :- m0_a, not not a.\na :- m_a.\n");
}

#[test]
fn translate_with_guess_appends_the_encoding() {
    let (one, _, _) = elp(&["translate", "--with-guess", "1"], "a :- M a.\n");
    assert_eq!(
        one,
        "m1_a.\nm_a :- m1_a.\nm_a :- m0_a, not not a.\na :- m_a.\n"
    );
    let (block, _, _) = elp(
        &["translate", "--with-guess", "0", "--with-guess", "1"],
        "a :- M a.\n",
    );
    assert!(block.contains("sel_0 :- not nsel_0."), "{block}");
    assert!(block.contains(":- nsel_0, nsel_1."), "{block}");
}

#[test]
fn translate_rejects_plain_asp_and_bad_guesses() {
    let (_, stderr, code) = elp(&["translate"], "a :- b.\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("no subjective atoms"), "{stderr}");
    let (_, stderr, code) = elp(&["translate", "--with-guess", "2"], "a :- M a.\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"), "{stderr}");
    let (_, _, code) = elp(
        &["translate", "--with-guess", "1", "--with-guess", "1"],
        "a :- M a.\n",
    );
    assert_eq!(code, 2);
}

#[test]
fn gen_eligible_prints_the_benchmark() {
    let (stdout, _, code) = elp(&["gen-eligible", "1"], "");
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "fairGPA(s1) | highGPA(s1).\n\
         eligible(s1) :- highGPA(s1).\n\
         interview(s1) :- not K eligible(s1), not K -eligible(s1).\n"
    );
    let (_, _, code) = elp(&["gen-eligible", "0"], "");
    assert_eq!(code, 2);
}

#[test]
fn solve_asp_speaks_the_adapter_protocol() {
    let (stdout, _, code) = elp(&["solve-asp"], "a | b. c :- a.\n");
    assert_eq!(code, 10);
    assert_eq!(stdout, "Answer: 1\na c\nAnswer: 2\nb\nSATISFIABLE\n");

    let (stdout, _, code) = elp(&["solve-asp"], "a. :- a.\n");
    assert_eq!(code, 20);
    assert_eq!(stdout, "UNSATISFIABLE\n");

    let (stdout, _, code) = elp(&["solve-asp"], "a :- not not a.\n");
    assert_eq!(code, 10);
    assert_eq!(stdout, "Answer: 1\n\nAnswer: 2\na\nSATISFIABLE\n");

    let (_, stderr, code) = elp(&["solve-asp"], "a :- K b.\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("subjective"), "{stderr}");
}

#[test]
fn external_engine_matches_the_internal_one() {
    let program = "fairGPA(s1) | highGPA(s1).\n\
                   eligible(s1) :- highGPA(s1).\n\
                   interview(s1) :- not K eligible(s1), not K -eligible(s1).\n";
    let (internal, _, code) = elp(&["solve", "--stats"], program);
    assert_eq!(code, 0);
    let cmd = format!("{} solve-asp", env!("CARGO_BIN_EXE_elp"));
    let (external, _, code) = elp(
        &[
            "solve",
            "--engine",
            "external",
            "--external-cmd",
            &cmd,
            "--stats",
        ],
        program,
    );
    assert_eq!(code, 0);
    let body = |s: &str| {
        s.lines()
            .take_while(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&internal), body(&external));

    let (_, stderr, code) = elp(&["solve", "--engine", "external"], program);
    assert_eq!(code, 2);
    assert!(stderr.contains("ELP_EXTERNAL_SOLVER"), "{stderr}");
}

#[test]
fn diff_passes_on_a_clean_corpus_and_random_seeds() {
    let dir = std::env::temp_dir().join(format!("elp-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, text) in [
        ("e1", "a :- M a.\n"),
        ("e2", "a :- K a.\n"),
        ("e3", "a :- not K a.\n"),
        ("e4", "a :- not K b. b :- not K a.\n"),
    ] {
        std::fs::write(dir.join(format!("{name}.elp")), text).unwrap();
    }
    let (stdout, stderr, code) = elp(&["diff", dir.to_str().unwrap()], "");
    assert_eq!(code, 0, "{stderr}");
    assert_eq!(stdout, "checked 4 program(s), 0 failure(s)\n");

    let (stdout, _, code) = elp(&["diff", "--random", "5", "--seed", "40"], "");
    assert_eq!(code, 0);
    assert_eq!(stdout, "checked 5 program(s), 0 failure(s)\n");
    std::fs::remove_dir_all(&dir).ok();
}
