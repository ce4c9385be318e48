use std::fs;
use std::path::Path;
use std::process::Command;

use burstlattice_cli::{exit, run, CodeSpecFile};

const Z7_BALL: &str = "n=3 b=2 kplus=1 kminus=0 cyclic=true";

fn call(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("burstlattice").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = call(&["verify", "--ball", Z7_BALL, "--group", "Z7", "--seq", "1,2,4"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("perfect splitting"));

    let (code, out, _) = call(&["verify", "--ball", Z7_BALL, "--group", "Z7", "--seq", "1,1,1"]);
    assert_eq!(code, exit::VERIFY_FAILED);
    assert!(out.contains("collision"));

    let (code, _, _) = call(&["verify", "--ball", Z7_BALL, "--group", "Z8", "--seq", "1,2,4"]);
    assert_eq!(code, exit::VERIFY_FAILED);

    let (code, _, _) = call(&["verify", "--ball", Z7_BALL, "--group", "Q7", "--seq", "1,2,4"]);
    assert_eq!(code, exit::PARSE);

    let (code, _, _) = call(&["verify", "--ball", "n=3 b=2", "--group", "Z7", "--seq", "1,2,4"]);
    assert_eq!(code, exit::PARSE);
}

#[test]
fn construct_exit_codes() {
    assert_eq!(call(&["construct", "--kind", "c210", "--n", "5"]).0, exit::UNSUPPORTED);
    let (code, out, _) = call(&["construct", "--kind", "c210", "--n", "4"]);
    assert_eq!(code, exit::OK);
    let file: CodeSpecFile = out.parse().unwrap();
    assert_eq!(file.group().to_string(), "Z9");

    let (code, out, _) = call(&["construct", "--kind", "n210", "--n", "3"]);
    assert_eq!(code, exit::OK);
    assert!(out.parse::<CodeSpecFile>().is_ok());

    let salpha = ["construct", "--kind", "salpha", "--q", "19", "--b", "2", "--kplus", "1", "--kminus", "1"];
    assert_eq!(call(&salpha).0, exit::NOT_FOUND);
    assert_eq!(call(&["construct", "--kind", "salpha", "--q", "21"]).0, exit::UNSUPPORTED);
    assert_eq!(call(&["construct", "--kind", "ralpha", "--q", "37"]).0, exit::NOT_FOUND);

    // GF(11) with alpha = 2 fails the (2,1,0) condition
    assert_eq!(
        call(&["construct", "--kind", "salpha", "--q", "11", "--alpha", "2"]).0,
        exit::VERIFY_FAILED
    );
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let (code, _, err) = call(&["frobnicate"]);
    assert_eq!(code, exit::USAGE);
    assert!(err.contains("Usage"));
    assert_eq!(call(&["--help"]).0, exit::OK);
}

#[test]
fn search_reports_found_and_none() {
    let (code, out, _) = call(&["search", "--ball", "n=5 b=2 kplus=2 kminus=0 cyclic=true", "--group-order", "31"]);
    assert_eq!(code, exit::NOT_FOUND);
    assert!(out.contains("none over Z31"));

    let (code, out, _) = call(&[
        "search",
        "--ball",
        "n=4 b=2 kplus=1 kminus=1 cyclic=true",
        "--group-order",
        "25",
        "--jobs",
        "2",
    ]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("1,5,2,10"));

    let (code, _, _) = call(&[
        "search",
        "--ball",
        "n=6 b=2 kplus=2 kminus=0 cyclic=true",
        "--group-order",
        "37",
        "--budget",
        "100",
        "--no-prune-orbit",
        "--no-prune-rotation",
    ]);
    assert_eq!(code, exit::RESOURCE);

    assert_eq!(
        call(&["search", "--ball", Z7_BALL, "--group-order", "8"]).0,
        exit::UNSUPPORTED
    );
}

#[test]
fn search_all_groups_proves_nonexistence() {
    let (code, out, _) = call(&[
        "search",
        "--ball",
        "n=5 b=2 kplus=2 kminus=0 cyclic=false",
        "--group-order",
        "27",
        "--all-groups",
    ]);
    assert_eq!(code, exit::NOT_FOUND);
    for g in ["Z27", "Z3xZ9", "Z3xZ3xZ3"] {
        assert!(out.contains(&format!("none over {g}")), "{out}");
    }
    assert!(out.contains("no Abelian group of order 27"));
}

#[test]
fn search_checkpoint_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("state.json");
    let (code, _, _) = call(&[
        "search",
        "--ball",
        "n=4 b=2 kplus=1 kminus=1 cyclic=true",
        "--group-order",
        "25",
        "--checkpoint",
        cp.to_str().unwrap(),
    ]);
    assert_eq!(code, exit::OK);
    let text = fs::read_to_string(&cp).unwrap();
    assert!(text.contains("\"complete\": true"));

    // checkpoints need a sequential search
    let (code, _, _) = call(&[
        "search",
        "--ball",
        "n=4 b=2 kplus=1 kminus=1 cyclic=true",
        "--group-order",
        "25",
        "--jobs",
        "2",
        "--checkpoint",
        cp.to_str().unwrap(),
    ]);
    assert_eq!(code, exit::UNSUPPORTED);
}

#[test]
fn decode_and_simulate_from_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z7.code");
    fs::write(&path, format!("ball {Z7_BALL}\nZ7\n1,2,4\n")).unwrap();
    let p = path.to_str().unwrap();

    let (code, out, _) = call(&["decode", "--code", p, "--y", "1,3,1"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out, "codeword=1,3,0\nerror=0,0,1\n");

    let (code, out, _) = call(&["decode", "--code", p, "--y", "-4,-1,0"]);
    assert_eq!(code, exit::OK);
    assert!(out.starts_with("codeword="));

    let (code, out, _) = call(&["simulate", "--code", p, "--trials", "500", "--seed", "9"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out, "trials=500 successes=500 failures=0\n");

    // the seed is mandatory
    assert_eq!(call(&["simulate", "--code", p, "--trials", "5"]).0, exit::USAGE);

    fs::write(&path, "ball n=3 b=2 kplus=1 kminus=0 cyclic=true\nZ7\n").unwrap();
    assert_eq!(call(&["decode", "--code", p, "--y", "1,3,1"]).0, exit::PARSE);
}

#[test]
fn constructed_field_code_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gf9.code");
    let (code, out, _) = call(&["construct", "--kind", "salpha", "--q", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let text = fs::read_to_string(&path).unwrap();
    assert!(out.ends_with(&text));
    let parsed: CodeSpecFile = text.parse().unwrap();
    assert_eq!(parsed.to_string(), text);
    let (code, _, _) = call(&["verify", "--code", path.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
}

#[test]
fn ball_subcommand() {
    let (code, out, _) = call(&["ball", "--ball", Z7_BALL]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("size=7 e=2"));
    let (_, out, _) = call(&["ball", "--ball", Z7_BALL, "--list"]);
    assert_eq!(out.lines().count(), 2 + 7);
}

#[test]
fn table_reports_match_golden_files() {
    for (which, file) in [("3", "table3.txt"), ("4", "table4.txt"), ("5", "table5.txt")] {
        let (code, out, _) = call(&["tables", "--which", which]);
        assert_eq!(code, exit::OK);
        assert_eq!(out, golden(file), "table {which}");
    }
    let (code, out, _) = call(&["tables", "--which", "2", "--qmax", "1000"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out, golden("table2.txt"));
    let (code, out, _) = call(&["tables", "--which", "goodq220", "--qmax", "1000"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out, golden("goodq220.txt"));
}

#[test]
fn table_reports_are_stable_across_runs() {
    let a = call(&["tables", "--which", "2", "--row", "T44", "--qmax", "400"]).1;
    let b = call(&["tables", "--which", "2", "--row", "t44", "--qmax", "400"]).1;
    assert_eq!(a, b);
    assert!(a.contains("q=19 bad"));
}

#[test]
fn binary_exit_status_matches_library() {
    let bin = env!("CARGO_BIN_EXE_burstlattice");
    let status = Command::new(bin)
        .args(["verify", "--ball", Z7_BALL, "--group", "Z7", "--seq", "1,1,1"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(status.status.code(), Some(64));
}
