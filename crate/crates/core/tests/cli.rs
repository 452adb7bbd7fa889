use std::path::Path;

use interval_rank::cli::run;
use interval_rank::format::parse_rational_matrix;

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fullrank_reports_verdict_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let regular = dir.path().join("regular.txt");
    std::fs::write(&regular, "2 2\n2:4 1\n1 2:4\n").unwrap();
    let (report, code) = run(["interval-rank", "fullrank", path(&regular), "--oracle"]).unwrap();
    assert_eq!(code, 0);
    assert_eq!(report.outcome, "ok");
    assert_eq!(report.payload["verdict"]["full_rank"], true);
    assert_eq!(report.payload["oracle"]["agrees"], true);
    assert_eq!(report.input_digest.len(), 64);

    let singular = dir.path().join("singular.txt");
    std::fs::write(&singular, "1 1\n-1:1\n").unwrap();
    let (report, code) = run(["interval-rank", "fullrank", path(&singular)]).unwrap();
    assert_eq!(code, 1);
    assert_eq!(report.payload["verdict"]["violation"]["kind"], "sign-pair");
}

#[test]
fn large_squares_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("big.txt");
    let mut text = String::from("9 9\n");
    for i in 0..9 {
        let row: Vec<&str> = (0..9).map(|j| if i == j { "10:11" } else { "0" }).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&f, text).unwrap();
    let (report, code) = run(["interval-rank", "fullrank", path(&f)]).unwrap();
    assert_eq!(code, 2);
    assert_eq!(report.error.unwrap().kind, "TooLarge");
}

#[test]
fn parse_errors_carry_locations() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "2 2\n0:1 0:1\n0:1 1:x\n").unwrap();
    let (report, code) = run(["interval-rank", "fullrank", path(&f)]).unwrap();
    assert_eq!(code, 2);
    let err = report.error.unwrap();
    assert_eq!(err.kind, "Parse");
    assert!(err.message.contains("3") && err.message.contains("5"), "{}", err.message);

    let missing = dir.path().join("missing.txt");
    let (report, code) = run(["interval-rank", "fullrank", path(&missing)]).unwrap();
    assert_eq!((code, report.error.unwrap().kind.as_str()), (2, "io"));
}

#[test]
fn gen_then_realize() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let (report, code) = run([
        "interval-rank", "gen", "--p", "4", "--q", "4", "--rank", "q-1", "--d", "2", "--seed", "5", "--out", path(&prefix),
    ])
    .unwrap();
    assert_eq!(code, 0, "{:?}", report.error);
    assert_eq!(report.payload["rank"], 3);
    let out = dir.path().join("out.txt");
    let alpha = prefix.with_extension("alpha");
    let witness = prefix.with_extension("witness");
    let (report, code) = run([
        "interval-rank", "realize", path(&alpha), path(&witness), "--rank", "3", "--mode", "at-most", "--out", path(&out),
    ])
    .unwrap();
    assert_eq!(code, 0, "{:?}", report.error);
    assert_eq!(report.payload["certificate"]["contained"], true);
    let m = parse_rational_matrix(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m.shape(), (4, 4));
}

#[test]
fn gen_rejects_bad_fraction_and_ranks() {
    let args = ["interval-rank", "gen", "--p", "3", "--q", "3", "--rank", "1", "--d", "2", "--seed", "0", "--out", "x", "--degenerate-fraction", "3/2"];
    assert!(run(args).is_err());
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("x");
    let (report, code) = run([
        "interval-rank", "gen", "--p", "8", "--q", "8", "--rank", "4", "--d", "2", "--seed", "0", "--out", path(&prefix),
    ])
    .unwrap();
    assert_eq!(code, 2);
    assert_eq!(report.error.unwrap().kind, "UnsatisfiableSpec");
    let (_, code) = run([
        "interval-rank", "gen", "--p", "3", "--q", "3", "--rank", "2", "--d", "4", "--seed", "0", "--out", path(&prefix),
    ])
    .unwrap();
    assert_eq!(code, 2);
}
