mod common;

use common::{run, run_in, Case};
use dgla_cli::{AlgebraFile, Loaded};

#[test]
fn golden_reports() {
    let failures: Vec<String> = common::cases()
        .iter()
        .filter_map(|c: &Case| common::check_case(c).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn so3_rigidity_json_matches_the_documented_example() {
    let r = run(&["rigidity".into(), "so3.json".into(), "--json".into()]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["passes"], true);
    assert_eq!(v["H2"], 0);
    assert_eq!(v["tangent_dim"], 3);
}

#[test]
fn corpus_files_are_canonical() {
    for stem in common::CORPUS {
        let path = common::corpus_dir().join(format!("{stem}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let file = AlgebraFile::parse(&text).unwrap();
        file.load().unwrap_or_else(|e| panic!("{stem}: {e}"));
        assert_eq!(
            file.canonical().unwrap().to_json(),
            text,
            "{stem} is not in canonical form"
        );
    }
}

#[test]
fn corpus_matches_the_catalog() {
    for (stem, built) in dgla_cli::corpus::bundled() {
        let on_disk =
            AlgebraFile::read(&common::corpus_dir().join(format!("{stem}.json"))).unwrap();
        assert_eq!(on_disk, built.canonical().unwrap(), "{stem}");
    }
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let text = std::fs::read_to_string(common::cli_dir().join("tests/fixtures/unnormalized.json"))
        .unwrap();
    let once = AlgebraFile::parse(&text).unwrap().canonical().unwrap();
    let twice = AlgebraFile::parse(&once.to_json())
        .unwrap()
        .canonical()
        .unwrap();
    assert_eq!(once, twice);
    assert_eq!(once.unit, Some(vec!["1".to_string(), "0".to_string()]));
    assert_eq!(once.structure.len(), 3);
    let (Loaded::Assoc { algebra: a }, Loaded::Assoc { algebra: b }) = (
        AlgebraFile::parse(&text).unwrap().load().unwrap(),
        once.load().unwrap(),
    ) else {
        panic!("assoc files");
    };
    assert_eq!(a, b);
}

#[test]
fn invalid_files_name_the_failing_triple() {
    let r = run(&["check".into(), "../tests/fixtures/bad_jacobi.json".into()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("(0, 1, 2)"), "{}", r.stderr);
    let r = run(&["check".into(), "../tests/fixtures/bad_index.json".into()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("structure[0]"), "{}", r.stderr);
}

#[test]
fn help_and_version_exit_zero_and_bad_usage_exits_one() {
    assert_eq!(run(&["--help".into()]).code, 0);
    assert_eq!(run(&["--version".into()]).code, 0);
    assert_eq!(run(&["frobnicate".into()]).code, 1);
    assert_eq!(run(&["stability".into(), "sl2_borel.json".into()]).code, 1);
    assert_eq!(
        run(&[
            "stability".into(),
            "sl2_borel.json".into(),
            "--mode".into(),
            "sideways".into()
        ])
        .code,
        1
    );
}

#[test]
fn no_ansi_when_output_is_captured_or_no_color_is_set() {
    let args: Vec<String> = vec!["rigidity".into(), "so3.json".into()];
    assert!(!run(&args).stdout.contains('\x1b'));
    assert!(!run_in(&common::corpus_dir(), &args, &[("NO_COLOR", "1")])
        .stdout
        .contains('\x1b'));
}

#[test]
fn library_run_colors_only_when_asked() {
    let dir = common::corpus_dir();
    let file = dir.join("so3.json").display().to_string();
    let plain = dgla_cli::run(["dgla", "rigidity", &file], false);
    let colored = dgla_cli::run(["dgla", "rigidity", &file], true);
    assert_eq!(plain.code, 0);
    assert!(!plain.stdout.contains('\x1b'));
    assert!(colored.stdout.contains("\x1b[32mtrue\x1b[0m"));
}

#[test]
fn normalize_is_deterministic_in_the_seed() {
    let args: Vec<String> = [
        "normalize",
        "sl2.json",
        "--perturb-seed",
        "9",
        "--epsilon",
        "1e-3",
        "--json",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("timing_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&run(&args).stdout), strip(&run(&args).stdout));
}
