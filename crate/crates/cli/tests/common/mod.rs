//! Golden-test harness shared by the CLI tests and the acceptance suite.
//!
//! Every case runs the binary from the corpus directory twice, once with
//! `--json` and once without. The JSON (minus `timing_ms`) is compared with
//! `tests/golden/<name>.json`; `DGLA_BLESS=1` rewrites the golden files.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{Map, Value};

/// Floats in golden files are compared to this relative tolerance; every
/// other value must match exactly.
pub const GOLDEN_FLOAT_RTOL: f64 = 1e-9;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub exit: i32,
}

fn case(name: &str, args: &[&str], exit: i32) -> Case {
    Case {
        name: name.into(),
        args: args.iter().map(|s| s.to_string()).collect(),
        exit,
    }
}

pub const CORPUS: [&str; 9] = [
    "so3",
    "sl2",
    "abelian2",
    "heisenberg3",
    "m2k",
    "dual_numbers",
    "sl2_borel",
    "sl2_id_morphism",
    "rep_so_example",
];

pub fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    for stem in CORPUS {
        let file = format!("{stem}.json");
        out.push(case(&format!("check_{stem}"), &["check", &file], 0));
        out.push(case(&format!("rigidity_{stem}"), &["rigidity", &file], 0));
    }
    out.extend([
        case(
            "stability_sl2_borel_subalgebra",
            &["stability", "sl2_borel.json", "--mode", "subalgebra"],
            0,
        ),
        case(
            "stability_sl2_id_pair",
            &["stability", "sl2_id_morphism.json", "--mode", "pair"],
            0,
        ),
        case(
            "stability_sl2_id_graph",
            &["stability", "sl2_id_morphism.json", "--mode", "graph"],
            0,
        ),
        case(
            "stability_rep_so_into",
            &[
                "stability",
                "rep_so_example.json",
                "--mode",
                "into-subalgebra",
            ],
            0,
        ),
        case(
            "stability_rep_so_pair",
            &["stability", "rep_so_example.json", "--mode", "pair"],
            0,
        ),
        case("unitality_m2k", &["unitality", "m2k.json"], 0),
        case(
            "unitality_dual_numbers",
            &["unitality", "dual_numbers.json"],
            0,
        ),
        case(
            "cohomology_sl2_adjoint",
            &[
                "cohomology",
                "sl2.json",
                "--complex",
                "ce",
                "--module",
                "adjoint",
                "--degrees",
                "0..2",
            ],
            0,
        ),
        case(
            "cohomology_abelian2_trivial",
            &[
                "cohomology",
                "abelian2.json",
                "--module",
                "trivial",
                "--degrees",
                "0..2",
            ],
            0,
        ),
        case(
            "cohomology_heisenberg3_adjoint",
            &["cohomology", "heisenberg3.json", "--degrees", "0..3"],
            0,
        ),
        case(
            "cohomology_sl2_borel_quotient",
            &["cohomology", "sl2_borel.json", "--module", "quotient:borel"],
            0,
        ),
        case(
            "cohomology_rep_so_quotient",
            &[
                "cohomology",
                "rep_so_example.json",
                "--module",
                "quotient:so3",
            ],
            0,
        ),
        case(
            "cohomology_sl2_id_through_f",
            &[
                "cohomology",
                "sl2_id_morphism.json",
                "--module",
                "through-f",
                "--degrees",
                "1..3",
            ],
            0,
        ),
        case(
            "cohomology_dual_numbers",
            &["cohomology", "dual_numbers.json", "--complex", "hochschild"],
            0,
        ),
        case(
            "cohomology_m2k",
            &[
                "cohomology",
                "m2k.json",
                "--complex",
                "hochschild",
                "--degrees",
                "0..2",
            ],
            0,
        ),
        case(
            "normalize_m2k",
            &[
                "normalize",
                "m2k.json",
                "--perturb-seed",
                "1",
                "--epsilon",
                "1e-3",
            ],
            0,
        ),
        case(
            "normalize_sl2",
            &[
                "normalize",
                "sl2.json",
                "--perturb-seed",
                "2",
                "--epsilon",
                "1e-3",
            ],
            0,
        ),
        case(
            "normalize_sl2_borel",
            &[
                "normalize",
                "sl2_borel.json",
                "--perturb-seed",
                "3",
                "--epsilon",
                "1e-3",
                "--tol",
                "1e-10",
            ],
            0,
        ),
        case(
            "normalize_rep_so",
            &[
                "normalize",
                "rep_so_example.json",
                "--perturb-seed",
                "4",
                "--epsilon",
                "1e-3",
            ],
            0,
        ),
        case(
            "normalize_sl2_id_pair",
            &[
                "normalize",
                "sl2_id_morphism.json",
                "--perturb-seed",
                "5",
                "--epsilon",
                "1e-3",
                "--setting",
                "pair",
            ],
            0,
        ),
        case(
            "error_bad_jacobi",
            &["check", "../tests/fixtures/bad_jacobi.json"],
            2,
        ),
        case(
            "error_bad_assoc",
            &["check", "../tests/fixtures/bad_assoc.json"],
            2,
        ),
        case(
            "error_bad_unit",
            &["check", "../tests/fixtures/bad_unit.json"],
            2,
        ),
        case(
            "error_bad_morphism",
            &["check", "../tests/fixtures/bad_morphism.json"],
            2,
        ),
        case(
            "error_bad_subspace",
            &["check", "../tests/fixtures/bad_subspace.json"],
            2,
        ),
        case(
            "error_bad_rational",
            &["check", "../tests/fixtures/bad_rational.json"],
            1,
        ),
        case(
            "error_bad_index",
            &["check", "../tests/fixtures/bad_index.json"],
            1,
        ),
        case(
            "error_not_json",
            &["check", "../tests/fixtures/not_json.json"],
            1,
        ),
        case("error_missing_file", &["check", "missing.json"], 1),
        case("error_wrong_kind", &["unitality", "so3.json"], 1),
        case(
            "error_wrong_mode",
            &["stability", "so3.json", "--mode", "pair"],
            1,
        ),
        case(
            "error_degree_range",
            &["cohomology", "m2k.json", "--degrees", "0..3"],
            1,
        ),
        case(
            "error_criterion_fails",
            &[
                "normalize",
                "dual_numbers.json",
                "--setting",
                "rigidity",
                "--perturb-seed",
                "1",
                "--epsilon",
                "1e-3",
            ],
            3,
        ),
        case(
            "error_no_convergence",
            &[
                "normalize",
                "sl2.json",
                "--perturb-seed",
                "1",
                "--epsilon",
                "1e-3",
                "--max-iter",
                "0",
            ],
            4,
        ),
    ]);
    out
}

pub fn cli_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn corpus_dir() -> PathBuf {
    cli_dir().join("corpus")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_in(dir: &Path, args: &[String], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dgla"));
    cmd.args(args).current_dir(dir).env_remove("NO_COLOR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn run(args: &[String]) -> Run {
    run_in(&corpus_dir(), args, &[])
}

fn without_timing(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("timing_ms");
    }
    v
}

fn close(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (
                x.as_f64().unwrap_or(f64::NAN),
                y.as_f64().unwrap_or(f64::NAN),
            );
            (x - y).abs() <= GOLDEN_FLOAT_RTOL * x.abs().max(y.abs()).max(1e-300) || x == y
        }
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(a, b)| close(a, b))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| close(v, w)))
        }
        _ => a == b,
    }
}

/// `key: value` lines of a text report, each value read back as JSON when it
/// parses and as a bare string otherwise.
pub fn text_fields(text: &str) -> Result<Map<String, Value>, String> {
    let mut out = Map::new();
    for line in text.lines() {
        let (k, v) = line
            .split_once(": ")
            .ok_or_else(|| format!("malformed text line {line:?}"))?;
        let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        out.insert(k.to_string(), value);
    }
    Ok(out)
}

/// Every JSON number appears verbatim in the text rendering.
pub fn text_agrees(json_text: &str, text: &str) -> Result<(), String> {
    let json: Value = serde_json::from_str(json_text).map_err(|e| e.to_string())?;
    let fields = text_fields(text)?;
    let obj = json.as_object().ok_or("report is not an object")?;
    for (k, v) in obj {
        if k == "timing_ms" {
            continue;
        }
        let t = fields
            .get(k)
            .ok_or_else(|| format!("text report lacks {k}"))?;
        if t != v {
            return Err(format!("{k}: json {v} vs text {t}"));
        }
    }
    for k in fields.keys() {
        if !obj.contains_key(k) {
            return Err(format!("json report lacks {k}"));
        }
    }
    Ok(())
}

fn expect(obj: &Map<String, Value>, key: &str, kind: &str) -> Result<(), String> {
    let v = obj.get(key).ok_or_else(|| format!("missing key {key}"))?;
    let ok = match kind {
        "string" => v.is_string(),
        "bool" => v.is_boolean(),
        "uint" => v.is_u64(),
        "number" => v.is_number(),
        "numbers" => v.as_array().is_some_and(|a| a.iter().all(Value::is_number)),
        "uints" => v.as_array().is_some_and(|a| a.iter().all(Value::is_u64)),
        _ => unreachable!("unknown schema type {kind}"),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{key} should be {kind}, got {v}"))
    }
}

/// Keys and value types each report must carry.
pub fn schema_check(json_text: &str, exit: i32) -> Result<(), String> {
    let v: Value = serde_json::from_str(json_text).map_err(|e| e.to_string())?;
    let obj = v.as_object().ok_or("report is not an object")?;
    expect(obj, "command", "string")?;
    if exit != 0 {
        expect(obj, "error", "string")?;
        expect(obj, "exit_code", "uint")?;
        if obj["exit_code"] != exit {
            return Err(format!(
                "exit_code field {} but process exited {exit}",
                obj["exit_code"]
            ));
        }
        if exit == 2 {
            expect(obj, "triple", "uints")?;
        }
        return Ok(());
    }
    for (k, t) in [
        ("file", "string"),
        ("kind", "string"),
        ("timing_ms", "number"),
    ] {
        expect(obj, k, t)?;
    }
    let command = obj["command"].as_str().unwrap_or_default();
    let keys: &[(&str, &str)] = match command {
        "check" => &[("valid", "bool")],
        "cohomology" => &[("complex", "string"), ("module", "string")],
        "rigidity" | "stability" | "unitality" => &[
            ("criterion", "string"),
            ("obstruction_degree", "uint"),
            ("obstruction_dim", "uint"),
            ("tangent_dim", "uint"),
            ("passes", "bool"),
            ("conclusion", "string"),
        ],
        "normalize" => &[
            ("setting", "string"),
            ("obstruction_dim", "uint"),
            ("tangent_dim", "uint"),
            ("passes", "bool"),
            ("seed", "uint"),
            ("epsilon", "number"),
            ("initial_residual", "number"),
            ("converged", "bool"),
            ("iterations", "uint"),
            ("residual", "number"),
            ("v", "numbers"),
            ("x", "numbers"),
        ],
        other => return Err(format!("unknown command {other}")),
    };
    for (k, t) in keys {
        expect(obj, k, t)?;
    }
    let cohomology_keys: Vec<&String> = obj.keys().filter(|k| k.starts_with('H')).collect();
    if matches!(
        command,
        "cohomology" | "rigidity" | "stability" | "unitality"
    ) && cohomology_keys.is_empty()
    {
        return Err("no H<k> keys".into());
    }
    for k in cohomology_keys {
        expect(obj, k, "uint")?;
    }
    Ok(())
}

fn golden_path(name: &str) -> PathBuf {
    cli_dir()
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

/// Runs one case end to end; `Err` describes the first mismatch.
pub fn check_case(c: &Case) -> Result<(), String> {
    let mut json_args = c.args.clone();
    json_args.push("--json".into());
    let json_run = run(&json_args);
    if json_run.code != c.exit {
        return Err(format!(
            "{}: exit {} (want {}), stderr {}",
            c.name, json_run.code, c.exit, json_run.stderr
        ));
    }
    schema_check(&json_run.stdout, c.exit).map_err(|e| format!("{}: {e}", c.name))?;
    let text_run = run(&c.args);
    if text_run.code != c.exit {
        return Err(format!("{}: text run exited {}", c.name, text_run.code));
    }
    if c.exit == 0 {
        text_agrees(&json_run.stdout, &text_run.stdout).map_err(|e| format!("{}: {e}", c.name))?;
    } else {
        let v: Value = serde_json::from_str(&json_run.stdout).map_err(|e| e.to_string())?;
        let msg = v["error"].as_str().unwrap_or_default();
        if !text_run.stderr.contains(msg) {
            return Err(format!(
                "{}: stderr {:?} does not carry {msg:?}",
                c.name, text_run.stderr
            ));
        }
    }
    let got = without_timing(&serde_json::from_str(&json_run.stdout).map_err(|e| e.to_string())?);
    let path = golden_path(&c.name);
    if std::env::var_os("DGLA_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().expect("golden dir")).map_err(|e| e.to_string())?;
        let mut s = serde_json::to_string_pretty(&got).map_err(|e| e.to_string())?;
        s.push('\n');
        std::fs::write(&path, s).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want: Value = serde_json::from_str(
        &std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?,
    )
    .map_err(|e| e.to_string())?;
    if !close(&got, &want) {
        return Err(format!(
            "{}: output differs from golden\n got: {got}\nwant: {want}",
            c.name
        ));
    }
    Ok(())
}
