//! Exit codes and JSON output of the `constancy` binary.
//!
//! Golden files live in `tests/golden/`; run with `UPDATE_GOLDEN=1` to
//! rewrite them after an intended format change.

use std::path::PathBuf;
use std::process::Command;

use constancy::certify::Certificate;
use constancy::search::SearchReport;

const BIN: &str = env!("CARGO_BIN_EXE_constancy");

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    exit: i32,
}

const CASES: &[Case] = &[
    Case {
        name: "certify_rational_two_roots",
        args: &["certify", "--field", "GF(5)", "--backend", "rational", "--f", "[4,2,3]", "--q", "3"],
        exit: 0,
    },
    Case {
        name: "certify_single_root",
        args: &["certify", "--field", "GF(5)", "--backend", "rational", "--f", "X^3", "--q", "3"],
        exit: 1,
    },
    Case {
        name: "certify_q_is_characteristic",
        args: &["certify", "--field", "GF(3)", "--f", "X*(X-1)", "--q", "3"],
        exit: 1,
    },
    Case {
        name: "certify_elliptic",
        args: &["certify", "--field", "GF(5)", "--backend", "elliptic", "--a", "0,0,0,1,1", "--f", "X*(X-1)", "--q", "3"],
        exit: 0,
    },
    Case {
        name: "certify_elliptic_tower",
        args: &["certify", "--curve", "elliptic(GF(5); a=[0,0,0,1,1])", "--f", "X*(X-1)", "--q", "3", "--p", "2", "--levels", "8"],
        exit: 0,
    },
    Case {
        name: "certify_tower_p_coprime",
        args: &["certify", "--curve", "elliptic(GF(5); a=[0,0,0,1,1])", "--f", "X*(X-1)", "--q", "2", "--p", "2"],
        exit: 0,
    },
    Case {
        name: "certify_base_change",
        args: &["certify", "--field", "GF(5)", "--f", "X^2-2", "--q", "3", "--base-change"],
        exit: 0,
    },
    Case {
        name: "certify_without_base_change",
        args: &["certify", "--field", "GF(5)", "--f", "X^2-2", "--q", "3"],
        exit: 1,
    },
    Case {
        name: "certify_multivariate",
        args: &["certify", "--field", "GF(3)", "--backend", "multivariate", "--vars", "2", "--f", "X*(X-1)", "--q", "2"],
        exit: 0,
    },
    Case {
        name: "progression_rational",
        args: &["progression", "--l", "5", "--m", "2", "--d", "3", "--r", "1", "--q", "3", "--backend", "rational"],
        exit: 0,
    },
    Case {
        name: "progression_refused",
        args: &["progression", "--l", "5", "--m", "2", "--d", "4", "--r", "1", "--q", "3"],
        exit: 1,
    },
    Case {
        name: "search_rational_constants",
        args: &["search", "--field", "GF(5)", "--f", "[4,2,3]", "--n", "3", "--bound", "3"],
        exit: 0,
    },
    Case {
        name: "search_multivariate_witness",
        args: &["search", "--field", "GF(3)", "--backend", "multivariate", "--f", "X^2*(X-1)^2", "--n", "2", "--bounds", "1,1"],
        exit: 0,
    },
    Case {
        name: "tower_elliptic",
        args: &["tower", "--curve", "elliptic(GF(5); a=[0,0,0,1,1])", "--p", "2", "--q", "3", "--levels", "8"],
        exit: 0,
    },
    Case {
        name: "factor_inseparable",
        args: &["factor", "--field", "GF(3)", "--f", "X^9-X^3"],
        exit: 0,
    },
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str], json: Option<&std::path::Path>) -> (i32, String, String) {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("CONSTANCY_CAP").env_remove("CONSTANCY_CYCLE_CAP").env_remove("CONSTANCY_WORKERS");
    if let Some(p) = json {
        cmd.arg("--json").arg(p);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Zeroes the search timing, the only nondeterministic field of any report.
fn normalize(json: &str) -> String {
    match serde_json::from_str::<SearchReport>(json) {
        Ok(mut r) => {
            r.elapsed_ms = 0;
            r.to_json() + "\n"
        }
        Err(_) => json.to_string(),
    }
}

#[test]
fn golden_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for case in CASES {
        let path = dir.path().join(format!("{}.json", case.name));
        let (code, _, err) = run(case.args, Some(&path));
        assert_eq!(code, case.exit, "{}: stderr {err}", case.name);
        let got = normalize(&std::fs::read_to_string(&path).unwrap());
        let golden = golden_dir().join(format!("{}.json", case.name));
        if update {
            std::fs::write(&golden, &got).unwrap();
        }
        let want = std::fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing golden file {}", golden.display()));
        assert_eq!(got, want, "{} differs from its golden file", case.name);
    }
}

#[test]
fn reports_round_trip() {
    for case in CASES {
        let text = std::fs::read_to_string(golden_dir().join(format!("{}.json", case.name))).unwrap();
        match case.args[0] {
            "certify" | "progression" => {
                let c: Certificate = serde_json::from_str(&text).unwrap();
                assert_eq!(c.to_json() + "\n", text, "{}", case.name);
            }
            "search" => {
                let r: SearchReport = serde_json::from_str(&text).unwrap();
                assert_eq!(r.to_json() + "\n", text, "{}", case.name);
            }
            _ => {}
        }
    }
}

#[test]
fn usage_errors_exit_three_with_one_line() {
    for args in [
        &["bogus"][..],
        &["certify", "--field", "GF(5)", "--f", "X"][..],
        &["certify", "--field", "GF(6)", "--f", "X", "--q", "3"][..],
        &["certify", "--field", "GF(5)", "--f", "X^2+", "--q", "3"][..],
        &["certify", "--field", "GF(5)", "--backend", "elliptic", "--a", "0,0,0,0,0", "--f", "X", "--q", "3"][..],
        &["progression", "--l", "5", "--m", "2", "--d", "3", "--r", "1", "--q", "5"][..],
        &["search", "--field", "GF(5)", "--f", "X", "--n", "2"][..],
    ] {
        let (code, _, err) = run(args, None);
        assert_eq!(code, 3, "{args:?}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn help_lists_cap_overrides() {
    let (code, out, _) = run(&["--help"], None);
    assert_eq!(code, 0);
    for word in ["certify", "tower", "progression", "search", "factor", "selftest", "CONSTANCY_CAP"] {
        assert!(out.contains(word), "help lacks {word}");
    }
}

#[test]
fn cap_env_override_is_enforced() {
    let out = Command::new(BIN)
        .args(["search", "--field", "GF(7)", "--f", "X*(X-1)", "--n", "3", "--bound", "3"])
        .env("CONSTANCY_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds cap 100"));
}

#[test]
fn confrontation_and_text_summary() {
    let (code, out, _) = run(
        &["certify", "--field", "GF(7)", "--f", "X*(X-1)*(X-2)", "--q", "2", "--confront", "3", "--workers", "2"],
        None,
    );
    assert_eq!(code, 0);
    assert!(out.contains("only_constant_solutions"));
    assert!(out.contains("0 nonconstant"));
    let (code, out, _) = run(&["certify", "--field", "GF(5)", "--f", "X^3", "--q", "3", "--confront", "1"], None);
    assert_eq!(code, 1);
    assert!(out.contains("H3_at_least_two_distinct_roots"));
}

#[test]
fn selftest_passes_and_mutant_fails() {
    let (code, out, _) = run(&["selftest"], None);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["selftest", "--mutant"], None);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] power_difference_law") && out.contains("witness"));
}

#[test]
fn selftest_verdicts_do_not_depend_on_seed() {
    let verdicts = |seed: &str| {
        let (code, out, _) = run(&["selftest", "--seed", seed], None);
        let v: Vec<String> = out.lines().map(|l| l.split(" (").next().unwrap().to_string()).collect();
        (code, v)
    };
    let base = verdicts("1");
    for seed in ["2", "12345"] {
        assert_eq!(verdicts(seed), base);
    }
}
