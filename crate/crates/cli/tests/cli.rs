use std::process::{Command, Output};

fn mmagma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmagma"))
        .args(args)
        .env_remove("MMAGMA_FACTOR_BOUND")
        .env_remove("MMAGMA_TREE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mmagma(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    mmagma(args).status.code().unwrap()
}

/// Sum of a decimal-string field over JSON lines.
fn sum_field(text: &str, field: &str) -> u64 {
    text.lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v[field].as_str().unwrap().parse::<u64>().unwrap()
        })
        .sum()
}

#[test]
fn omega_table() {
    let out = stdout(&["omega", "--max", "6"]);
    assert_eq!(out.lines().count(), 6);
    assert_eq!(out.lines().last().unwrap(), r#"{"n":6,"omega":"434"}"#);
    assert_eq!(stdout(&["omega", "--max", "1", "--format", "tsv"]), "1\t1\n");
}

#[test]
fn omega_factorizations_reassemble() {
    let out = stdout(&["omega", "--max", "30", "--factor"]);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let value: u128 = v["omega"].as_str().unwrap().parse().unwrap_or(0);
        if value == 0 {
            continue; // beyond u128
        }
        let product = v["factorization"].as_object().unwrap().iter().fold(1u128, |acc, (p, e)| {
            acc * p.parse::<u128>().unwrap().pow(e.as_u64().unwrap() as u32)
        });
        assert_eq!(product, value, "{line}");
    }
}

#[test]
fn mersenne_records() {
    assert_eq!(stdout(&["mersenne", "order", "1093"]), "{\"p\":\"1093\",\"order\":\"364\"}\n");
    assert_eq!(
        stdout(&["mersenne", "factor", "11"]),
        "{\"n\":11,\"value\":\"2047\",\"factorization\":{\"23\":1,\"89\":1}}\n"
    );
    let pim = stdout(&["mersenne", "pim", "16", "--convention", "example"]);
    assert!(pim.contains("\"count\":15"), "{pim}");
    let strict = stdout(&["mersenne", "pim", "16"]);
    assert!(strict.contains("\"count\":14"), "{strict}");
    assert!(stdout(&["mersenne", "wieferich", "1093"]).contains("\"wieferich_exponent\":2"));
    assert!(stdout(&["mersenne", "search", "4000"]).contains("[\"1093\",\"3511\"]"));
}

#[test]
fn factor_map_is_in_numeric_order() {
    // 2^21 - 1 = 7^2 * 127 * 337; string order would put 127 first.
    assert!(stdout(&["mersenne", "factor", "21"]).contains(r#"{"7":2,"127":1,"337":1}"#));
}

#[test]
fn exp_coefficients() {
    assert_eq!(
        stdout(&["exp", "coeffs", "--degree", "2"]),
        "{\"tree\":\"(x*x)\",\"degree\":2,\"a\":\"1/2\",\"a_hat\":\"1\"}\n"
    );
    let four = stdout(&["exp", "coeffs", "--degree", "4"]);
    assert_eq!(four.lines().count(), 5);
    assert_eq!(sum_field(&four, "a_hat"), 7);
    let six = stdout(&["exp", "coeffs", "--degree", "6"]);
    assert_eq!(six.lines().count(), 42);
    assert_eq!(sum_field(&six, "a_hat"), 434);
    let tsv = stdout(&["exp", "coeffs", "--degree", "2", "--format", "tsv"]);
    assert_eq!(tsv, "tree_key\tdegree\ta_numerator\ta_denominator\ta_hat\n(x*x)\t2\t1\t2\t1\n");
    assert!(stdout(&["exp", "coefficient", "((x*x)*x)"]).contains("\"a\":\"1/12\""));
}

#[test]
fn verify_suite() {
    let out = stdout(&["verify", "--degree", "8"]);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.contains("\"passed\":true")), "{out}");
    assert_eq!(code(&["verify", "--degree", "0"]), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["omega", "--max", "0"]), 2);
    assert_eq!(code(&["omega"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["mersenne", "order", "91"]), 2);
    assert_eq!(code(&["mersenne", "order", "2"]), 2);
    assert_eq!(code(&["exp", "coefficient", "(x*"]), 2);
    assert_eq!(code(&["mersenne", "factor", "65"]), 3);
    assert_eq!(code(&["exp", "coeffs", "--degree", "16"]), 3);
}

#[test]
fn environment_overrides() {
    let run = |var: &str, value: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_mmagma"))
            .args(args)
            .env(var, value)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(run("MMAGMA_FACTOR_BOUND", "10", &["mersenne", "factor", "11"]), 3);
    assert_eq!(run("MMAGMA_FACTOR_BOUND", "80", &["mersenne", "factor", "67"]), 0);
    assert_eq!(run("MMAGMA_TREE_BUDGET", "10", &["exp", "coeffs", "--degree", "6"]), 3);
    assert_eq!(run("MMAGMA_TREE_BUDGET", "lots", &["exp", "coeffs", "--degree", "2"]), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [&["exp", "coeffs", "--degree", "7"][..], &["omega", "--max", "25", "--factor"]] {
        assert_eq!(stdout(args), stdout(args));
    }
}
