use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use powersums::faulhaber::PolynomialJson;
use powersums::{power_sum_naive, BernoulliCache, BigInt};

fn powersums(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powersums"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bernoulli_json_parses() {
    let o = powersums(&[
        "--cache",
        "none",
        "bernoulli",
        "--max",
        "12",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 13);
    assert_eq!(rows[12]["value"], "-691/2730");
    assert_eq!(rows[3]["value"], "0/1");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--cache", "none", "bernoulli"][..],
        &["--cache", "none", "bernoulli", "--max", "-1"],
        &["--cache", "none", "faulhaber", "--range", "9..3"],
        &["--cache", "none", "sum", "10"],
        &["--cache", "none", "sum", "10", "2", "--naive", "--check"],
        &[
            "--cache",
            "none",
            "bernoulli",
            "--max",
            "3",
            "--format",
            "xml",
        ],
        &["--cache", "none", "sum", "200000000", "1", "--check"],
        &[
            "--cache", "none", "bench", "--n", "0", "--k", "1", "--iters", "1",
        ],
        &["--cache", "none", "divides", "--problem", "5", "3"],
    ] {
        let o = powersums(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sum_paths_agree() {
    let o = powersums(&["--cache", "none", "sum", "1000000", "20", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let value: BigInt = stdout(&o).trim().parse().unwrap();
    assert_eq!(
        value,
        power_sum_naive(&BigInt::from(1_000_000), 20).unwrap()
    );
}

#[test]
fn faulhaber_range_json_round_trips() {
    let o = powersums(&[
        "--cache",
        "none",
        "faulhaber",
        "--range",
        "13..15",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let polys: Vec<PolynomialJson> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        polys.iter().map(|p| p.k).collect::<Vec<_>>(),
        [Some(13), Some(14), Some(15)]
    );
    let back = serde_json::to_string(&polys).unwrap();
    assert_eq!(back, stdout(&o).trim());
}

#[test]
fn factored_latex() {
    let o = powersums(&[
        "--cache",
        "none",
        "faulhaber",
        "4",
        "--factored",
        "--format",
        "latex",
    ]);
    assert_eq!(
        stdout(&o).trim(),
        r"S_n^{4} = \frac{1}{30} n(n+1)(2n+1)(3n^{2} + 3n - 1)"
    );
}

#[test]
fn divides_json_schema() {
    let o = powersums(&[
        "--cache",
        "none",
        "divides",
        "--problem",
        "4",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 4);
    assert_eq!(v["divides"], true);
    assert_eq!(v["quotient"]["denominator"], "30");
    assert_eq!(v["quotient"]["coeffs"], serde_json::json!(["3", "3", "-1"]));
    assert_eq!(v["remainder"]["coeffs"], serde_json::json!([]));
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("bernoulli.cache");
    let p = path.to_str().unwrap();
    let o = powersums(&["--cache", p, "bernoulli", "--max", "20"]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().any(|l| l == "12 -691/2730"));
    let loaded = BernoulliCache::load(&path).unwrap();
    assert_eq!(loaded.len(), 21);

    let o = powersums(&["--cache", p, "bernoulli", "--max", "5"]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), text);
}

fn corrupt_cache(dir: &Path) -> String {
    let path = dir.join("bad.cache");
    let cache = BernoulliCache::new();
    cache.ensure(10);
    let mut buf = Vec::new();
    cache.write_to(&mut buf).unwrap();
    let text = String::from_utf8(buf)
        .unwrap()
        .replace("10 5/66", "10 5/67");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn corrupted_cache_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = corrupt_cache(dir.path());
    let o = powersums(&["--cache", &p, "verify", "--max-n", "10", "--max-k", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("corrupt cache"), "{err}");
}

#[test]
fn verify_trivial_and_small() {
    let o = powersums(&["--cache", "none", "verify", "--max-n", "0", "--max-k", "0"]);
    assert!(o.status.success());
    let o = powersums(&[
        "--cache", "none", "verify", "--max-n", "50", "--max-k", "12",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(
        out.contains("PASS closed form vs direct sum: 663/663"),
        "{out}"
    );
}

#[test]
fn bench_json() {
    let o = powersums(&[
        "--cache", "none", "bench", "--n", "1", "--k", "1", "--iters", "1", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values_equal"], true);
    assert_eq!(v["n"], "1");
}

#[test]
fn sweep_plain() {
    let o = powersums(&[
        "--cache",
        "none",
        "sweep",
        "--problem",
        "3",
        "--max-n",
        "10",
        "--max-k",
        "1",
    ]);
    assert!(o.status.success());
    // S_n^3 = (n(n+1)/2)^2 is never a multiple of n^2(n+1)^2
    assert_eq!(stdout(&o).trim(), "S^3: 0/10 []");
}
