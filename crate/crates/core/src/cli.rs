//! Command-line front end. `main.rs` only parses arguments and maps the
//! outcome of [`run`] to an exit code.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::analysis::{
    check_problem2, check_problem3, check_problem4, divisor_problem2, divisor_problem3,
    divisor_problem4, factored_form, value_divisibility, DivisibilityReport,
};
use crate::bernoulli::{bernoulli_range, recurrence_residual, BernoulliCache};
use crate::error::Error;
use crate::faulhaber::{
    faulhaber_poly, note_form, power_sum_closed, power_sum_naive, telescope_residual, theorem_form,
    verify_power_sums, PolynomialJson,
};
use crate::render::{self, Style};
use crate::RationalPolynomial;

/// Above this, summing term by term needs `--force`.
pub const NAIVE_LIMIT: u64 = 100_000_000;

/// Points `n = 1..=ORACLE_POINTS` at which emitted polynomials are checked.
pub const ORACLE_POINTS: u64 = 50;

#[derive(Debug, Parser)]
#[command(
    name = "powersums",
    version,
    about = "Exact Bernoulli numbers and sums of powers"
)]
pub struct RunConfig {
    /// Bernoulli cache file; `none` disables persistence.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Latex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print B_0 ..= B_max.
    Bernoulli {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print the closed form of S_n^k for one k or an inclusive range `A..B`.
    Faulhaber {
        #[arg(required_unless_present = "range", conflicts_with = "range")]
        k: Option<u32>,
        #[arg(long, value_parser = parse_range)]
        range: Option<(u32, u32)>,
        #[arg(long)]
        factored: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Compute S_n^k exactly.
    Sum {
        #[arg(value_parser = parse_nonnegative)]
        n: BigInt,
        k: u32,
        #[arg(long, group = "path")]
        naive: bool,
        #[arg(long, group = "path")]
        closed: bool,
        /// Run both paths and require equal results.
        #[arg(long, group = "path")]
        check: bool,
        /// Allow term-by-term summation for n above 10^8.
        #[arg(long)]
        force: bool,
    },
    /// Check every identity on a grid of (n, k).
    Verify {
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_k: u32,
    },
    /// Time the closed form against term-by-term summation.
    Bench {
        #[arg(long, value_parser = parse_nonnegative)]
        n: BigInt,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        iters: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Divide S^k by n(n+1) (problem 2), n^2(n+1)^2 (3) or n(n+1)(2n+1) (4).
    ///
    /// For problem 3 the power sum is S^(2k+1), for problem 4 it is S^(2k).
    Divides {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        problem: u8,
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Tabulate the (n, k) for which the divisor's value divides S_n^k.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        problem: u8,
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_k: u32,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u32 = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: u32 = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_nonnegative(s: &str) -> Result<BigInt, String> {
    let n: BigInt = s.parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if n.is_negative() {
        return Err(format!("must be nonnegative, got {n}"));
    }
    Ok(n)
}

/// Why a command did not succeed.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    /// A verification or equality check failed.
    #[error("{0}")]
    Check(String),
    #[error(transparent)]
    Error(#[from] Error),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn default_cache_path() -> Option<PathBuf> {
    dirs::config_dir().map(|d| d.join("powersums").join("bernoulli.cache"))
}

fn cache_path(flag: Option<&str>) -> Option<PathBuf> {
    match flag {
        Some("none") => None,
        Some(p) => Some(PathBuf::from(p)),
        None => default_cache_path(),
    }
}

/// Runs one command, writing its output to `out`.
///
/// The Bernoulli cache is loaded first and saved afterwards if it grew.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let path = cache_path(config.cache.as_deref());
    let cache = match &path {
        Some(p) => BernoulliCache::load_or_new(p)?,
        None => BernoulliCache::new(),
    };
    let before = cache.len();
    let result = dispatch(&config.command, &cache, out);
    if let Some(p) = path.filter(|_| cache.len() > before) {
        if let Err(e) = cache.save(&p) {
            eprintln!("warning: could not save cache to {}: {e}", p.display());
        }
    }
    result
}

fn dispatch(command: &Command, cache: &BernoulliCache, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Bernoulli { max, format } => cmd_bernoulli(*max, *format, cache, out),
        Command::Faulhaber {
            k,
            range,
            factored,
            format,
        } => {
            let (lo, hi) = range.unwrap_or_else(|| {
                let k = k.expect("clap requires k or --range");
                (k, k)
            });
            cmd_faulhaber(lo..=hi, range.is_some(), *factored, *format, cache, out)
        }
        Command::Sum {
            n,
            k,
            naive,
            check,
            force,
            ..
        } => {
            let mode = match (naive, check) {
                (true, _) => SumMode::Naive,
                (_, true) => SumMode::Check,
                _ => SumMode::Closed,
            };
            cmd_sum(n, *k, mode, *force, cache, out)
        }
        Command::Verify { max_n, max_k } => cmd_verify(*max_n, *max_k, cache, out),
        Command::Bench {
            n,
            k,
            iters,
            format,
        } => cmd_bench(n, *k, *iters, *format, cache, out),
        Command::Divides { problem, k, format } => cmd_divides(*problem, *k, *format, cache, out),
        Command::Sweep {
            problem,
            max_n,
            max_k,
            format,
        } => cmd_sweep(*problem, *max_n, *max_k, *format, cache, out),
    }
}

fn style_of(format: Format) -> Style {
    match format {
        Format::Latex => Style::Latex,
        _ => Style::Plain,
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct BernoulliEntry {
    n: usize,
    value: crate::ExactRational,
}

pub fn cmd_bernoulli(
    max: usize,
    format: Format,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let values = bernoulli_range(max, cache);
    if format == Format::Json {
        let entries: Vec<_> = values
            .into_iter()
            .enumerate()
            .map(|(n, value)| BernoulliEntry { n, value })
            .collect();
        return write_json(out, &entries);
    }
    for (n, b) in values.iter().enumerate() {
        writeln!(out, "{}", render::bernoulli_line(n, b, style_of(format)))?;
    }
    Ok(())
}

/// Checks `p(n) = 1^k + ... + n^k` for `n = 1..=points`.
pub fn check_against_oracle(k: u32, p: &RationalPolynomial, points: u64) -> Result<(), Failure> {
    for n in 1..=points {
        let n = BigInt::from(n);
        let value = crate::poly_eval(p, &n);
        let oracle = power_sum_naive(&n, k)?;
        if value != crate::ExactRational::from(oracle.clone()) {
            return Err(Failure::Check(format!(
                "S_n^{k} disagrees with direct summation at n = {n}: {value} vs {oracle}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum SumJson {
    Expanded(PolynomialJson),
    Factored(crate::analysis::FactoredFormJson),
}

pub fn cmd_faulhaber(
    ks: std::ops::RangeInclusive<u32>,
    as_list: bool,
    factored: bool,
    format: Format,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mut json = Vec::new();
    for k in ks {
        let p = faulhaber_poly(k, cache);
        check_against_oracle(k, &p, ORACLE_POINTS)?;
        match (format, factored) {
            (Format::Json, false) => {
                json.push(SumJson::Expanded(PolynomialJson::from_poly(&p, Some(k))))
            }
            (Format::Json, true) => json.push(SumJson::Factored(factored_form(k, cache).to_json())),
            (_, false) => writeln!(out, "{}", render::expanded_sum(k, &p, style_of(format)))?,
            (_, true) => writeln!(
                out,
                "{}",
                render::factored_sum(&factored_form(k, cache), style_of(format))
            )?,
        }
    }
    if format == Format::Json {
        if as_list {
            write_json(out, &json)?;
        } else {
            write_json(out, &json[0])?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Closed,
    Naive,
    Check,
}

pub fn cmd_sum(
    n: &BigInt,
    k: u32,
    mode: SumMode,
    force: bool,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if mode != SumMode::Closed && !force && *n > BigInt::from(NAIVE_LIMIT) {
        return Err(Failure::Usage(format!(
            "n = {n} is above 10^8; term-by-term summation needs --force"
        )));
    }
    match mode {
        SumMode::Closed => writeln!(out, "{}", power_sum_closed(n, k, cache)?)?,
        SumMode::Naive => writeln!(out, "{}", power_sum_naive(n, k)?)?,
        SumMode::Check => {
            let closed = power_sum_closed(n, k, cache)?;
            let naive = power_sum_naive(n, k)?;
            if closed != naive {
                return Err(Failure::Check(format!(
                    "mismatch for S_{n}^{k}: closed form {closed}, direct sum {naive}"
                )));
            }
            writeln!(out, "{closed}")?;
        }
    }
    Ok(())
}

/// Pass/fail tally for one family of checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            passed: 0,
            total: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Every identity the library relies on, up to the given bounds.
///
/// Bernoulli checks run through index `max_k + 1`, which is as far as the
/// power-sum grid reaches.
pub fn verify_all(
    max_n: u64,
    max_k: u32,
    cache: &BernoulliCache,
) -> Result<Vec<SuiteResult>, Error> {
    let mut suites = Vec::new();

    let mut grid = SuiteResult::new("closed form vs direct sum");
    for row in verify_power_sums(max_n, max_k, cache)? {
        grid.record(row.matches, || {
            format!(
                "n = {}, k = {}: closed {} vs direct {}",
                row.n, row.k, row.closed_value, row.oracle_value
            )
        });
    }
    suites.push(grid);

    let top = max_k as usize + 1;
    let mut rec = SuiteResult::new("recurrence residual");
    for n in 1..=top {
        let r = recurrence_residual(n, cache)?;
        rec.record(r.is_zero(), || format!("n = {n}: residual {r}"));
    }
    suites.push(rec);

    let mut odd = SuiteResult::new("odd Bernoulli numbers vanish");
    for n in (3..=top).step_by(2) {
        let b = cache.get(n);
        odd.record(b.is_zero(), || format!("B_{n} = {b}"));
    }
    suites.push(odd);

    let mut tele = SuiteResult::new("telescoping identity");
    let mut forms = SuiteResult::new("theorem form = note form");
    for k in 0..=max_k {
        let t = telescope_residual(k, cache);
        tele.record(t.is_zero(), || format!("k = {k}: residual {t:?}"));
        let same = theorem_form(k, cache) == note_form(k, cache);
        forms.record(same, || format!("k = {k}"));
    }
    suites.push(tele);
    suites.push(forms);

    type Check = fn(u32, &BernoulliCache) -> crate::Result<DivisibilityReport>;
    let problems: [(&'static str, Check, u32); 3] = [
        ("n(n+1) | S^k", check_problem2, max_k),
        (
            "n^2(n+1)^2 | S^(2k+1)",
            check_problem3,
            max_k.saturating_sub(1) / 2,
        ),
        ("n(n+1)(2n+1) | S^(2k)", check_problem4, max_k / 2),
    ];
    for (name, check, upto) in problems {
        let mut suite = SuiteResult::new(name);
        for k in 1..=upto {
            let r = check(k, cache)?;
            let back = &(&r.divisor * &r.quotient) + &r.remainder;
            let ok = r.divides && back == faulhaber_poly(r.k, cache);
            suite.record(ok, || format!("k = {}: remainder {:?}", r.k, r.remainder));
        }
        suites.push(suite);
    }
    Ok(suites)
}

pub fn cmd_verify(
    max_n: u64,
    max_k: u32,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let suites = verify_all(max_n, max_k, cache)?;
    let mut first = None;
    for s in &suites {
        let status = if s.ok() { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}/{}", s.name, s.passed, s.total)?;
        if first.is_none() {
            first = s.first_failure.as_ref().map(|f| format!("{}: {f}", s.name));
        }
    }
    let passed: usize = suites.iter().map(|s| s.passed).sum();
    let total: usize = suites.iter().map(|s| s.total).sum();
    writeln!(out, "total: {passed}/{total}")?;
    match first {
        Some(f) => Err(Failure::Check(format!("first failure: {f}"))),
        None => Ok(()),
    }
}

/// Median wall time of both strategies for one `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchResult {
    pub n: BigInt,
    pub k: u32,
    pub closed_time: Duration,
    pub naive_time: Duration,
    pub values_equal: bool,
}

impl BenchResult {
    pub fn speedup(&self) -> f64 {
        self.naive_time.as_secs_f64() / self.closed_time.as_secs_f64().max(1e-12)
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

/// Times `iters` runs of each path and compares the values they return.
///
/// The cache is warmed before timing, so the closed path measures building
/// `P` from stored Bernoulli numbers plus one evaluation.
pub fn run_bench(
    n: &BigInt,
    k: u32,
    iters: usize,
    cache: &BernoulliCache,
) -> Result<BenchResult, Failure> {
    if n.is_zero() {
        return Err(Failure::Usage("bench needs n >= 1".into()));
    }
    if iters == 0 {
        return Err(Failure::Usage("bench needs --iters >= 1".into()));
    }
    cache.ensure(k as usize);
    let mut closed_times = Vec::with_capacity(iters);
    let mut naive_times = Vec::with_capacity(iters);
    let mut values_equal = true;
    for _ in 0..iters {
        let t = Instant::now();
        let closed = power_sum_closed(n, k, cache)?;
        closed_times.push(t.elapsed());
        let t = Instant::now();
        let naive = power_sum_naive(n, k)?;
        naive_times.push(t.elapsed());
        values_equal &= closed == naive;
    }
    Ok(BenchResult {
        n: n.clone(),
        k,
        closed_time: median(closed_times),
        naive_time: median(naive_times),
        values_equal,
    })
}

pub fn cmd_bench(
    n: &BigInt,
    k: u32,
    iters: usize,
    format: Format,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let r = run_bench(n, k, iters, cache)?;
    if !r.values_equal {
        return Err(Failure::Check(format!(
            "closed form and direct sum disagree for S_{n}^{k}"
        )));
    }
    if format == Format::Json {
        return write_json(
            out,
            &serde_json::json!({
                "n": r.n.to_string(),
                "k": r.k,
                "iters": iters,
                "closed_ns": r.closed_time.as_nanos() as u64,
                "naive_ns": r.naive_time.as_nanos() as u64,
                "speedup": r.speedup(),
                "values_equal": r.values_equal,
            }),
        );
    }
    writeln!(
        out,
        "{:<12} {:>4} {:>14} {:>14} {:>12}  equal",
        "n", "k", "closed", "naive", "speedup"
    )?;
    writeln!(
        out,
        "{:<12} {:>4} {:>14} {:>14} {:>11.1}x  {}",
        r.n.to_string(),
        r.k,
        format!("{:.2?}", r.closed_time),
        format!("{:.2?}", r.naive_time),
        r.speedup(),
        r.values_equal
    )?;
    Ok(())
}

fn problem_report(
    problem: u8,
    k: u32,
    cache: &BernoulliCache,
) -> crate::Result<DivisibilityReport> {
    match problem {
        2 => check_problem2(k, cache),
        3 => check_problem3(k, cache),
        4 => check_problem4(k, cache),
        p => Err(Error::Domain(format!("no divisibility problem {p}"))),
    }
}

pub fn cmd_divides(
    problem: u8,
    k: u32,
    format: Format,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let r = problem_report(problem, k, cache).map_err(|e| match e {
        Error::Domain(msg) => Failure::Usage(msg),
        e => e.into(),
    })?;
    if format == Format::Json {
        return write_json(out, &r.to_json());
    }
    let style = style_of(format);
    writeln!(out, "k: {}", r.k)?;
    writeln!(out, "divisor: {}", render::expanded_poly(&r.divisor, style))?;
    writeln!(out, "divides: {}", r.divides)?;
    writeln!(
        out,
        "quotient: {}",
        render::expanded_poly(&r.quotient, style)
    )?;
    writeln!(
        out,
        "remainder: {}",
        render::expanded_poly(&r.remainder, style)
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    k: u32,
    n: Vec<u64>,
}

pub fn cmd_sweep(
    problem: u8,
    max_n: u64,
    max_k: u32,
    format: Format,
    cache: &BernoulliCache,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let (divisor, exponent): (RationalPolynomial, fn(u32) -> u32) = match problem {
        2 => (divisor_problem2(), |k| k),
        3 => (divisor_problem3(), |k| 2 * k + 1),
        4 => (divisor_problem4(), |k| 2 * k),
        p => return Err(Failure::Usage(format!("no divisibility problem {p}"))),
    };
    let mut rows = Vec::new();
    for k in 1..=max_k {
        let e = exponent(k);
        let mut hits = Vec::new();
        for n in 1..=max_n {
            if value_divisibility(&BigInt::from(n), e, &divisor, cache)? {
                hits.push(n);
            }
        }
        rows.push(SweepRow { k: e, n: hits });
    }
    if format == Format::Json {
        return write_json(out, &rows);
    }
    for row in rows {
        let list: Vec<String> = row.n.iter().map(u64::to_string).collect();
        writeln!(
            out,
            "S^{}: {}/{} [{}]",
            row.k,
            row.n.len(),
            max_n,
            list.join(", ")
        )?;
    }
    Ok(())
}
