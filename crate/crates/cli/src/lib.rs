//! Command-line front end: expansion, registry verification and divisor-sum tables.

pub mod checks;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;

use qtheta_core::arith::{self, conv_theorem, conv_theorems, form_theorem, form_theorems};
use qtheta_core::identities::{self, fk_cusp_series, IdentityCase, VerifyReport, FK_PRIMES};
use qtheta_core::series::render_coefficient;
use qtheta_core::{dsl, AnalyticSeries, Config, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qtheta", version, about = "Exact q-series for theta functions with characteristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand an expression as a q-series.
    Expand {
        expr: String,
        /// Exclusive bound on exponents, in q-units (e.g. 10, 21/2, 7.5).
        #[arg(long, value_parser = parse_order)]
        order: Rat,
        /// Exponent grid: exponents are multiples of 1/E.
        #[arg(long, default_value_t = 48)]
        grid: u32,
        /// Coefficient ring: the cyclotomic field of M-th roots of unity.
        #[arg(long, default_value_t = 48)]
        ring: u32,
    },
    /// Verify registry identities.
    Verify {
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long, num_args = 1..)]
        name: Vec<String>,
        /// Raise the checked order; entries never run below their default.
        #[arg(long, value_parser = parse_order)]
        order: Option<Rat>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Compare brute-force representation counts with the closed formula.
    Count {
        #[arg(long)]
        form: String,
        #[arg(long)]
        max: i64,
    },
    /// Compare a divisor convolution with its closed formula.
    Convolution {
        #[arg(long)]
        name: String,
        #[arg(long)]
        max: i64,
    },
    /// Expand the level-k cusp expression and report whether it vanishes.
    Fk {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_order, default_value = "20")]
        order: Rat,
    },
    /// Generator cross-checks and structural identities.
    Selftest,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Accepts `n`, `n/d` and decimals such as `7.5`.
pub fn parse_order(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    let r = if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ratio::new(n, d)
    } else if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) || f.len() > 12 {
            return Err(bad());
        }
        let neg = w.starts_with('-');
        let w: i64 = if w.is_empty() || w == "-" { 0 } else { w.parse().map_err(|_| bad())? };
        let den = 10i64.pow(f.len() as u32);
        let frac: i64 = f.parse().map_err(|_| bad())?;
        let v = Ratio::new(w.abs() * den + frac, den);
        if neg {
            -v
        } else {
            v
        }
    } else {
        Ratio::from_integer(s.parse().map_err(|_| bad())?)
    };
    if r <= Ratio::from_integer(0) {
        return Err(format!("order must be positive, got {r}"));
    }
    Ok(r)
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct JsonRat {
    pub num: i64,
    pub den: i64,
}

impl From<Rat> for JsonRat {
    fn from(r: Rat) -> Self {
        JsonRat {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonFailure {
    exp_num: i64,
    exp_den: i64,
    lhs: String,
    rhs: String,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    name: String,
    order: JsonRat,
    pass: bool,
    first_failure: Option<JsonFailure>,
}

impl From<&VerifyReport> for JsonReport {
    fn from(r: &VerifyReport) -> Self {
        JsonReport {
            name: r.name.clone(),
            order: r.order.into(),
            pass: r.pass,
            first_failure: r.failure.as_ref().map(|f| JsonFailure {
                exp_num: *f.exponent.numer(),
                exp_den: *f.exponent.denom(),
                lhs: f.lhs.clone(),
                rhs: f.rhs.clone(),
            }),
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonTerm {
    exp_num: i64,
    exp_den: i64,
    coefficient: String,
}

#[derive(Debug, Serialize)]
struct JsonRow {
    n: i64,
    count: i64,
    formula: i64,
    #[serde(rename = "match")]
    matches: bool,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_MISMATCH,
        message: message.into(),
    }
}

/// A finished report and whether every check in it passed.
struct Output {
    body: String,
    pass: bool,
}

/// Runs the command line against the built-in registry.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_registry(argv, identities::registry(), stdout, stderr)
}

/// Runs the command line against a caller-supplied registry.
pub fn run_with_registry<I, S>(
    argv: I,
    registry: Vec<IdentityCase>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = dispatch(&cli, &registry);
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.body),
                None => stdout.write_all(out.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write report: {e}");
                return EXIT_USAGE;
            }
            if out.pass {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, registry: &[IdentityCase]) -> Result<Output, Failure> {
    match &cli.command {
        Command::Expand {
            expr,
            order,
            grid,
            ring,
        } => expand(expr, *order, *grid, *ring, cli.format),
        Command::Verify {
            all,
            name,
            order,
            jobs,
        } => verify(registry, *all, name, *order, *jobs, cli.format),
        Command::Count { form, max } => count(form, *max, cli.format),
        Command::Convolution { name, max } => convolution(name, *max, cli.format),
        Command::Fk { k, order } => fk(*k, *order, cli.format),
        Command::Selftest => selftest(registry, cli.format),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn series_terms(s: &AnalyticSeries) -> Vec<(Rat, String)> {
    s.body()
        .terms()
        .map(|(e, c)| (e, render_coefficient(c, s.pi_power())))
        .collect()
}

fn expand(expr: &str, order: Rat, grid: u32, ring: u32, format: Format) -> Result<Output, Failure> {
    if grid == 0 || !grid.is_multiple_of(2) || ring == 0 || !ring.is_multiple_of(2) {
        return Err(usage("--grid and --ring must be even and positive"));
    }
    let cfg = Config::new(grid, ring).map_err(|e| usage(e.to_string()))?;
    let s = match dsl::evaluate(expr, &cfg, order) {
        Ok(s) => s,
        Err(e @ dsl::DslError::Syntax(_)) => return Err(usage(e.to_string())),
        Err(e) => return Err(usage(format!("cannot evaluate: {e}"))),
    };
    let terms = series_terms(&s);
    let body = match format {
        Format::Text => {
            let mut b = format!("# {expr}, exact below q^{}\n", fmt_rat(order));
            if terms.is_empty() {
                b.push_str("0\n");
            }
            for (e, c) in &terms {
                let _ = writeln!(b, "q^{}\t{}", fmt_rat(*e), c);
            }
            b
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Expansion {
                expression: String,
                order: JsonRat,
                pi_power: i32,
                terms: Vec<JsonTerm>,
            }
            json(&Expansion {
                expression: expr.to_string(),
                order: order.into(),
                pi_power: s.pi_power(),
                terms: terms
                    .iter()
                    .map(|(e, c)| JsonTerm {
                        exp_num: *e.numer(),
                        exp_den: *e.denom(),
                        coefficient: c.clone(),
                    })
                    .collect(),
            })
        }
        Format::Csv => csv_table(
            &["exp_num", "exp_den", "coefficient"],
            terms
                .iter()
                .map(|(e, c)| vec![e.numer().to_string(), e.denom().to_string(), c.clone()]),
        ),
    };
    Ok(Output { body, pass: true })
}

fn verify(
    registry: &[IdentityCase],
    all: bool,
    names: &[String],
    order: Option<Rat>,
    jobs: usize,
    format: Format,
) -> Result<Output, Failure> {
    let cases: Vec<IdentityCase> = if all {
        registry.to_vec()
    } else if names.is_empty() {
        return Err(usage("verify needs --all or --name NAME"));
    } else {
        names
            .iter()
            .map(|n| {
                registry
                    .iter()
                    .find(|c| &c.name == n)
                    .cloned()
                    .ok_or_else(|| usage(format!("unknown identity `{n}`")))
            })
            .collect::<Result<_, _>>()?
    };
    let mut reports = Vec::with_capacity(cases.len());
    for (case, r) in cases.iter().zip(checks::verify_parallel(&cases, order, jobs)) {
        reports.push(r.map_err(|e| internal(format!("{}: {e}", case.name)))?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let body = match format {
        Format::Text => {
            let mut b = String::new();
            for r in &reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let _ = write!(b, "{status} {} (below q^{})", r.name, fmt_rat(r.order));
                if let Some(f) = &r.failure {
                    let label = f.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
                    let _ = write!(
                        b,
                        ": first difference at q^{}{label}: lhs {} rhs {}",
                        fmt_rat(f.exponent),
                        f.lhs,
                        f.rhs
                    );
                }
                b.push('\n');
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            let _ = writeln!(b, "{passed}/{} passed", reports.len());
            b
        }
        Format::Json => json(&reports.iter().map(JsonReport::from).collect::<Vec<_>>()),
        Format::Csv => csv_table(
            &["name", "order_num", "order_den", "pass", "exp_num", "exp_den", "lhs", "rhs"],
            reports.iter().map(|r| {
                let (en, ed, l, rh) = match &r.failure {
                    Some(f) => (
                        f.exponent.numer().to_string(),
                        f.exponent.denom().to_string(),
                        f.lhs.clone(),
                        f.rhs.clone(),
                    ),
                    None => Default::default(),
                };
                vec![
                    r.name.clone(),
                    r.order.numer().to_string(),
                    r.order.denom().to_string(),
                    r.pass.to_string(),
                    en,
                    ed,
                    l,
                    rh,
                ]
            }),
        ),
    };
    Ok(Output { body, pass })
}

fn table(
    title: &str,
    display: &str,
    rows: Vec<JsonRow>,
    count_header: &str,
    format: Format,
) -> Output {
    let pass = rows.iter().all(|r| r.matches);
    let body = match format {
        Format::Text => {
            let mut b = format!("# {title}: {display}\n");
            let _ = writeln!(b, "{:>6} {:>12} {:>12}  match", "n", count_header, "formula");
            for r in &rows {
                let m = if r.matches { "ok" } else { "MISMATCH" };
                let _ = writeln!(b, "{:>6} {:>12} {:>12}  {m}", r.n, r.count, r.formula);
            }
            b
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                name: &'a str,
                statement: &'a str,
                pass: bool,
                rows: &'a [JsonRow],
            }
            json(&Table {
                name: title,
                statement: display,
                pass,
                rows: &rows,
            })
        }
        Format::Csv => csv_table(
            &["n", count_header, "formula", "match"],
            rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.count.to_string(),
                    r.formula.to_string(),
                    if r.matches { "ok" } else { "MISMATCH" }.to_string(),
                ]
            }),
        ),
    };
    Output { body, pass }
}

fn count(form: &str, max: i64, format: Format) -> Result<Output, Failure> {
    let f = form_theorem(form).ok_or_else(|| {
        let names: Vec<&str> = form_theorems().iter().map(|t| t.name).collect();
        usage(format!("unknown form `{form}`; available: {}", names.join(", ")))
    })?;
    if max < f.start {
        return Err(usage(format!("--max must be at least {}", f.start)));
    }
    let rows = (f.start..=max)
        .map(|n| {
            let count = arith::rep_count(&f.form, n as u64) as i64;
            let formula = (f.formula)(n);
            JsonRow {
                n,
                count,
                formula,
                matches: count == formula,
            }
        })
        .collect();
    Ok(table(f.name, f.display, rows, "count", format))
}

fn convolution(name: &str, max: i64, format: Format) -> Result<Output, Failure> {
    let t = conv_theorem(name).ok_or_else(|| {
        let names: Vec<&str> = conv_theorems().iter().map(|t| t.name).collect();
        usage(format!("unknown convolution `{name}`; available: {}", names.join(", ")))
    })?;
    if max < t.start {
        return Err(usage(format!("--max must be at least {}", t.start)));
    }
    let rows = (t.start..=max)
        .map(|n| {
            let sum = (t.sum)(n as u64);
            let formula = (t.formula)(n);
            JsonRow {
                n,
                count: sum,
                formula,
                matches: sum == formula,
            }
        })
        .collect();
    Ok(table(t.name, t.display, rows, "sum", format))
}

/// Levels where the expression is expected to vanish identically.
pub fn fk_expected_zero(k: u32) -> bool {
    k != 11
}

fn fk(k: u32, order: Rat, format: Format) -> Result<Output, Failure> {
    if !FK_PRIMES.contains(&k) {
        return Err(usage(format!(
            "--k must be one of {}",
            FK_PRIMES.map(|p| p.to_string()).join(", ")
        )));
    }
    let s = fk_cusp_series(k, order).map_err(|e| internal(e.to_string()))?;
    let vanishes = s.is_zero();
    let expected = fk_expected_zero(k);
    let pass = vanishes == expected;
    let terms = series_terms(&s);
    let verdict = match (vanishes, expected) {
        (true, true) => "vanishes, as expected".to_string(),
        (false, false) => "nonzero, as expected".to_string(),
        (true, false) => "vanishes, but a nonzero expansion was expected".to_string(),
        (false, true) => "nonzero, but it was expected to vanish".to_string(),
    };
    let body = match format {
        Format::Text => {
            let mut b = format!("# level {k}, exact below q^{}\n", fmt_rat(order));
            if terms.is_empty() {
                b.push_str("0\n");
            }
            for (e, c) in &terms {
                let _ = writeln!(b, "q^{}\t{}", fmt_rat(*e), c);
            }
            let _ = writeln!(b, "{verdict}");
            b
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Fk {
                k: u32,
                order: JsonRat,
                vanishes: bool,
                expected_vanishing: bool,
                pass: bool,
                terms: Vec<JsonTerm>,
            }
            json(&Fk {
                k,
                order: order.into(),
                vanishes,
                expected_vanishing: expected,
                pass,
                terms: terms
                    .iter()
                    .map(|(e, c)| JsonTerm {
                        exp_num: *e.numer(),
                        exp_den: *e.denom(),
                        coefficient: c.clone(),
                    })
                    .collect(),
            })
        }
        Format::Csv => csv_table(
            &["exp_num", "exp_den", "coefficient"],
            terms
                .iter()
                .map(|(e, c)| vec![e.numer().to_string(), e.denom().to_string(), c.clone()]),
        ),
    };
    Ok(Output { body, pass })
}

fn selftest(registry: &[IdentityCase], format: Format) -> Result<Output, Failure> {
    let results = checks::selftest(registry);
    let pass = results.iter().all(|c| c.pass);
    let body = match format {
        Format::Text => {
            let mut b = String::new();
            for c in &results {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(b, "{status} {}: {}", c.name, c.detail);
            }
            b
        }
        Format::Json => {
            #[derive(Serialize)]
            struct J<'a> {
                name: &'a str,
                pass: bool,
                detail: &'a str,
            }
            json(
                &results
                    .iter()
                    .map(|c| J {
                        name: &c.name,
                        pass: c.pass,
                        detail: &c.detail,
                    })
                    .collect::<Vec<_>>(),
            )
        }
        Format::Csv => csv_table(
            &["name", "pass", "detail"],
            results
                .iter()
                .map(|c| vec![c.name.clone(), c.pass.to_string(), c.detail.clone()]),
        ),
    };
    Ok(Output { body, pass })
}
