//! Command-line front end. [`run`] parses arguments and renders output without
//! touching the process, so it can be driven from tests; the binary only prints.
//!
//! Exit codes: 0 success, 2 usage or precondition error, 3 enumeration cap exceeded,
//! 4 undefined result, 5 Monte Carlo check failed.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{
    correlation_limit, degree_formula, leading_general, semicircle_moment, semicircle_quadrature,
    subleading_multi, AsymptoticsError, LimitValue, TraceVariableSpec,
};
use crate::bipoly::{BivariatePolynomial, UnivariatePolynomial};
use crate::chords::{eta_table, ChordError, EnumerationCap, VertexProfile};
use crate::mc::{cross_check, cross_check_with_retry, McError, MomentReport};
use crate::moments::{moment_by_enumeration, IndexMultiset, MomentCache};
use crate::numeric::rational_to_f64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;
pub const EXIT_MC_FAILED: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "gue-moments",
    version,
    about = "Exact GUE multi-trace moments, their large-N asymptotics, and Monte Carlo checks"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add a header row to CSV output
    #[arg(long, global = true)]
    header: bool,
    /// Largest number of chord endpoints the enumerator will accept
    #[arg(long, global = true, default_value_t = EnumerationCap::DEFAULT_POINTS)]
    cap: usize,
    /// Report the number of memoized moment polynomials on stderr
    #[arg(long, global = true)]
    cache_size: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment polynomial of Tr X^k1 ... Tr X^kn
    Moment(MomentArgs),
    /// Chord diagram counts by genus and boundary count
    Eta(EtaArgs),
    /// Leading coefficient, subleading coefficient or degree of a moment polynomial
    Asympt(AsymptArgs),
    /// Large-N correlation of two trace products
    CorrLimit(CorrLimitArgs),
    /// Monte Carlo cross-check of an exact moment
    McCheck(McCheckArgs),
    /// Semicircle average of a polynomial
    Semicircle(SemicircleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Recursion,
    Enumeration,
}

#[derive(Args, Debug, Serialize)]
struct MomentArgs {
    /// Trace exponents, comma separated
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    ks: Vec<u32>,
    /// Keep the genus variable g instead of setting it to 1
    #[arg(long)]
    gamma_form: bool,
    /// Also evaluate at matrix size N
    #[arg(long, value_name = "N")]
    eval: Option<u64>,
    #[arg(long, value_enum, default_value_t = Method::Recursion)]
    method: Method,
}

#[derive(Args, Debug, Serialize)]
struct EtaArgs {
    /// Vertex degrees, comma separated and positive
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    ks: Vec<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    Leading,
    Subleading,
    Degree,
}

#[derive(Args, Debug, Serialize)]
struct AsymptArgs {
    /// i values of the factors Tr X^{2i}
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    evens: Vec<u64>,
    /// j values of the factors Tr X^{2j+1}
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    odds: Vec<u64>,
    #[arg(long, value_enum)]
    which: Which,
}

#[derive(Args, Debug, Serialize)]
struct CorrLimitArgs {
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    f_evens: Vec<u64>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    f_odds: Vec<u64>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    g_evens: Vec<u64>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    g_odds: Vec<u64>,
}

#[derive(Args, Debug, Serialize)]
struct McCheckArgs {
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    ks: Vec<u32>,
    /// Matrix size
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Pass if |mean - exact| <= sigma * standard error
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,
    /// Second seed to try once if the first run fails
    #[arg(long)]
    retry_seed: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Quadrature,
    Both,
}

#[derive(Args, Debug, Serialize)]
struct SemicircleArgs {
    /// Coefficients in increasing degree; integers or fractions like 1/2
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        num_args = 1,
        allow_hyphen_values = true
    )]
    poly: Vec<String>,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// The JSON document printed with `--format json`.
///
/// Integers that may exceed 64 bits appear as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub version: String,
}

impl OutputEnvelope {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

/// What a command printed and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// A rendered result: the text form, CSV header and rows, and the JSON payload.
struct Rendered {
    text: String,
    csv_header: &'static str,
    csv_rows: Vec<String>,
    json: Value,
    code: i32,
}

impl Rendered {
    fn ok(text: String, csv_header: &'static str, csv_rows: Vec<String>, json: Value) -> Self {
        Rendered {
            text,
            csv_header,
            csv_rows,
            json,
            code: EXIT_OK,
        }
    }
}

struct Context {
    cap: EnumerationCap,
    cache: MomentCache,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                Outcome::failure(EXIT_USAGE, text)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let ctx = Context {
        cap: EnumerationCap::new(cli.cap),
        cache: MomentCache::new(),
    };
    let (name, inputs, rendered) = match &cli.command {
        Command::Moment(a) => ("moment", to_value(a), moment(a, &ctx)),
        Command::Eta(a) => ("eta", to_value(a), eta(a, &ctx)),
        Command::Asympt(a) => ("asympt", to_value(a), asympt(a)),
        Command::CorrLimit(a) => ("corr-limit", to_value(a), corr_limit(a)),
        Command::McCheck(a) => ("mc-check", to_value(a), mc_check(a, &ctx)),
        Command::Semicircle(a) => ("semicircle", to_value(a), semicircle(a)),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(outcome) => return outcome,
    };
    let stdout = match cli.format {
        Format::Text => with_newline(rendered.text),
        Format::Csv => {
            let mut out = String::new();
            if cli.header {
                writeln!(out, "{}", rendered.csv_header).unwrap();
            }
            for row in &rendered.csv_rows {
                writeln!(out, "{row}").unwrap();
            }
            out
        }
        Format::Json => {
            let mut inputs = inputs;
            inputs["cap"] = json!(cli.cap);
            let envelope = OutputEnvelope {
                command: name.to_string(),
                inputs,
                result: rendered.json,
                version: env!("CARGO_PKG_VERSION").to_string(),
            };
            with_newline(envelope.render())
        }
    };
    let mut stderr = String::new();
    if rendered.code == EXIT_UNDEFINED {
        writeln!(
            stderr,
            "undefined: one of the variances vanishes identically"
        )
        .unwrap();
    }
    if cli.cache_size {
        writeln!(stderr, "cache entries: {}", ctx.cache.len()).unwrap();
    }
    Outcome {
        code: rendered.code,
        stdout,
        stderr,
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn to_value<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

type CmdResult = Result<Rendered, Outcome>;

fn chord_failure(err: ChordError) -> Outcome {
    match err {
        ChordError::CapExceeded { .. } => Outcome::failure(EXIT_CAP, err.to_string()),
        other => Outcome::failure(EXIT_USAGE, other.to_string()),
    }
}

fn asymptotics_failure(err: AsymptoticsError) -> Outcome {
    Outcome::failure(EXIT_USAGE, err.to_string())
}

fn mc_failure(err: McError) -> Outcome {
    Outcome::failure(EXIT_USAGE, err.to_string())
}

fn moment(a: &MomentArgs, ctx: &Context) -> CmdResult {
    let ks = IndexMultiset::new(a.ks.iter().copied());
    let poly: BivariatePolynomial = match a.method {
        Method::Recursion => ctx.cache.moment(&ks).as_ref().clone(),
        Method::Enumeration => moment_by_enumeration(&ks, ctx.cap).map_err(chord_failure)?,
    };
    let nu: UnivariatePolynomial = poly.set_gamma_one();
    let value = a.eval.map(|n| nu.eval_at(n));

    let (shown, terms_json, csv_header, csv_rows) = if a.gamma_form {
        let rows = poly
            .ordered_terms()
            .into_iter()
            .map(|((g, v), c)| format!("{g},{v},{c}"))
            .collect();
        (poly.to_string(), to_value(&poly), "g,v,c", rows)
    } else {
        let rows = nu
            .coeffs()
            .iter()
            .rev()
            .map(|(v, c)| format!("{v},{c}"))
            .collect();
        (nu.to_string(), to_value(&nu), "v,c", rows)
    };
    let mut text = shown.clone();
    let mut json = json!({
        "ks": ks.ks(),
        "form": if a.gamma_form { "gamma" } else { "nu" },
        "polynomial": shown,
        "terms": terms_json,
    });
    if let (Some(n), Some(value)) = (a.eval, &value) {
        write!(text, "\nat N={n}: {value}").unwrap();
        json["n"] = json!(n);
        json["value"] = json!(value.to_string());
    }
    Ok(Rendered::ok(text, csv_header, csv_rows, json))
}

fn eta(a: &EtaArgs, ctx: &Context) -> CmdResult {
    let total_points: u64 = a.ks.iter().map(|&k| k as u64).sum();
    let rows: Vec<(usize, usize, u64)> = if !total_points.is_multiple_of(2) {
        Vec::new()
    } else {
        let profile = VertexProfile::new(a.ks.iter().map(|&k| k as usize).collect())
            .map_err(chord_failure)?;
        let table = eta_table(&profile, ctx.cap).map_err(chord_failure)?;
        table
            .counts()
            .iter()
            .map(|(&(g, b), &c)| (g, b, c))
            .collect()
    };
    let total: u64 = rows.iter().map(|r| r.2).sum();
    let mut csv_rows: Vec<String> = rows
        .iter()
        .map(|(g, b, c)| format!("{g},{b},{c}"))
        .collect();
    csv_rows.push(format!("total,,{total}"));
    let json = json!({
        "rows": rows
            .iter()
            .map(|(g, b, c)| json!({"g": g, "b": b, "count": c.to_string()}))
            .collect::<Vec<_>>(),
        "total": total.to_string(),
    });
    Ok(Rendered::ok(
        csv_rows.join("\n"),
        "g,b,count",
        csv_rows,
        json,
    ))
}

fn asympt(a: &AsymptArgs) -> CmdResult {
    let spec = TraceVariableSpec::new(a.evens.clone(), a.odds.clone());
    let value = match a.which {
        Which::Leading => leading_general(spec.evens(), spec.odds())
            .map_err(asymptotics_failure)?
            .to_string(),
        Which::Subleading => {
            if !spec.odds().is_empty() {
                return Err(Outcome::failure(
                    EXIT_USAGE,
                    "the subleading coefficient is available for even traces only; drop --odds",
                ));
            }
            subleading_multi(spec.evens()).to_string()
        }
        Which::Degree => degree_formula(&spec.to_multiset())
            .map_err(asymptotics_failure)?
            .to_string(),
    };
    let which = to_value(&a.which);
    let json = json!({"which": which, "ks": spec.to_multiset().ks(), "value": value});
    let which_name = which.as_str().unwrap_or_default().to_string();
    Ok(Rendered::ok(
        value.clone(),
        "which,value",
        vec![format!("{which_name},{value}")],
        json,
    ))
}

fn corr_limit(a: &CorrLimitArgs) -> CmdResult {
    let f = TraceVariableSpec::new(a.f_evens.clone(), a.f_odds.clone());
    let g = TraceVariableSpec::new(a.g_evens.clone(), a.g_odds.clone());
    let limit = correlation_limit(&f, &g).map_err(asymptotics_failure)?;
    let case = limit.case.number();
    match &limit.value {
        LimitValue::Exact(v) => {
            let approx = v.approx();
            let text = format!("exact: {v}\napprox: {approx}\ncase: {case}");
            let json = json!({
                "case": case,
                "exact": v.to_string(),
                "approx": approx,
                "signed_square": v.signed_square().to_string(),
            });
            Ok(Rendered::ok(
                text,
                "case,exact,approx",
                vec![format!("{case},{v},{approx}")],
                json,
            ))
        }
        LimitValue::Undefined => {
            let json = json!({"case": case, "exact": "undefined", "approx": null});
            Ok(Rendered {
                text: format!("exact: undefined\ncase: {case}"),
                csv_header: "case,exact,approx",
                csv_rows: vec![format!("{case},undefined,")],
                json,
                code: EXIT_UNDEFINED,
            })
        }
    }
}

fn report_json(r: &MomentReport) -> Value {
    json!({
        "ks": r.ks.ks(),
        "n": r.n,
        "exact": r.exact.to_string(),
        "mean": r.estimate.mean,
        "std_error": r.estimate.std_error,
        "deviation": r.deviation(),
        "samples": r.estimate.samples,
        "seed": r.estimate.seed,
        "sigma": r.sigma_bound,
        "passed": r.passed,
    })
}

fn report_csv(r: &MomentReport) -> String {
    let ks: Vec<String> = r.ks.ks().iter().map(|k| k.to_string()).collect();
    format!(
        "\"{}\",{},{},{},{},{},{},{},{}",
        ks.join(","),
        r.n,
        r.exact,
        r.estimate.mean,
        r.estimate.std_error,
        r.estimate.samples,
        r.estimate.seed,
        r.sigma_bound,
        if r.passed { "pass" } else { "fail" }
    )
}

fn mc_check(a: &McCheckArgs, ctx: &Context) -> CmdResult {
    let ks = IndexMultiset::new(a.ks.iter().copied());
    let reports: Vec<MomentReport> = match a.retry_seed {
        None => vec![
            cross_check(&ks, a.n, a.samples, a.seed, a.sigma, &ctx.cache).map_err(mc_failure)?,
        ],
        Some(second) => {
            let check =
                cross_check_with_retry(&ks, a.n, a.samples, [a.seed, second], a.sigma, &ctx.cache)
                    .map_err(mc_failure)?;
            std::iter::once(check.first).chain(check.retry).collect()
        }
    };
    let passed = reports.iter().any(|r| r.passed);
    let text = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("\n\n");
    let json = json!({
        "passed": passed,
        "attempts": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    Ok(Rendered {
        text,
        csv_header: "ks,n,exact,mean,std_error,samples,seed,sigma,result",
        csv_rows: reports.iter().map(report_csv).collect(),
        json,
        code: if passed { EXIT_OK } else { EXIT_MC_FAILED },
    })
}

fn semicircle(a: &SemicircleArgs) -> CmdResult {
    let coeffs: Vec<BigRational> = a
        .poly
        .iter()
        .map(|c| {
            c.trim()
                .parse::<BigRational>()
                .map_err(|_| Outcome::failure(EXIT_USAGE, format!("bad coefficient {c:?}")))
        })
        .collect::<Result<_, _>>()?;
    let mut text = Vec::new();
    let mut json = json!({"mode": to_value(&a.mode)});
    let mut exact_cell = String::new();
    let mut quad_cell = String::new();
    if a.mode != Mode::Quadrature {
        let exact = semicircle_moment(&coeffs);
        text.push(format!("exact: {exact}"));
        json["exact"] = json!(exact.to_string());
        exact_cell = exact.to_string();
    }
    if a.mode != Mode::Exact {
        let floats: Vec<f64> = coeffs.iter().map(rational_to_f64).collect();
        let value = semicircle_quadrature(&floats, a.tol).map_err(asymptotics_failure)?;
        text.push(format!("quadrature: {value:.10}"));
        json["quadrature"] = json!(value);
        json["tolerance"] = json!(a.tol);
        quad_cell = format!("{value:.10}");
    }
    Ok(Rendered::ok(
        text.join("\n"),
        "exact,quadrature",
        vec![format!("{exact_cell},{quad_cell}")],
        json,
    ))
}
