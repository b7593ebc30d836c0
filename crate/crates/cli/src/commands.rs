use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::json;

use machin::machin::json::{formula_to_json, load_formula, save_formula, FormulaDoc, SidecarPolicy};
use machin::machin::{
    compute_pi_formula, lehmer_estimate_two_term, lehmer_measure, reference_pi, verify_formula,
    MachinFormula, TwoTermFormula,
};
use machin::numerics::{ArctanSeries, PrecisionContext};
use machin::quad_pi::{correct_digits, quad_trace_at};
use machin::radicals::u1_radical;
use machin::u1_solver::u1_surdless;

use crate::{BenchSeries, Builtin, CliConfig, Failure, Method, OutputFormat, SeriesArg};

type CmdResult = Result<u8, Failure>;

fn context(cfg: &CliConfig) -> Result<PrecisionContext, Failure> {
    Ok(PrecisionContext::with_guard(cfg.precision_digits, cfg.guard)?)
}

/// Writes `text` plus a newline to `--out` or stdout.
fn emit(cfg: &CliConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out_path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::from(machin::Error::Io(format!("{}: {e}", p.display())))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn series_of(s: SeriesArg) -> ArctanSeries {
    match s {
        SeriesArg::Maclaurin => ArctanSeries::Maclaurin,
        SeriesArg::Euler => ArctanSeries::Euler,
        SeriesArg::Gh => ArctanSeries::Gh,
    }
}

fn builtin_formula(b: Builtin) -> MachinFormula {
    match b {
        Builtin::Machin => MachinFormula::machin(),
        Builtin::Kanada1 => MachinFormula::kanada1(),
        Builtin::Kanada2 => MachinFormula::kanada2(),
    }
}

fn require_iter_k(k: u32) -> Result<(), Failure> {
    if k < 2 {
        return Err(Failure::usage("the iterative method needs k >= 2"));
    }
    Ok(())
}

fn two_term(cfg: &CliConfig, k: u32, force: bool) -> Result<TwoTermFormula, Failure> {
    require_iter_k(k)?;
    let u1 = u1_surdless(k, &context(cfg)?)?;
    Ok(TwoTermFormula::from_u1(k, u1, force)?)
}

pub fn u1(cfg: &CliConfig, k: u32, method: Method) -> CmdResult {
    let ctx = context(cfg)?;
    let iter = || -> Result<BigInt, Failure> {
        require_iter_k(k)?;
        Ok(u1_surdless(k, &ctx)?)
    };
    let radical = || -> Result<BigInt, Failure> { Ok(u1_radical(k, &ctx)?) };
    let (text, value, code) = match method {
        Method::Iter => {
            let u = iter()?;
            (u.to_string(), json!({"k": k, "u1": u.to_string()}), 0)
        }
        Method::Radical => {
            let u = radical()?;
            (u.to_string(), json!({"k": k, "u1": u.to_string()}), 0)
        }
        Method::Both => {
            let (a, b) = (iter()?, radical()?);
            let agree = a == b;
            let verdict = if agree { "MATCH" } else { "MISMATCH" };
            (
                format!("{a} {b} {verdict}"),
                json!({"k": k, "iter": a.to_string(), "radical": b.to_string(), "match": agree}),
                if agree { 0 } else { 1 },
            )
        }
    };
    match cfg.output_format {
        OutputFormat::Text => emit(cfg, &text)?,
        OutputFormat::Json => emit(cfg, &value.to_string())?,
    }
    Ok(code)
}

pub fn formula(cfg: &CliConfig, k: u32, force: bool, sidecar_threshold: usize) -> CmdResult {
    let doc = FormulaDoc::TwoTerm(two_term(cfg, k, force)?);
    match &cfg.out_path {
        Some(p) => save_formula(p, &doc, sidecar_threshold)?,
        None => {
            let policy = SidecarPolicy {
                threshold_digits: sidecar_threshold,
                ..SidecarPolicy::default()
            };
            println!("{}", formula_to_json(&doc, &policy)?);
        }
    }
    Ok(0)
}

fn formula_source(path: Option<PathBuf>, builtin: Option<Builtin>) -> Result<MachinFormula, Failure> {
    match (path, builtin) {
        (Some(p), _) => Ok(load_formula(&p)?.to_machin()),
        (None, Some(b)) => Ok(builtin_formula(b)),
        (None, None) => Err(Failure::usage("give --formula or --builtin")),
    }
}

pub fn verify(cfg: &CliConfig, path: Option<PathBuf>, builtin: Option<Builtin>) -> CmdResult {
    let f = formula_source(path, builtin)?;
    let valid = verify_formula(&f);
    match cfg.output_format {
        OutputFormat::Text => emit(cfg, if valid { "VALID" } else { "INVALID" })?,
        OutputFormat::Json => emit(cfg, &json!({ "valid": valid }).to_string())?,
    }
    Ok(if valid { 0 } else { 1 })
}

pub fn pi(
    cfg: &CliConfig,
    digits: Option<u32>,
    k: Option<u32>,
    path: Option<PathBuf>,
    series: SeriesArg,
) -> CmdResult {
    let digits = digits.ok_or_else(|| Failure::usage("--digits is required"))?;
    let f = match (k, path) {
        (Some(k), _) => two_term(cfg, k, false)?.to_machin(),
        (None, Some(p)) => load_formula(&p)?.to_machin(),
        (None, None) => return Err(Failure::usage("give --k or --formula")),
    };
    let s = compute_pi_formula(&f, digits, series_of(series))?;
    match cfg.output_format {
        OutputFormat::Text => emit(cfg, &s)?,
        OutputFormat::Json => emit(cfg, &json!({"digits": digits, "pi": s}).to_string())?,
    }
    Ok(0)
}

/// Per-iteration table (step, correct digits, 25-digit estimate) followed
/// by the last estimate truncated to `digits` decimals.
pub fn pi_quad(cfg: &CliConfig, k: Option<u32>, iters: Option<u32>, digits: Option<u32>) -> CmdResult {
    let k = k.ok_or_else(|| Failure::usage("--quad needs --k"))?;
    let iters = iters.ok_or_else(|| Failure::usage("--quad needs --iters"))?;
    if iters == 0 || iters > 24 {
        return Err(Failure::usage("--iters must be in 1..=24"));
    }
    // fixed precision covering the last step, so the shown iterates are
    // those of the exact map
    let needed = (1u32 << (iters + 1)) + 10;
    let work = needed.max(cfg.precision_digits).max(digits.unwrap_or(0) + 10).max(40);
    let ctx = PrecisionContext::with_guard(work, cfg.guard.max(10))?;
    let trace = quad_trace_at(k, iters, &ctx)?;
    let reference = reference_pi(&ctx.extended(20))?;
    let mut rows = Vec::with_capacity(trace.len());
    for (i, est) in trace.iter().enumerate() {
        rows.push((i + 1, correct_digits(est, &reference)?, est.to_decimal_string(24)));
    }
    let (_, last_digits, _) = rows[rows.len() - 1].clone();
    let last = &trace[trace.len() - 1];
    let final_digits = match digits {
        Some(d) => {
            if u64::from(d) > last_digits {
                return Err(Failure::from(machin::Error::PrecisionExhausted(format!(
                    "{iters} iterations give {last_digits} correct digits, {d} requested"
                ))));
            }
            d
        }
        None => last_digits as u32,
    };
    let value = last.truncated_decimal(final_digits);
    match cfg.output_format {
        OutputFormat::Text => {
            let mut out = String::from("n digits estimate\n");
            for (n, d, e) in &rows {
                out.push_str(&format!("{n} {d} {e}\n"));
            }
            out.push_str(&value);
            emit(cfg, &out)?;
        }
        OutputFormat::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(n, d, e)| json!({"n": n, "digits": d, "estimate": e}))
                .collect();
            emit(cfg, &json!({"k": k, "iterations": table, "pi": value}).to_string())?;
        }
    }
    Ok(0)
}

pub fn lehmer(
    cfg: &CliConfig,
    path: Option<PathBuf>,
    builtin: Option<Builtin>,
    k: Option<u32>,
    estimate: bool,
) -> CmdResult {
    let ctx = context(cfg)?;
    let mu = match (k, estimate) {
        (Some(k), true) => {
            require_iter_k(k)?;
            let u1 = u1_surdless(k, &ctx)?;
            lehmer_estimate_two_term(k, &u1, &ctx)?
        }
        (Some(k), false) => lehmer_measure(&two_term(cfg, k, false)?.to_machin(), &ctx)?,
        (None, _) => lehmer_measure(&formula_source(path, builtin)?, &ctx)?,
    };
    let s = mu.to_decimal_string(6);
    match cfg.output_format {
        OutputFormat::Text => emit(cfg, &s)?,
        OutputFormat::Json => emit(cfg, &json!({ "lehmer": s }).to_string())?,
    }
    Ok(0)
}

/// Parses an inclusive `a..b` range; `a > b` is empty.
pub fn parse_k_range(s: &str) -> Result<Vec<u32>, Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Failure::usage(format!("bad range {s:?}, expected a..b")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Failure::usage(format!("bad range bound {t:?}")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(Failure::usage(format!("empty range {s}")));
    }
    if a < 2 {
        return Err(Failure::usage("k must be at least 2"));
    }
    Ok((a..=b).collect())
}

struct Cell {
    series: ArctanSeries,
    k: u32,
    outcome: Result<(String, u128), String>,
}

fn csv_safe(s: &str) -> String {
    s.replace([',', '\n'], " ")
}

pub fn bench(cfg: &CliConfig, which: BenchSeries, k_range: &str, digits: u32) -> CmdResult {
    let ks = parse_k_range(k_range)?;
    let series: Vec<ArctanSeries> = match which {
        BenchSeries::All => ArctanSeries::ALL.to_vec(),
        BenchSeries::Maclaurin => vec![ArctanSeries::Maclaurin],
        BenchSeries::Euler => vec![ArctanSeries::Euler],
        BenchSeries::Gh => vec![ArctanSeries::Gh],
    };
    let ctx = context(cfg)?;
    let mut cells = Vec::new();
    for &k in &ks {
        let formula = u1_surdless(k, &ctx)
            .and_then(|u| TwoTermFormula::from_u1(k, u, false))
            .map(|f| f.to_machin());
        for &s in &series {
            let outcome = match &formula {
                Ok(f) => {
                    let start = Instant::now();
                    compute_pi_formula(f, digits, s)
                        .map(|d| (d, start.elapsed().as_millis()))
                        .map_err(|e| e.to_string())
                }
                Err(e) => Err(e.to_string()),
            };
            cells.push(Cell { series: s, k, outcome });
        }
    }
    cells.sort_by_key(|c| (ArctanSeries::ALL.iter().position(|s| *s == c.series), c.k));

    let mut out = String::new();
    match cfg.output_format {
        OutputFormat::Text => {
            out.push_str("series,k,digits,millis");
            for c in &cells {
                let t = match &c.outcome {
                    Ok((_, ms)) => ms.to_string(),
                    Err(e) => format!("error: {}", csv_safe(e)),
                };
                out.push_str(&format!("\n{},{},{},{}", c.series.name(), c.k, digits, t));
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = cells
                .iter()
                .map(|c| match &c.outcome {
                    Ok((_, ms)) => json!({"series": c.series.name(), "k": c.k, "digits": digits, "millis": ms}),
                    Err(e) => json!({"series": c.series.name(), "k": c.k, "digits": digits, "error": e}),
                })
                .collect();
            out = serde_json::Value::from(rows).to_string();
        }
    }
    emit(cfg, &out)?;

    let outputs: Vec<&String> = cells
        .iter()
        .filter_map(|c| c.outcome.as_ref().ok().map(|(d, _)| d))
        .collect();
    let failed = cells.len() - outputs.len();
    let agree = outputs.windows(2).all(|w| w[0] == w[1]);
    if agree {
        eprintln!(
            "digits identical across {} cells ({failed} failed)",
            outputs.len()
        );
    } else {
        eprintln!("digit outputs DIFFER across cells");
    }
    Ok(if agree { 0 } else { 1 })
}
