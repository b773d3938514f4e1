//! Scenario suites: one run per line, executed on a bounded worker pool and
//! written out in file order.
//!
//! ```text
//! # config                  options
//! strip.cfg   name=strip    t=1,2  lambda=0.5,1.5,2  N=60 nmax=24
//! trident.cfg lambda=-3
//! ```
//!
//! Config paths are relative to the suite file. Options: `name`, `t`,
//! `lambda`, `N`, `nmax`, `trunc_t`, `growth` (`true`/`false`).

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{parse_complex, run, Report, RunOptions, Tolerances, TruncationRequest};
use crate::scenario::parse_scenario;
use crate::svg::{render_svg, Viewport};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: String,
    /// Config path as written in the suite file.
    pub config: String,
    pub ts: Vec<f64>,
    pub lambdas: Vec<Complex64>,
    pub growth: bool,
    pub truncation: Option<TruncationRequest>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn list<T>(v: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').filter(|x| !x.is_empty()).map(parse).collect()
}

fn real(v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Invalid(format!("`{v}` is not a number")))
}

pub fn parse_suite(text: &str) -> Result<Vec<SuiteEntry>> {
    let mut out: Vec<SuiteEntry> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut col = 0;
        for piece in body.split(' ') {
            if !piece.trim().is_empty() {
                tokens.push((col + 1, piece.trim()));
            }
            col += piece.chars().count() + 1;
        }
        let Some(&(_, config)) = tokens.first() else {
            continue;
        };
        let stem = Path::new(config)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("scenario")
            .to_string();
        let mut e = SuiteEntry {
            name: stem,
            config: config.to_string(),
            ts: Vec::new(),
            lambdas: Vec::new(),
            growth: false,
            truncation: None,
        };
        let (mut n, mut n_max, mut trunc_t) = (None, None, None);
        for &(column, tok) in &tokens[1..] {
            let Some((key, value)) = tok.split_once('=') else {
                return Err(syntax(line, column, format!("expected key=value, got `{tok}`")));
            };
            let at = |r: Result<()>| {
                r.map_err(|err| syntax(line, column + key.len() + 1, err.to_string()))
            };
            match key {
                "name" => {
                    if value.is_empty()
                        || !value.chars().all(|c| c.is_alphanumeric() || "_-.".contains(c))
                    {
                        return Err(syntax(line, column, format!("bad name `{value}`")));
                    }
                    e.name = value.to_string();
                }
                "t" => at(list(value, real).map(|v| e.ts = v))?,
                "lambda" => at(list(value, parse_complex).map(|v| e.lambdas = v))?,
                "growth" => match value {
                    "true" => e.growth = true,
                    "false" => e.growth = false,
                    _ => return Err(syntax(line, column, "growth must be true or false")),
                },
                "N" => at(value.parse().map(|v| n = Some(v)).map_err(|_| {
                    Error::Invalid(format!("`{value}` is not a dimension"))
                }))?,
                "nmax" => at(value.parse().map(|v| n_max = Some(v)).map_err(|_| {
                    Error::Invalid(format!("`{value}` is not a power count"))
                }))?,
                "trunc_t" => at(real(value).map(|v| trunc_t = Some(v)))?,
                other => return Err(syntax(line, column, format!("unknown option `{other}`"))),
            }
        }
        if let Some(n) = n {
            e.truncation = Some(TruncationRequest {
                t: trunc_t.or(e.ts.first().copied()).unwrap_or(1.0),
                n,
                n_max: n_max.unwrap_or(24),
            });
        } else if n_max.is_some() || trunc_t.is_some() {
            return Err(syntax(line, 1, "nmax and trunc_t need N"));
        }
        if out.iter().any(|o| o.name == e.name) {
            return Err(syntax(line, 1, format!("duplicate scenario name `{}`", e.name)));
        }
        out.push(e);
    }
    Ok(out)
}

/// Outcome of one suite line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteItem {
    pub name: String,
    pub config: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub failed_checks: Vec<String>,
    pub unsupported: Vec<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub exit_code: i32,
    pub scenarios: Vec<SuiteItem>,
}

/// Overall exit status: a config error dominates, then a failed check, then
/// a coverage gap.
pub fn combine_exit_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    let codes: Vec<i32> = codes.into_iter().collect();
    [2, 1, 3]
        .into_iter()
        .find(|c| codes.contains(c))
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteOptions {
    pub tolerances: Tolerances,
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
    pub timing: bool,
}

fn run_entry(dir: &Path, e: &SuiteEntry, opts: &SuiteOptions) -> Result<Report> {
    let path: PathBuf = dir.join(&e.config);
    let text = std::fs::read_to_string(&path)
        .map_err(|err| Error::Io(format!("{}: {err}", path.display())))?;
    let s = parse_scenario(&text)?;
    let run_opts = RunOptions {
        ts: e.ts.clone(),
        lambdas: e.lambdas.clone(),
        growth: e.growth,
        truncation: e.truncation,
        tolerances: opts.tolerances,
        timing: opts.timing,
        ..Default::default()
    };
    run(&s, Some(&e.config), &run_opts)
}

/// SVG files for a report: the generator spectrum and, when a time was
/// requested, the spectrum of the first operator.
pub fn report_svgs(r: &Report) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    if let Some(g) = r.regions.generator_spectrum.value() {
        out.push(("generator", render_svg(g, &Viewport::fit(g))));
    }
    if let Some(op) = r.regions.operators.first().and_then(|o| o.spectrum.value()) {
        out.push(("operator", render_svg(op, &Viewport::fit(op))));
    }
    out
}

/// Runs every entry of the suite at `suite_path`, writing `<name>.json`,
/// `<name>.<region>.svg` and `suite.json` into `out_dir`.
pub fn run_suite(suite_path: &Path, out_dir: &Path, opts: &SuiteOptions) -> Result<SuiteSummary> {
    let text = std::fs::read_to_string(suite_path)
        .map_err(|e| Error::Io(format!("{}: {e}", suite_path.display())))?;
    let entries = parse_suite(&text)?;
    let dir = suite_path.parent().unwrap_or(Path::new("."));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let results: Vec<Result<Report>> =
        pool.install(|| entries.par_iter().map(|e| run_entry(dir, e, opts)).collect());

    std::fs::create_dir_all(out_dir)?;
    let mut items = Vec::with_capacity(entries.len());
    for (e, r) in entries.iter().zip(results) {
        let item = match r {
            Ok(report) => {
                let mut files = vec![format!("{}.json", e.name)];
                std::fs::write(out_dir.join(&files[0]), report.to_json())?;
                for (region, svg) in report_svgs(&report) {
                    let f = format!("{}.{region}.svg", e.name);
                    std::fs::write(out_dir.join(&f), svg)?;
                    files.push(f);
                }
                SuiteItem {
                    name: e.name.clone(),
                    config: e.config.clone(),
                    exit_code: report.exit_code(),
                    error: None,
                    failed_checks: report
                        .failed_checks()
                        .iter()
                        .map(|c| c.name.clone())
                        .collect(),
                    unsupported: report.unsupported_items(),
                    files,
                }
            }
            Err(err) => SuiteItem {
                name: e.name.clone(),
                config: e.config.clone(),
                exit_code: err.exit_code(),
                error: Some(err.to_string()),
                failed_checks: Vec::new(),
                unsupported: Vec::new(),
                files: Vec::new(),
            },
        };
        items.push(item);
    }
    let summary = SuiteSummary {
        exit_code: combine_exit_codes(items.iter().map(|i| i.exit_code)),
        scenarios: items,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    std::fs::write(out_dir.join("suite.json"), json)?;
    Ok(summary)
}
