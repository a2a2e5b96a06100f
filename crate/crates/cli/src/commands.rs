use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use degen_poisson::kernel::{stirling_classical_exact, stirling_degenerate};
use degen_poisson::verify::{oracle_convolution, oracle_moment_by_summation, run_verification, GridSpec};
use degen_poisson::{DegeneracyParams, DztpDist, HeteroSumSpec, IidSumSpec, SeriesControl, Tolerances};

use crate::format::{csv, json, num, opt, pretty, OutputFormat};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<degen_poisson::Error> for CliError {
    fn from(e: degen_poisson::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn dist(alpha: f64, lambda: f64) -> Result<DztpDist> {
    Ok(DztpDist::new(DegeneracyParams::new(alpha, lambda)?))
}

fn max_terms(n_max: u64) -> usize {
    SeriesControl::default().max_terms.max(n_max as usize + 1)
}

pub fn pmf(alpha: f64, lambda: f64, n_max: Option<u64>, tail_tol: f64, fmt: OutputFormat) -> Result<Output> {
    let d = dist(alpha, lambda)?;
    let table = match n_max {
        Some(n) => {
            let mut t = d.pmf_table_with(tail_tol, n, max_terms(n))?;
            t.truncate_to(n);
            t
        }
        None => d.pmf_table(tail_tol)?,
    };
    let text = match fmt {
        OutputFormat::Json => json(&table),
        OutputFormat::Csv | OutputFormat::Pretty => {
            let mut rows: Vec<Vec<String>> = table
                .iter()
                .zip(table.cumulative())
                .map(|((n, p), c)| vec![n.to_string(), num(p), num(c)])
                .collect();
            rows.push(vec![
                "tail".into(),
                num(table.tail_mass),
                num(table.total() + table.tail_mass),
            ]);
            if fmt == OutputFormat::Csv {
                csv(&["n", "pmf", "cdf"], &rows)
            } else {
                pretty(&["n", "pmf", "cdf"], &rows)
            }
        }
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct MomentRow {
    order: u32,
    closed_form: f64,
    table_sum: f64,
    rel_discrepancy: f64,
}

pub fn moments(alpha: f64, lambda: f64, max_order: u32, tail_tol: f64, fmt: OutputFormat) -> Result<Output> {
    let d = dist(alpha, lambda)?;
    let mut rows = Vec::new();
    for order in 1..=max_order {
        let closed_form = d.moment(order as usize)?;
        let table_sum = oracle_moment_by_summation(d.params(), order, tail_tol)?.value;
        rows.push(MomentRow {
            order,
            closed_form,
            table_sum,
            rel_discrepancy: (closed_form - table_sum).abs() / closed_form.abs().max(1e-300),
        });
    }
    let header = ["order", "closed_form", "table_sum", "rel_discrepancy"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.order.to_string(),
                num(r.closed_form),
                num(r.table_sum),
                num(r.rel_discrepancy),
            ]
        })
        .collect();
    Ok(Output::ok(match fmt {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv(&header, &cells),
        OutputFormat::Pretty => pretty(&header, &cells),
    }))
}

#[derive(Serialize)]
struct SampleOut<'a> {
    alpha: f64,
    lambda: f64,
    seed: u64,
    method: degen_poisson::SampleMethod,
    variates: &'a [u64],
}

pub fn sample(alpha: f64, lambda: f64, count: u64, seed: u64, fmt: OutputFormat) -> Result<Output> {
    let d = dist(alpha, lambda)?;
    let mut stream = d.stream(seed);
    let variates = stream.sample(count as usize)?;
    let text = match fmt {
        OutputFormat::Json => json(&SampleOut {
            alpha,
            lambda,
            seed,
            method: stream.method(),
            variates: &variates,
        }),
        OutputFormat::Csv => {
            let mut out = String::from("variate\n");
            for v in &variates {
                out.push_str(&v.to_string());
                out.push('\n');
            }
            out
        }
        OutputFormat::Pretty => {
            let mut freq = BTreeMap::new();
            for &v in &variates {
                *freq.entry(v).or_insert(0u64) += 1;
            }
            let n = variates.len() as f64;
            let rows: Vec<Vec<String>> = freq
                .iter()
                .map(|(v, c)| vec![v.to_string(), c.to_string(), num(*c as f64 / n)])
                .collect();
            let mean = variates.iter().map(|&v| v as f64).sum::<f64>() / n;
            let var = if variates.len() > 1 {
                variates.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let mut out = pretty(&["value", "count", "frequency"], &rows);
            out.push_str(&format!("mean      {}\nvariance  {}\n", num(mean), num(var)));
            out
        }
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct SumRow {
    n: u64,
    closed_form: Option<f64>,
    convolution: f64,
}

#[derive(Serialize)]
struct SumOut {
    lambda: f64,
    alphas: Vec<f64>,
    rows: Vec<SumRow>,
    tail_mass: f64,
    max_discrepancy: f64,
}

/// Rows from k up to `n_max` (or where the certified table ends). The
/// closed form column comes from the Stirling expression for equal α and
/// from composition enumeration otherwise, where that is within its limits.
pub fn sum(
    alphas: Vec<f64>,
    iid: bool,
    lambda: f64,
    n_max: Option<u64>,
    tail_tol: f64,
    fmt: OutputFormat,
) -> Result<Output> {
    let k = alphas.len() as u64;
    let hetero = HeteroSumSpec::new(lambda, alphas.clone())?;
    let (closed, mut table): (Box<dyn Fn(u64) -> Option<f64>>, _) = if iid {
        let spec = IidSumSpec::new(alphas.len(), DegeneracyParams::new(alphas[0], lambda)?)?;
        let table = spec.table(tail_tol)?;
        (Box::new(move |n| Some(spec.pmf(n))), table)
    } else {
        let table = hetero.table(tail_tol)?;
        let spec = hetero.clone();
        (Box::new(move |n| spec.pmf_enumerated(n).ok()), table)
    };
    let last = n_max.unwrap_or(table.last());
    table.truncate_to(last);
    let dists: Vec<DztpDist> = alphas.iter().map(|&a| dist(a, lambda)).collect::<Result<_>>()?;
    let conv = oracle_convolution(&dists, last)?;
    let rows: Vec<SumRow> = (k..=last)
        .map(|n| SumRow {
            n,
            closed_form: closed(n),
            convolution: conv.get(n),
        })
        .collect();
    let max_discrepancy = rows
        .iter()
        .filter_map(|r| r.closed_form.map(|c| (c - r.convolution).abs()))
        .fold(0.0, f64::max);
    let out = SumOut {
        lambda,
        alphas,
        rows,
        tail_mass: table.tail_mass,
        max_discrepancy,
    };
    let text = match fmt {
        OutputFormat::Json => json(&out),
        OutputFormat::Csv | OutputFormat::Pretty => {
            let mut cells: Vec<Vec<String>> = out
                .rows
                .iter()
                .map(|r| vec![r.n.to_string(), opt(r.closed_form), num(r.convolution)])
                .collect();
            cells.push(vec!["max_discrepancy".into(), num(max_discrepancy), String::new()]);
            let header = ["n", "closed_form", "convolution"];
            if fmt == OutputFormat::Csv {
                csv(&header, &cells)
            } else {
                pretty(&header, &cells)
            }
        }
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
#[serde(untagged)]
enum Rows {
    Exact(Vec<Vec<u64>>),
    Float(Vec<Vec<f64>>),
}

#[derive(Serialize)]
struct TriangleOut {
    lambda: f64,
    max_n: usize,
    rows: Rows,
}

pub fn triangle(lambda: f64, max_n: usize, fmt: OutputFormat) -> Result<Output> {
    if !lambda.is_finite() {
        return Err(CliError::Domain(format!("lambda must be finite, got {lambda}")));
    }
    let exact = if lambda == 0.0 {
        stirling_classical_exact(max_n).and_then(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| u64::try_from(v).ok()).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
        })
    } else {
        None
    };
    let rows = match exact {
        Some(r) => Rows::Exact(r),
        None => Rows::Float(stirling_degenerate(max_n, lambda).rows().to_vec()),
    };
    let cells: Vec<Vec<String>> = match &rows {
        Rows::Exact(r) => r.iter().map(|row| row.iter().map(u64::to_string).collect()).collect(),
        Rows::Float(r) => r.iter().map(|row| row.iter().map(|&v| num(v)).collect()).collect(),
    };
    let text = match fmt {
        OutputFormat::Json => json(&TriangleOut { lambda, max_n, rows }),
        OutputFormat::Csv => {
            let flat: Vec<Vec<String>> = cells
                .iter()
                .enumerate()
                .flat_map(|(n, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(k, v)| vec![n.to_string(), k.to_string(), v.clone()])
                })
                .collect();
            csv(&["n", "k", "value"], &flat)
        }
        OutputFormat::Pretty => {
            let header: Vec<String> = std::iter::once("n".to_string())
                .chain((0..=max_n).map(|k| format!("k={k}")))
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = cells
                .into_iter()
                .enumerate()
                .map(|(n, row)| std::iter::once(n.to_string()).chain(row).collect())
                .collect();
            pretty(&header, &rows)
        }
    };
    Ok(Output::ok(text))
}

fn read_json<T: serde::de::DeserializeOwned + Default>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {what} {}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Ok(T::default());
    }
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad {what} {}: {e}", path.display())))
}

/// Exit code 0 when every check passes and 3 otherwise; an unreadable or
/// invalid grid is a usage error.
pub fn verify(grid: &str, seed: Option<u64>, tolerances: Option<&Path>, fmt: OutputFormat) -> Result<Output> {
    let mut spec = if grid == "default" {
        GridSpec::standard()
    } else {
        read_json::<GridSpec>(Path::new(grid), "grid file")?
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    let tol = match tolerances {
        Some(p) => read_json::<Tolerances>(p, "tolerance file")?,
        None => Tolerances::default(),
    };
    let report = run_verification(&spec, &tol).map_err(|e| CliError::Usage(format!("bad grid: {e}")))?;
    let text = match fmt {
        OutputFormat::Json => json(&report),
        OutputFormat::Pretty => report.to_table(),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.check.clone(),
                        opt(c.point.alpha),
                        opt(c.point.lambda),
                        c.point.k.map(|k| k.to_string()).unwrap_or_default(),
                        c.point.n.map(|n| n.to_string()).unwrap_or_default(),
                        num(c.expected),
                        num(c.actual),
                        num(c.discrepancy),
                        num(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            csv(
                &[
                    "check",
                    "alpha",
                    "lambda",
                    "k",
                    "n",
                    "expected",
                    "actual",
                    "discrepancy",
                    "tolerance",
                    "pass",
                ],
                &rows,
            )
        }
    };
    Ok(Output {
        text,
        code: if report.is_pass() { 0 } else { 3 },
    })
}
