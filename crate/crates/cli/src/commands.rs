use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use gkcs_core::report::{csv_table, figure_csv, fmt_float, verification_csv};
use gkcs_core::{
    action_identity_residual, d_constant, figure_data, fit_asymptotics, level_exponent, normalization, overlap,
    quasiclassical_level, rho, sigma_from_kl, spectrum, verify_family, CsParams, PotentialSpec, WeightFunction,
};
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command, Format, OutputArgs};

pub enum Status {
    Success,
    VerificationFailed,
}

#[derive(Debug)]
pub enum CliError {
    Core(gkcs_core::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<gkcs_core::Error> for CliError {
    fn from(e: gkcs_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy)]
enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => fmt_float(x),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Float(x) => json!(x),
        }
    }
}

/// Named columns plus scalar metadata, renderable in every output format.
struct Table {
    meta: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(meta: Value, columns: Vec<&'static str>) -> Self {
        let meta = match meta {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Table { meta, columns, rows: Vec::new() }
    }

    fn row_object(&self, row: &[Cell]) -> Value {
        Value::Object(self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect())
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => csv_table(&self.columns, self.rows.iter().map(|r| r.iter().map(|c| c.csv()))),
            Format::Json => {
                let mut doc = self.meta.clone();
                doc.insert("rows".into(), self.rows.iter().map(|r| self.row_object(r)).collect());
                pretty(&Value::Object(doc))
            }
            Format::Jsonl => {
                let mut out = String::new();
                for r in &self.rows {
                    out.push_str(&self.row_object(r).to_string());
                    out.push('\n');
                }
                if !self.meta.is_empty() {
                    out.push_str(&Value::Object(self.meta.clone()).to_string());
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// A single record: one CSV row, one JSON object, or one JSONL line.
fn render_record(record: Value, format: Format) -> String {
    match format {
        Format::Json => pretty(&record),
        Format::Jsonl => format!("{record}\n"),
        Format::Csv => {
            let obj = record.as_object().cloned().unwrap_or_default();
            let header: Vec<&str> = obj.keys().map(String::as_str).collect();
            let cells = obj.values().map(|v| match v {
                Value::Number(n) => n.as_f64().filter(|_| !n.is_u64()).map(fmt_float).unwrap_or_else(|| n.to_string()),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            });
            csv_table(&header, [cells.collect::<Vec<_>>()])
        }
    }
}

fn emit(text: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Moments { family, nmax, output } => {
            let family = family.build()?;
            let mut t = Table::new(json!({ "family": family }), vec!["n", "rho"]);
            t.rows = (0..=*nmax).map(|n| vec![Cell::Int(n), Cell::Float(rho(&family, n))]).collect();
            emit(&t.render(output.format), output)?;
        }
        Command::Spectrum { family, nmax, output } => {
            let family = family.build()?;
            let mut t = Table::new(json!({ "family": family }), vec!["n", "e", "one_minus_e"]);
            t.rows = (0..=*nmax)
                .map(|n| {
                    let gap = if n == 0 { 1.0 } else { family.one_minus_spectrum(n) };
                    vec![Cell::Int(n), Cell::Float(spectrum(&family, n)), Cell::Float(gap)]
                })
                .collect();
            emit(&t.render(output.format), output)?;
        }
        Command::Fit { family, nmin, nmax, output } => {
            let family = family.build()?;
            let fit = fit_asymptotics(&family, *nmin, *nmax)?;
            let record = json!({ "theta": fit.theta, "c": fit.c, "sigma": fit.sigma });
            let record = match output.format {
                Format::Csv => record,
                _ => {
                    let mut m = record.as_object().cloned().unwrap_or_default();
                    m.insert("family".into(), json!(family));
                    m.insert("n_min".into(), json!(nmin));
                    m.insert("n_max".into(), json!(nmax));
                    Value::Object(m)
                }
            };
            emit(&render_record(record, output.format), output)?;
        }
        Command::Weight { family, backend, y, grid, output } => {
            let wf = WeightFunction::new(family.build()?, (*backend).into())?;
            let points: Vec<f64> = if y.is_empty() {
                if *grid < 2 {
                    return Err(gkcs_core::Error::Domain(format!("--grid must be at least 2, got {grid}")).into());
                }
                (1..=*grid).map(|i| i as f64 / (*grid + 1) as f64).collect()
            } else {
                y.clone()
            };
            let meta = json!({ "family": wf.family(), "backend": wf.backend(), "atom_at_one": wf.atom_at_one() });
            let mut t = Table::new(meta, vec!["y", "weight"]);
            for p in points {
                t.rows.push(vec![Cell::Float(p), Cell::Float(wf.density(p)?)]);
            }
            emit(&t.render(output.format), output)?;
        }
        Command::Verify { family, nmax, tol, backend, output } => {
            let report = verify_family(&family.build()?, *nmax, *tol, (*backend).into())?;
            let text = match output.format {
                Format::Csv => verification_csv(&report),
                Format::Json => report.to_json() + "\n",
                Format::Jsonl => report.to_jsonl(),
            };
            emit(&text, output)?;
            if !report.pass {
                eprintln!("gkcs: verification failed, max rel_err {:e} > {:e}", report.max_rel_err, report.tolerance);
                return Ok(Status::VerificationFailed);
            }
        }
        Command::CsNorm { family, j, tol, output } => {
            let family = family.build()?;
            let norm = normalization(&family, *j, *tol)?;
            let residual = action_identity_residual(&family, *j, *tol)?;
            let mut record = json!({
                "J": j,
                "normalization": norm.value,
                "terms": norm.terms,
                "action_residual": residual,
            });
            if output.format != Format::Csv {
                record["family"] = json!(family);
            }
            emit(&render_record(record, output.format), output)?;
        }
        Command::CsOverlap { family, j, gamma, j2, gamma2, tol, output } => {
            let family = family.build()?;
            let p1 = CsParams::new(*j, *gamma)?;
            let p2 = CsParams::new(j2.unwrap_or(*j), gamma2.unwrap_or(*gamma))?;
            let o = overlap(&family, p1, p2, *tol)?;
            let mut record = json!({
                "J": p1.j,
                "gamma": p1.gamma,
                "J2": p2.j,
                "gamma2": p2.gamma,
                "re": o.re,
                "im": o.im,
                "abs": o.norm(),
            });
            if output.format != Format::Csv {
                record["family"] = json!(family);
            }
            emit(&render_record(record, output.format), output)?;
        }
        Command::Figure { id, grid, output } => {
            let fig = figure_data(*id, *grid)?;
            let text = match output.format {
                Format::Csv => figure_csv(&fig),
                Format::Json => pretty(&json!(fig)),
                Format::Jsonl => {
                    let meta = json!({ "figure_id": fig.figure_id, "labels": fig.labels, "atoms": fig.atoms });
                    let mut t = Table::new(meta, vec!["y", "curve_I", "curve_II"]);
                    t.rows = (0..fig.y.len())
                        .map(|i| vec![Cell::Float(fig.y[i]), Cell::Float(fig.curve_i[i]), Cell::Float(fig.curve_ii[i])])
                        .collect();
                    t.render(Format::Jsonl)
                }
            };
            emit(&text, output)?;
        }
        Command::Quasiclassical { sigma, k, l, v0, mass, nmax, output } => {
            let sigma = match (sigma, k, l) {
                (Some(s), None, None) => *s,
                (None, Some(k), Some(l)) => sigma_from_kl(*k, *l)?,
                _ => {
                    return Err(gkcs_core::Error::Domain("give either --sigma or both --k and --l".into()).into());
                }
            };
            let spec = PotentialSpec::new(sigma, *v0, *mass)?;
            let meta = json!({
                "sigma": sigma,
                "v0": v0,
                "mass": mass,
                "d_constant": d_constant(sigma)?,
                "exponent": level_exponent(sigma),
            });
            let mut t = Table::new(meta, vec!["n", "energy"]);
            for n in 0..=*nmax {
                t.rows.push(vec![Cell::Int(n), Cell::Float(quasiclassical_level(&spec, n)?)]);
            }
            emit(&t.render(output.format), output)?;
        }
    }
    Ok(Status::Success)
}
