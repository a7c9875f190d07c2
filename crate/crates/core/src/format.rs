//! Text and JSON formats.
//!
//! A `.trn` file holds one tournament:
//!
//! ```text
//! # optional comment lines
//! 4
//! 110101
//! ```
//!
//! The first non-comment line is `n`; the second lists the `C(n,2)` pairs
//! `(i, j)`, `i < j`, in row-major order, `1` meaning `i -> j`. Vertices are
//! 0-based. Files end with a newline.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::census::{ArcClass, Density};
use crate::error::{Error, Result};
use crate::qrlab::{transitive_baseline, CensusMode, QrReport, SearchResult};
use crate::rational::{format_rational, rational_to_f64};
use crate::tournament::Tournament;

/// Largest vertex count accepted when parsing.
pub const MAX_TRN_VERTICES: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrnFile {
    /// Comment lines without their leading `#`.
    pub comments: Vec<String>,
    pub tournament: Tournament,
}

impl TrnFile {
    pub fn new(tournament: Tournament) -> Self {
        TrnFile { comments: Vec::new(), tournament }
    }
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_trn(text: &str) -> Result<TrnFile> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines: Vec<&str> = body.split('\n').collect();
    let mut idx = 0;
    let mut comments = Vec::new();
    while idx < lines.len() && lines[idx].starts_with('#') {
        comments.push(lines[idx][1..].to_string());
        idx += 1;
    }
    let n_line = lines.get(idx).copied().unwrap_or("");
    if n_line.is_empty() || !n_line.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(idx + 1, format!("expected a vertex count, found {n_line:?}")));
    }
    let n: usize = n_line.parse().map_err(|_| parse_error(idx + 1, "vertex count out of range"))?;
    if n > MAX_TRN_VERTICES {
        return Err(parse_error(idx + 1, format!("{n} vertices exceeds {MAX_TRN_VERTICES}")));
    }
    idx += 1;
    let bits_line = lines
        .get(idx)
        .ok_or_else(|| parse_error(idx + 1, "missing orientation line"))?;
    let expected = n * n.saturating_sub(1) / 2;
    if let Some(pos) = bits_line.bytes().position(|b| b != b'0' && b != b'1') {
        return Err(parse_error(idx + 1, format!("invalid character at column {}", pos + 1)));
    }
    if bits_line.len() != expected {
        return Err(parse_error(
            idx + 1,
            format!("expected {expected} orientation characters, found {}", bits_line.len()),
        ));
    }
    if lines.len() > idx + 1 {
        return Err(parse_error(idx + 2, "unexpected content after the orientation line"));
    }
    let mut bits = bits_line.bytes();
    let tournament = Tournament::from_fn(n, |_, _| bits.next() == Some(b'1'));
    Ok(TrnFile { comments, tournament })
}

pub fn write_trn(file: &TrnFile) -> String {
    let mut out = String::new();
    for c in &file.comments {
        out.push('#');
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&file.tournament.n().to_string());
    out.push('\n');
    out.extend(file.tournament.upper_bits().map(|b| if b { '1' } else { '0' }));
    out.push('\n');
    out
}

/// `{"value": "p/q", "float": x}`.
pub fn rational_json(r: &BigRational) -> Value {
    json!({ "value": format_rational(r), "float": rational_to_f64(r) })
}

fn density_json(d: &Density) -> Value {
    rational_json(&d.value)
}

/// JSON rendering of a report. `source` describes where the tournament came from.
pub fn report_json(report: &QrReport, source: Value) -> Value {
    let mut densities = Map::new();
    for (s, v) in &report.densities {
        let entries: Map<String, Value> =
            v.entries.iter().map(|(c, d)| (c.name(), density_json(d))).collect();
        densities.insert(s.to_string(), Value::Object(entries));
    }
    let p1: Map<String, Value> =
        report.p1_maxdev.iter().map(|(s, d)| (s.to_string(), density_json(d))).collect();
    let gaps: Map<String, Value> =
        report.gaps.iter().map(|(k, d)| (k.to_string(), density_json(d))).collect();
    let deviations: Map<String, Value> = ArcClass::ALL
        .iter()
        .map(|c| (c.name().to_string(), rational_json(report.deviation(*c))))
        .collect();
    let (mode, samples, seed) = match report.mode {
        CensusMode::Exact => ("exact", Value::Null, Value::Null),
        CensusMode::Sampled { samples, seed } => ("sampled", json!(samples), json!(seed)),
    };
    json!({
        "n": report.n,
        "source": source,
        "mode": mode,
        "samples": samples,
        "seed": seed,
        "densities": densities,
        "p2": report.p2.as_ref().map_or(Value::Null, density_json),
        "p1_maxdev": p1,
        "deviations": deviations,
        "gaps": gaps,
        "verdict": report.verdict.as_str(),
        "thresholds": {
            "deviation": report.thresholds.deviation,
            "p2": report.thresholds.p2,
            "p1_maxdev": report.thresholds.p1_maxdev,
        },
    })
}

/// JSON rendering of a search result.
pub fn search_json(result: &SearchResult) -> Value {
    let baseline = transitive_baseline(result.params.k);
    let gap = &result.best_density - &baseline;
    let trace: Vec<Value> = result
        .trace
        .iter()
        .map(|p| {
            json!({
                "restart": p.restart,
                "step": p.step,
                "density": format_rational(&p.density),
                "float": rational_to_f64(&p.density),
            })
        })
        .collect();
    json!({
        "k": result.params.k,
        "n": result.params.n,
        "seed": result.params.seed,
        "restarts": result.params.restarts,
        "steps": result.params.step_budget,
        "best_density": format_rational(&result.best_density),
        "best_density_float": rational_to_f64(&result.best_density),
        "best_restart": result.best_restart,
        "baseline": format_rational(&baseline),
        "gap": format_rational(&gap),
        "gap_float": rational_to_f64(&gap),
        "restart_densities": result.restart_densities.iter().map(format_rational).collect::<Vec<_>>(),
        "trace": trace,
    })
}
