//! Line-oriented ASCII formats for instances, colorings and verify reports.
//!
//! ```text
//! c optional comment
//! p icc <n> <k>
//! i <id> <lo> <hi> <r1> <r2> <r3>
//! ```
//!
//! Colorings are `s FEASIBLE` followed by `v <c1> ... <cn>`, or a bare
//! `s INFEASIBLE` / `s UNKNOWN`. A verify report is a single
//! `r satisfied <count> violated <id...>` line, followed by one
//! `d <id> <dr> <db> <dw>` line per violated interval.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Color, Coloring, Counts, Instance, Interval, ModelError, VerifyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl FormatError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        FormatError { line, msg: msg.into() }
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| FormatError::new(line, format!("invalid {what} '{tok}'")))
}

/// Significant lines: 1-based line number plus content, skipping blanks and comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut header: Option<usize> = None;
    let mut intervals = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(FormatError::new(line, "duplicate header"));
                }
                if toks.len() != 4 || toks[1] != "icc" {
                    return Err(FormatError::new(line, "malformed header, expected 'p icc <n> <k>'"));
                }
                let n: usize = parse_num(toks[2], line, "position count")?;
                let k: usize = parse_num(toks[3], line, "color count")?;
                if k != Instance::COLORS {
                    return Err(FormatError::new(line, format!("only k = 3 is supported, found {k}")));
                }
                header = Some(n);
            }
            "i" => {
                let n = header.ok_or_else(|| FormatError::new(line, "interval before header"))?;
                if toks.len() != 7 {
                    return Err(FormatError::new(line, "expected 'i <id> <lo> <hi> <r1> <r2> <r3>'"));
                }
                let id: usize = parse_num(toks[1], line, "interval id")?;
                let lo: usize = parse_num(toks[2], line, "lo")?;
                let hi: usize = parse_num(toks[3], line, "hi")?;
                let mut req = [0u32; 3];
                for (slot, tok) in req.iter_mut().zip(&toks[4..7]) {
                    *slot = parse_num(tok, line, "requirement count")?;
                }
                if id != intervals.len() + 1 {
                    return Err(FormatError::new(
                        line,
                        format!("non-contiguous interval id {id}, expected {}", intervals.len() + 1),
                    ));
                }
                if hi < lo {
                    return Err(FormatError::new(line, format!("hi {hi} < lo {lo}")));
                }
                if lo == 0 || hi > n {
                    return Err(FormatError::new(line, format!("interval [{lo}, {hi}] outside [1, {n}]")));
                }
                intervals.push(Interval { id, lo, hi, req: Counts(req) });
            }
            other => return Err(FormatError::new(line, format!("unknown line type '{other}'"))),
        }
    }
    let n = header.ok_or_else(|| FormatError::new(0, "missing 'p icc' header"))?;
    Instance::new(n, intervals).map_err(|e| FormatError::new(0, e.to_string()))
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "p icc {} {}", inst.n(), Instance::COLORS).unwrap();
    for iv in inst.intervals() {
        let [r, b, w] = iv.req.0;
        writeln!(out, "i {} {} {} {} {} {}", iv.id, iv.lo, iv.hi, r, b, w).unwrap();
    }
    out
}

/// A solver answer in coloring format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionText {
    Feasible(Coloring),
    Infeasible,
    Unknown,
}

/// Parses a coloring answer; `expected_len` enforces the instance length.
pub fn parse_coloring(text: &str, expected_len: Option<usize>) -> Result<SolutionText, FormatError> {
    let mut status: Option<(usize, &str)> = None;
    let mut colors = Vec::new();
    let mut saw_values = false;
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("s") => {
                if status.is_some() {
                    return Err(FormatError::new(line, "duplicate status line"));
                }
                let word = toks.next().ok_or_else(|| FormatError::new(line, "missing status"))?;
                status = Some((line, word));
            }
            Some("v") => {
                saw_values = true;
                for tok in toks {
                    let code: u32 = parse_num(tok, line, "color code")?;
                    let color = Color::from_code(code).map_err(|e| FormatError::new(line, e.to_string()))?;
                    colors.push(color);
                }
            }
            Some(other) => return Err(FormatError::new(line, format!("unknown line type '{other}'"))),
            None => {}
        }
    }
    match status {
        Some((_, "INFEASIBLE")) | Some((_, "UNKNOWN")) if saw_values => {
            Err(FormatError::new(0, "value lines given for a non-feasible status"))
        }
        Some((_, "INFEASIBLE")) => Ok(SolutionText::Infeasible),
        Some((_, "UNKNOWN")) => Ok(SolutionText::Unknown),
        Some((_, "FEASIBLE")) | None if saw_values => {
            if let Some(n) = expected_len {
                if colors.len() != n {
                    return Err(FormatError::new(
                        0,
                        ModelError::LengthMismatch { expected: n, found: colors.len() }.to_string(),
                    ));
                }
            }
            Ok(SolutionText::Feasible(Coloring::new(colors)))
        }
        Some((line, "FEASIBLE")) => {
            if expected_len.unwrap_or(0) == 0 {
                Ok(SolutionText::Feasible(Coloring::new(Vec::new())))
            } else {
                Err(FormatError::new(line, "FEASIBLE without a 'v' line"))
            }
        }
        Some((line, other)) => Err(FormatError::new(line, format!("unknown status '{other}'"))),
        None => Err(FormatError::new(0, "empty coloring")),
    }
}

pub fn emit_coloring(col: &Coloring) -> String {
    let mut out = String::from("s FEASIBLE\nv");
    for c in col.colors() {
        write!(out, " {}", c.code()).unwrap();
    }
    out.push('\n');
    out
}

pub fn emit_solution(sol: &SolutionText) -> String {
    match sol {
        SolutionText::Feasible(col) => emit_coloring(col),
        SolutionText::Infeasible => "s INFEASIBLE\n".to_string(),
        SolutionText::Unknown => "s UNKNOWN\n".to_string(),
    }
}

pub fn emit_report(report: &VerifyReport) -> String {
    let mut out = format!("r satisfied {} violated", report.satisfied_count);
    for id in &report.violated {
        write!(out, " {id}").unwrap();
    }
    out.push('\n');
    for (id, d) in report.violated.iter().zip(&report.deltas) {
        writeln!(out, "d {} {} {} {}", id, d[0], d[1], d[2]).unwrap();
    }
    out
}

pub fn parse_report(text: &str) -> Result<VerifyReport, FormatError> {
    let mut head: Option<(usize, Vec<usize>)> = None;
    let mut deltas = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "r" => {
                if toks.len() < 4 || toks[1] != "satisfied" || toks[3] != "violated" {
                    return Err(FormatError::new(line, "expected 'r satisfied <n> violated <ids>'"));
                }
                let sat = parse_num(toks[2], line, "satisfied count")?;
                let ids =
                    toks[4..].iter().map(|t| parse_num(t, line, "interval id")).collect::<Result<Vec<usize>, _>>()?;
                head = Some((sat, ids));
            }
            "d" => {
                if toks.len() != 5 {
                    return Err(FormatError::new(line, "expected 'd <id> <dr> <db> <dw>'"));
                }
                let id: usize = parse_num(toks[1], line, "interval id")?;
                let mut d = [0i64; 3];
                for (slot, tok) in d.iter_mut().zip(&toks[2..5]) {
                    *slot = parse_num(tok, line, "delta")?;
                }
                deltas.push((line, id, d));
            }
            other => return Err(FormatError::new(line, format!("unknown line type '{other}'"))),
        }
    }
    let (satisfied_count, violated) = head.ok_or_else(|| FormatError::new(0, "missing 'r' line"))?;
    if deltas.len() != violated.len() {
        return Err(FormatError::new(0, "delta lines do not match the violated list"));
    }
    for ((line, id, _), want) in deltas.iter().zip(&violated) {
        if id != want {
            return Err(FormatError::new(*line, format!("delta for {id}, expected {want}")));
        }
    }
    Ok(VerifyReport { satisfied_count, violated, deltas: deltas.into_iter().map(|(_, _, d)| d).collect() })
}
