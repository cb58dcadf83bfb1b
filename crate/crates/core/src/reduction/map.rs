//! Reduction map: where every clause, literal gadget and variable link sits
//! in the reduced instance, and its line-based text format.

use std::fmt::Write as _;

use num_rational::Rational64;

use super::layout::GadgetLayout;
use super::ReductionError;
use crate::cnf::{Clause, CnfFormula, Literal};
use crate::gap::{ExpanderMethod, ExpanderRecord, GapParams};
use crate::model::Counts;

/// One literal occurrence and its special nodes (absolute, 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralSlot {
    pub clause: usize,
    /// 1, 2 or 3.
    pub slot: usize,
    pub var: u32,
    pub negated: bool,
    pub span: (usize, usize),
    pub t: usize,
    pub f: usize,
    /// `a` for slots 1 and 3; `a_l`, `a_r` for slot 2.
    pub a: Vec<usize>,
}

/// A variable interval from the earlier occurrence's `f` node to the later
/// occurrence's `t` node, with the optional one-shorter inner interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableLink {
    pub outer: usize,
    pub inner: Option<usize>,
    pub var: u32,
    /// (clause, slot) of the earlier occurrence.
    pub from: (usize, usize),
    /// (clause, slot) of the later occurrence.
    pub to: (usize, usize),
    /// Requirement sum over the nodes strictly between the endpoints.
    pub z: Counts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub layout_name: String,
    pub layout_version: u32,
    pub formula: CnfFormula,
    /// Positions of the reduced instance.
    pub n: usize,
    /// Intervals of the reduced instance.
    pub m: usize,
    pub clause_spans: Vec<(usize, usize)>,
    /// Three per clause, clause-major.
    pub slots: Vec<LiteralSlot>,
    pub links: Vec<VariableLink>,
    /// Gadget and clause intervals per clause block; block `i` owns ids
    /// `(i - 1) * per_clause + 1 ..= i * per_clause`.
    pub per_clause: usize,
    /// Interval count attributable to one clause.
    pub c: usize,
    pub expanders: Vec<ExpanderRecord>,
    pub gap: Option<GapParams>,
}

impl ReductionMap {
    pub fn slot(&self, clause: usize, slot: usize) -> &LiteralSlot {
        &self.slots[3 * (clause - 1) + slot - 1]
    }

    /// Interval ids owned by clause `i` (1-based).
    pub fn clause_interval_ids(&self, clause: usize) -> std::ops::RangeInclusive<usize> {
        (clause - 1) * self.per_clause + 1..=clause * self.per_clause
    }

    pub fn num_clauses(&self) -> usize {
        self.clause_spans.len()
    }
}

pub fn emit_map(map: &ReductionMap) -> String {
    let mut out = String::new();
    writeln!(out, "m layout {} {}", map.layout_name, map.layout_version).unwrap();
    writeln!(out, "m size n {} intervals {} vars {}", map.n, map.m, map.formula.num_vars()).unwrap();
    for (i, (lo, hi)) in map.clause_spans.iter().enumerate() {
        writeln!(out, "m clause {} span {lo} {hi}", i + 1).unwrap();
    }
    for s in &map.slots {
        write!(out, "m lit {} {} var {} neg {} t {} f {} a", s.clause, s.slot, s.var, s.negated as u8, s.t, s.f)
            .unwrap();
        for a in &s.a {
            write!(out, " {a}").unwrap();
        }
        out.push('\n');
    }
    for l in &map.links {
        writeln!(
            out,
            "m link {} {} var {} from {} {} to {} {} z {} {} {}",
            l.outer,
            l.inner.unwrap_or(0),
            l.var,
            l.from.0,
            l.from.1,
            l.to.0,
            l.to.1,
            l.z.red(),
            l.z.black(),
            l.z.white()
        )
        .unwrap();
    }
    writeln!(out, "m const c {}", map.c).unwrap();
    writeln!(out, "m const per_clause {}", map.per_clause).unwrap();
    for e in &map.expanders {
        let h = e.h.map_or("none".to_string(), |h| h.to_string());
        writeln!(out, "m expander var {} n {} d {} h {h} method {}", e.var, e.n, e.d, e.method.name()).unwrap();
    }
    if let Some(g) = &map.gap {
        writeln!(out, "m gap d0 {} h0 {} eps0 {} eps {} threshold {}", g.d0, g.h0, g.eps0, g.eps, g.threshold).unwrap();
    }
    out
}

struct Fields<'a> {
    toks: Vec<&'a str>,
    at: usize,
    line: usize,
}

impl<'a> Fields<'a> {
    fn err(&self, msg: impl Into<String>) -> ReductionError {
        ReductionError::Map { line: self.line, msg: msg.into() }
    }

    fn word(&mut self) -> Result<&'a str, ReductionError> {
        let t = self.toks.get(self.at).copied().ok_or_else(|| self.err("unexpected end of line"))?;
        self.at += 1;
        Ok(t)
    }

    fn expect(&mut self, key: &str) -> Result<(), ReductionError> {
        let w = self.word()?;
        if w != key {
            return Err(self.err(format!("expected '{key}', found '{w}'")));
        }
        Ok(())
    }

    fn num<T: std::str::FromStr>(&mut self) -> Result<T, ReductionError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("invalid number '{w}'")))
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, ReductionError> {
        self.expect(key)?;
        self.num()
    }

    fn rest(&self) -> &[&'a str] {
        &self.toks[self.at..]
    }

    fn done(&self) -> Result<(), ReductionError> {
        if self.at != self.toks.len() {
            return Err(self.err("trailing fields"));
        }
        Ok(())
    }
}

/// Parses a map; literal spans are recomputed from the given layout.
pub fn parse_map(text: &str, layout: &GadgetLayout) -> Result<ReductionMap, ReductionError> {
    let mut name = None;
    let mut size = None;
    let mut clause_spans = Vec::new();
    let mut slots: Vec<LiteralSlot> = Vec::new();
    let mut links = Vec::new();
    let mut c = None;
    let mut per_clause = None;
    let mut expanders = Vec::new();
    let mut gap = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut f = Fields { toks: l.split_whitespace().collect(), at: 0, line };
        f.expect("m")?;
        match f.word()? {
            "layout" => name = Some((f.word()?.to_string(), f.num::<u32>()?)),
            "size" => size = Some((f.keyed::<usize>("n")?, f.keyed::<usize>("intervals")?, f.keyed::<usize>("vars")?)),
            "clause" => {
                let i: usize = f.num()?;
                if i != clause_spans.len() + 1 {
                    return Err(f.err(format!("clause {i} out of order")));
                }
                f.expect("span")?;
                clause_spans.push((f.num()?, f.num()?));
            }
            "lit" => {
                let clause: usize = f.num()?;
                let slot: usize = f.num()?;
                if (clause, slot) != (slots.len() / 3 + 1, slots.len() % 3 + 1) || clause > clause_spans.len() {
                    return Err(f.err(format!("literal {clause} {slot} out of order")));
                }
                let var = f.keyed("var")?;
                let negated = f.keyed::<u8>("neg")? == 1;
                let t = f.keyed("t")?;
                let fpos = f.keyed("f")?;
                f.expect("a")?;
                let a = f
                    .rest()
                    .iter()
                    .map(|w| w.parse::<usize>().map_err(|_| f.err(format!("invalid position '{w}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let want = if slot == 2 { 2 } else { 1 };
                if a.len() != want {
                    return Err(f.err(format!("slot {slot} needs {want} a positions")));
                }
                let origin = clause_spans[clause - 1].0 - 1;
                let cl = &layout.clause;
                let span = match slot {
                    1 => (origin + cl.y1_at + 1, origin + cl.y1_at + layout.y1.len),
                    2 => (origin + cl.v_at + 1, origin + cl.y3_at),
                    _ => (origin + cl.y3_at + 1, origin + cl.y3_at + layout.y3.len),
                };
                slots.push(LiteralSlot { clause, slot, var, negated, span, t, f: fpos, a });
            }
            "link" => {
                let outer = f.num()?;
                let inner: usize = f.num()?;
                let var = f.keyed("var")?;
                f.expect("from")?;
                let from = (f.num()?, f.num()?);
                f.expect("to")?;
                let to = (f.num()?, f.num()?);
                f.expect("z")?;
                let z = Counts::new(f.num()?, f.num()?, f.num()?);
                f.done()?;
                links.push(VariableLink { outer, inner: (inner != 0).then_some(inner), var, from, to, z });
            }
            "const" => match f.word()? {
                "c" => c = Some(f.num()?),
                "per_clause" => per_clause = Some(f.num()?),
                other => return Err(f.err(format!("unknown constant '{other}'"))),
            },
            "expander" => {
                let var = f.keyed("var")?;
                let n = f.keyed("n")?;
                let d = f.keyed("d")?;
                f.expect("h")?;
                let h = match f.word()? {
                    "none" => None,
                    w => Some(w.parse::<Rational64>().map_err(|_| f.err(format!("invalid rational '{w}'")))?),
                };
                f.expect("method")?;
                let w = f.word()?;
                let method = ExpanderMethod::from_name(w).ok_or_else(|| f.err(format!("unknown method '{w}'")))?;
                f.done()?;
                expanders.push(ExpanderRecord { var, n, d, h, method });
            }
            "gap" => {
                gap = Some(GapParams {
                    d0: f.keyed("d0")?,
                    h0: f.keyed("h0")?,
                    c: 0,
                    eps0: f.keyed("eps0")?,
                    eps: f.keyed("eps")?,
                    threshold: f.keyed("threshold")?,
                });
                f.done()?;
            }
            other => return Err(f.err(format!("unknown record '{other}'"))),
        }
    }
    let missing = |what: &str| ReductionError::Map { line: 0, msg: format!("missing '{what}' record") };
    let (layout_name, layout_version) = name.ok_or_else(|| missing("layout"))?;
    let (n, m, p) = size.ok_or_else(|| missing("size"))?;
    let c = c.ok_or_else(|| missing("const c"))?;
    let per_clause = per_clause.ok_or_else(|| missing("const per_clause"))?;
    if slots.len() != 3 * clause_spans.len() {
        return Err(ReductionError::Map { line: 0, msg: "every clause needs three literal records".into() });
    }
    let clauses = slots
        .chunks(3)
        .enumerate()
        .map(|(i, s)| Clause::new([0, 1, 2].map(|h| Literal { var: s[h].var, negated: s[h].negated }), i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    let formula = CnfFormula::new(p, clauses)?;
    if let Some(g) = gap.as_mut() {
        g.c = c;
    }
    Ok(ReductionMap {
        layout_name,
        layout_version,
        formula,
        n,
        m,
        clause_spans,
        slots,
        links,
        per_clause,
        c,
        expanders,
        gap,
    })
}
