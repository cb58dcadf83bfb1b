//! Clause blocks, variable intervals and the full reduction.

use super::layout::{gadget_layout, GadgetLayout};
use super::map::{LiteralSlot, ReductionMap, VariableLink};
use super::tiling::partition_sum;
use super::ReductionError;
use crate::cnf::{Clause, CnfFormula};
use crate::model::{Counts, Instance, Interval};

/// One clause's nodes and intervals at absolute positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseBlock {
    pub span: (usize, usize),
    /// Gadget intervals (first, middle, third literal) then clause intervals.
    pub intervals: Vec<(usize, usize, Counts)>,
    pub slots: Vec<LiteralSlot>,
}

/// Instantiates the templates for clause `index` (1-based) with its first
/// node right after `origin`. The first literal's requirements swap when
/// negated, the other two when positive; in the stored positive frame this
/// is a swap exactly for negated occurrences.
pub fn build_clause_block(clause: &Clause, index: usize, layout: &GadgetLayout, origin: usize) -> ClauseBlock {
    let cl = &layout.clause;
    let lits = clause.lits();
    let parts = [(&layout.y1, cl.y1_at), (&layout.core, cl.core_at), (&layout.y3, cl.y3_at)];
    let mut intervals = Vec::with_capacity(layout.intervals_per_clause());
    let mut slots = Vec::with_capacity(3);
    for (h, ((tpl, at), lit)) in parts.into_iter().zip(lits).enumerate() {
        let base = origin + at;
        intervals.extend(tpl.requirements(lit.negated).map(|(lo, hi, r)| (lo + base, hi + base, r)));
        let span = match h {
            0 => (base + 1, base + tpl.len),
            1 => (origin + cl.v_at + 1, origin + cl.y3_at),
            _ => (base + 1, base + tpl.len),
        };
        slots.push(LiteralSlot {
            clause: index,
            slot: h + 1,
            var: lit.var,
            negated: lit.negated,
            span,
            t: base + tpl.t,
            f: base + tpl.f,
            a: tpl.a.iter().map(|a| base + a).collect(),
        });
    }
    intervals.extend(cl.intervals.iter().map(|&(lo, hi, r)| (lo + origin, hi + origin, r)));
    ClauseBlock { span: (origin + 1, origin + cl.len), intervals, slots }
}

/// Every pair of occurrences of the same variable, earlier one first,
/// grouped by variable in ascending order.
pub fn clique_pairs(slots: &[LiteralSlot]) -> Vec<(usize, usize)> {
    let mut by_var: Vec<(u32, usize)> = slots.iter().enumerate().map(|(k, s)| (s.var, k)).collect();
    by_var.sort();
    let mut pairs = Vec::new();
    for group in by_var.chunk_by(|a, b| a.0 == b.0) {
        for (x, &(_, i)) in group.iter().enumerate() {
            for &(_, j) in &group[x + 1..] {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Link records and the interval spans they add.
pub type Links = (Vec<VariableLink>, Vec<(usize, usize, Counts)>);

/// Variable intervals for the given occurrence pairs (indices into
/// `slots`). Each outer interval runs from the earlier occurrence's `f` node
/// to the later one's `t` node and needs the tiled sum of the nodes between
/// plus one BLACK and one WHITE; with `inner`, the interval over exactly the
/// nodes between is added too (omitted when no node lies between). Ids are
/// numbered from `base.len() + 1`.
pub fn build_links(
    slots: &[LiteralSlot],
    base: &[Interval],
    pairs: &[(usize, usize)],
    inner: bool,
) -> Result<Links, ReductionError> {
    let mut links = Vec::with_capacity(pairs.len());
    let mut spans = Vec::with_capacity(pairs.len() * (1 + inner as usize));
    let mut next_id = base.len() + 1;
    for &(i, j) in pairs {
        let (e, l) = if slots[i].t < slots[j].t { (&slots[i], &slots[j]) } else { (&slots[j], &slots[i]) };
        if e.var != l.var {
            return Err(ReductionError::Internal(format!("link between variables {} and {}", e.var, l.var)));
        }
        let z = partition_sum(base, e.f + 1, l.t - 1)?;
        let outer = next_id;
        spans.push((e.f, l.t, z + Counts::new(0, 1, 1)));
        next_id += 1;
        let inner_id = if inner && e.f + 1 < l.t {
            spans.push((e.f + 1, l.t - 1, z));
            next_id += 1;
            Some(next_id - 1)
        } else {
            None
        };
        links.push(VariableLink {
            outer,
            inner: inner_id,
            var: e.var,
            from: (e.clause, e.slot),
            to: (l.clause, l.slot),
            z,
        });
    }
    Ok((links, spans))
}

/// Clique-fashion variable intervals over all same-variable pairs.
pub fn build_variable_intervals(slots: &[LiteralSlot], base: &[Interval]) -> Result<Links, ReductionError> {
    build_links(slots, base, &clique_pairs(slots), false)
}

fn blocks(cnf: &CnfFormula, layout: &GadgetLayout) -> (Vec<ClauseBlock>, usize) {
    let len = layout.clause.len;
    let blocks: Vec<ClauseBlock> =
        cnf.clauses().iter().enumerate().map(|(i, c)| build_clause_block(c, i + 1, layout, i * len)).collect();
    (blocks, cnf.num_clauses() * len)
}

/// Reduction with variable links chosen by `pairs_for`, which receives the
/// literal slots and returns occurrence pairs.
pub fn reduce_with_links(
    cnf: &CnfFormula,
    pairs_for: impl FnOnce(&[LiteralSlot]) -> Vec<(usize, usize)>,
    inner: bool,
) -> Result<(Instance, ReductionMap), ReductionError> {
    let layout = gadget_layout()?;
    let (blocks, n) = blocks(cnf, layout);
    let mut spans: Vec<(usize, usize, Counts)> = Vec::new();
    let mut slots = Vec::new();
    let mut clause_spans = Vec::new();
    for b in blocks {
        spans.extend(b.intervals);
        slots.extend(b.slots);
        clause_spans.push(b.span);
    }
    let base = Instance::from_spans(n, spans.iter().copied())?;
    let pairs = pairs_for(&slots);
    let (links, link_spans) = build_links(&slots, base.intervals(), &pairs, inner)?;
    spans.extend(link_spans);
    let inst = Instance::from_spans(n, spans)?;
    let per_clause = layout.intervals_per_clause();
    let map = ReductionMap {
        layout_name: layout.name.to_string(),
        layout_version: layout.version,
        formula: cnf.clone(),
        n,
        m: inst.len(),
        clause_spans,
        slots,
        links,
        per_clause,
        c: per_clause,
        expanders: Vec::new(),
        gap: None,
    };
    Ok((inst, map))
}

/// Clause blocks in clause order followed by clique-fashion variable intervals.
pub fn reduce(cnf: &CnfFormula) -> Result<(Instance, ReductionMap), ReductionError> {
    reduce_with_links(cnf, clique_pairs, false)
}
