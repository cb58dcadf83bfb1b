//! Gadget templates and their inference by constrained search.
//!
//! Requirement triples are stored for the positive-literal variant of every
//! template; a negated occurrence uses the BLACK/WHITE swap. In that frame
//! every literal template satisfies the same contract: exactly one of `t`
//! and `f` is BLACK, and a RED `a` node forces `t` BLACK.

use std::sync::OnceLock;

use super::tiling::tiling_sums;
use super::ReductionError;
use crate::model::{Color, Coloring, Counts, Instance};
use crate::solver::{enumerate_colorings, enumerate_projections, Budget};

pub const LAYOUT_NAME: &str = "icc3sat";
pub const LAYOUT_VERSION: u32 = 1;

/// Requirements of the five inner literal intervals and of the covering one.
const LITERAL_REQS: [[u32; 3]; 5] = [[1, 1, 1], [1, 1, 1], [1, 0, 1], [1, 1, 2], [0, 1, 0]];
const LITERAL_WHOLE: [u32; 3] = [2, 3, 3];
const LITERAL_LEN: usize = 8;
/// Interval over `{f', t2, t''}` of the y2 core and the interval over the whole core.
const CORE_LINK: [u32; 3] = [0, 2, 1];
const CORE_WHOLE: [u32; 3] = [4, 7, 7];
const CLAUSE_REQS: [[u32; 3]; 6] = [[1, 2, 2], [1, 2, 2], [1, 6, 6], [1, 3, 3], [1, 2, 2], [1, 7, 7]];
const LEFT_FILLERS: usize = 13;
const RIGHT_FILLERS: usize = 15;

/// A literal gadget: intervals relative to the block start (1-based) with
/// positive-variant requirements, its special nodes and its feasible
/// positive-variant colorings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub len: usize,
    pub intervals: Vec<(usize, usize, Counts)>,
    pub t: usize,
    pub f: usize,
    /// One `a` node, or `a_l` and `a_r` for the middle literal.
    pub a: Vec<usize>,
    pub colorings: Vec<Coloring>,
}

impl Template {
    pub fn requirements(&self, negated: bool) -> impl Iterator<Item = (usize, usize, Counts)> + '_ {
        self.intervals.iter().map(move |&(lo, hi, r)| (lo, hi, if negated { r.swap_bw() } else { r }))
    }

    pub fn instance(&self, negated: bool) -> Instance {
        Instance::from_spans(self.len, self.requirements(negated)).expect("template spans lie in the block")
    }
}

/// Offsets (0-based) of the parts of a clause block and the clause intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseLayout {
    pub len: usize,
    pub y1_at: usize,
    pub v_at: usize,
    pub core_at: usize,
    pub w_at: usize,
    pub y3_at: usize,
    /// Clause intervals, block-relative and 1-based, in order I1..I6.
    pub intervals: Vec<(usize, usize, Counts)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLayout {
    pub name: &'static str,
    pub version: u32,
    pub y1: Template,
    pub y3: Template,
    pub core: Template,
    pub clause: ClauseLayout,
}

impl GadgetLayout {
    /// Intervals attributed to one clause: three literal gadgets and the
    /// clause intervals.
    pub fn intervals_per_clause(&self) -> usize {
        self.y1.intervals.len() + self.core.intervals.len() + self.y3.intervals.len() + self.clause.intervals.len()
    }
}

static LAYOUT: OnceLock<Result<GadgetLayout, ReductionError>> = OnceLock::new();

/// The validated layout, inferred once per process.
pub fn gadget_layout() -> Result<&'static GadgetLayout, ReductionError> {
    LAYOUT.get_or_init(infer_gadget_layouts).as_ref().map_err(Clone::clone)
}

fn spans_of(starts: &[usize]) -> Vec<(usize, usize, Counts)> {
    starts
        .iter()
        .zip(LITERAL_REQS)
        .map(|(&s, r)| (s, s + r.iter().sum::<u32>() as usize - 1, Counts(r)))
        .chain(std::iter::once((1, LITERAL_LEN, Counts(LITERAL_WHOLE))))
        .collect()
}

/// Properties of a literal gadget in the positive frame: `t`/`f` exactly one
/// BLACK, RED `a` forces BLACK `t`, and every (literal, variable) outcome
/// needed by the encoder occurs.
fn literal_contract(colorings: &[Coloring], t: usize, f: usize, a: usize) -> Result<(), String> {
    for c in colorings {
        if (c.at(t) == Color::Black) == (c.at(f) == Color::Black) {
            return Err(format!("t/f not exactly one BLACK in {}", c.letters()));
        }
        if c.at(a) == Color::Red && c.at(t) != Color::Black {
            return Err(format!("RED a without BLACK t in {}", c.letters()));
        }
    }
    for (a_red, t_black) in [(true, true), (false, true), (false, false)] {
        if !colorings.iter().any(|c| (c.at(a) == Color::Red) == a_red && (c.at(t) == Color::Black) == t_black) {
            return Err(format!("no outcome with a RED={a_red}, t BLACK={t_black}"));
        }
    }
    Ok(())
}

fn check_literal(tpl: &Template, name: &str) -> Result<(), ReductionError> {
    let bad = |msg: String| ReductionError::Layout(format!("{name}: {msg}"));
    for negated in [false, true] {
        let found =
            enumerate_colorings(&tpl.instance(negated), 3usize.pow(tpl.len as u32)).map_err(|e| bad(e.to_string()))?;
        if found.len() != 3 {
            return Err(bad(format!("{} feasible colorings, expected 3", found.len())));
        }
        let frame: Vec<Coloring> = if negated { found.iter().map(Coloring::swap_bw).collect() } else { found };
        literal_contract(&frame, tpl.t, tpl.f, tpl.a[0]).map_err(bad)?;
    }
    Ok(())
}

fn mirror(tpl: &Template) -> Template {
    let m = |p: usize| tpl.len + 1 - p;
    let intervals: Vec<_> = tpl.intervals.iter().map(|&(lo, hi, r)| (m(hi), m(lo), r.swap_bw())).collect();
    let mut y3 =
        Template { len: tpl.len, intervals, t: m(tpl.f), f: m(tpl.t), a: vec![m(tpl.a[0])], colorings: Vec::new() };
    y3.colorings = enumerate_colorings(&y3.instance(false), 3).unwrap_or_default();
    y3
}

/// `[y3-like block][t2][y1-like block][f2]`, requirements in the positive
/// frame (the BLACK/WHITE swap of the negated-literal table).
fn assemble_core(y1: &Template, y3: &Template) -> Result<Template, ReductionError> {
    let l = y3.len;
    let len = 2 * l + 2;
    let t2 = l + 1;
    let mut intervals: Vec<(usize, usize, Counts)> = Vec::new();
    // Left block uses the negated-literal y3 table, right block the
    // positive-literal y1 table; both swap into the positive frame.
    intervals.extend(y3.requirements(true).map(|(lo, hi, r)| (lo, hi, r.swap_bw())));
    intervals.extend(y1.requirements(false).map(|(lo, hi, r)| (lo + t2, hi + t2, r.swap_bw())));
    intervals.push((t2 - 1, t2 + 1, Counts(CORE_LINK).swap_bw()));
    intervals.push((1, len, Counts(CORE_WHOLE).swap_bw()));
    let mut core = Template { len, intervals, t: t2, f: len, a: vec![y3.a[0], t2 + y1.a[0]], colorings: Vec::new() };
    let bad = |msg: String| ReductionError::Layout(format!("y2 core: {msg}"));
    for negated in [false, true] {
        let found = enumerate_colorings(&core.instance(negated), 1 << 12).map_err(|e| bad(e.to_string()))?;
        let frame: Vec<Coloring> = if negated { found.iter().map(Coloring::swap_bw).collect() } else { found };
        let (al, ar) = (core.a[0], core.a[1]);
        for c in &frame {
            if (c.at(core.t) == Color::Black) == (c.at(core.f) == Color::Black) {
                return Err(bad(format!("t2/f2 not exactly one BLACK in {}", c.letters())));
            }
            if c.at(al) == Color::Red && c.at(ar) == Color::Red && c.at(core.t) != Color::Black {
                return Err(bad(format!("RED a-pair without BLACK t2 in {}", c.letters())));
            }
        }
        for want in [(true, true, true), (true, false, false), (false, true, false)] {
            let hit = frame
                .iter()
                .any(|c| (c.at(al) == Color::Red, c.at(ar) == Color::Red, c.at(core.t) == Color::Black) == want);
            if !hit {
                return Err(bad(format!("no outcome with (a_l RED, a_r RED, t2 BLACK) = {want:?}")));
            }
        }
        if !negated {
            core.colorings = frame;
        }
    }
    Ok(core)
}

/// Places the clause intervals: each spans its required length, takes the
/// fewest gadget nodes that still include the gadget's `a` node, and fills
/// the rest with filler nodes adjacent to the gadget.
fn assemble_clause(y1: &Template, core: &Template, y3: &Template) -> ClauseLayout {
    let y1_at = 0;
    let v_at = y1_at + y1.len;
    let core_at = v_at + LEFT_FILLERS;
    let w_at = core_at + core.len;
    let y3_at = w_at + RIGHT_FILLERS;
    let len = y3_at + y3.len;
    let size = |k: usize| CLAUSE_REQS[k].iter().sum::<u32>() as usize;
    let r = |k: usize| Counts(CLAUSE_REQS[k]);
    // Gadget on the left of the fillers: starts at its `a` node.
    let left_gadget = |k: usize, at: usize, a: usize| {
        let lo = at + a;
        (lo, lo + size(k) - 1, r(k))
    };
    // Gadget on the right of the fillers: prefix up to `a`.
    let right_gadget = |k: usize, at: usize, a: usize| {
        let hi = at + a;
        (hi + 1 - size(k), hi, r(k))
    };
    let intervals = vec![
        left_gadget(0, y1_at, y1.a[0]),
        right_gadget(1, core_at, core.a[0]),
        (v_at + 1, v_at + LEFT_FILLERS, r(2)),
        left_gadget(3, core_at, core.a[1]),
        right_gadget(4, y3_at, y3.a[0]),
        (w_at + 1, w_at + RIGHT_FILLERS, r(5)),
    ];
    ClauseLayout { len, y1_at, v_at, core_at, w_at, y3_at, intervals }
}

/// Block instance for one clause with the given literal polarities.
pub(crate) fn clause_instance(layout: &GadgetLayout, negated: [bool; 3]) -> Instance {
    let cl = &layout.clause;
    let parts = [
        (&layout.y1, cl.y1_at, negated[0]),
        (&layout.core, cl.core_at, negated[1]),
        (&layout.y3, cl.y3_at, negated[2]),
    ];
    let mut spans: Vec<(usize, usize, Counts)> = Vec::new();
    for (tpl, at, neg) in parts {
        spans.extend(tpl.requirements(neg).map(|(lo, hi, r)| (lo + at, hi + at, r)));
    }
    spans.extend(cl.intervals.iter().copied());
    Instance::from_spans(cl.len, spans).expect("clause intervals lie in the block")
}

/// Every feasible clause coloring with `a1` and `a3` non-RED has both
/// `a2` nodes RED; checked on the projection to the `a` nodes.
fn check_clause(layout: &GadgetLayout) -> Result<(), ReductionError> {
    let cl = &layout.clause;
    let a_nodes = [
        cl.y1_at + layout.y1.a[0],
        cl.core_at + layout.core.a[0],
        cl.core_at + layout.core.a[1],
        cl.y3_at + layout.y3.a[0],
    ];
    for mask in 0..8u8 {
        let negated = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
        let inst = clause_instance(layout, negated);
        let proj = enumerate_projections(&inst, &a_nodes, Budget::unlimited())
            .map_err(|e| ReductionError::Layout(format!("clause: {e}")))?;
        for p in proj {
            let red = p.iter().map(|&c| c == Color::Red).collect::<Vec<_>>();
            if !red[0] && !red[3] && !(red[1] && red[2]) {
                return Err(ReductionError::Layout(format!(
                    "clause {negated:?}: a nodes {:?} break the clause property",
                    p.iter().map(|c| c.letter()).collect::<String>()
                )));
            }
        }
        for values in 0..8u8 {
            let vals = [values & 1 != 0, values & 2 != 0, values & 4 != 0];
            let lits = [0, 1, 2].map(|h| vals[h] != negated[h]);
            if !lits.iter().any(|&l| l) {
                continue;
            }
            let col = super::witness::color_clause(layout, negated, vals)
                .map_err(|e| ReductionError::Layout(format!("clause {negated:?} values {vals:?}: {e}")))?;
            let report = crate::model::verify(&inst, &col).expect("block length");
            if !report.is_feasible() {
                return Err(ReductionError::Layout(format!(
                    "clause {negated:?} values {vals:?}: encoder violates {:?}",
                    report.violated
                )));
            }
        }
    }
    Ok(())
}

/// Tiling of `[lo, hi]` by the given intervals exists (vacuous when empty).
fn tileable(intervals: &[(usize, usize, Counts)], lo: usize, hi: usize) -> bool {
    lo > hi || tiling_sums(intervals, lo, hi).is_ok_and(|s| !s.is_empty())
}

/// Searches the first-literal gadget over placements of its five inner
/// intervals (lexicographic in start positions), the `a`/`f` pair among the
/// last two nodes and then `t`. The first candidate whose derived third
/// literal, middle-literal core and clause assembly all validate wins.
pub fn infer_gadget_layouts() -> Result<GadgetLayout, ReductionError> {
    let n = LITERAL_LEN;
    let max_start: Vec<usize> = LITERAL_REQS.iter().map(|r| n + 1 - r.iter().sum::<u32>() as usize).collect();
    let mut starts = vec![1usize; LITERAL_REQS.len()];
    let mut last_err = ReductionError::Layout("no candidate layout".into());
    loop {
        let intervals = spans_of(&starts);
        let single = intervals[4].0;
        let isolated = intervals[..4].iter().all(|&(lo, hi, _)| single < lo || single > hi);
        if isolated {
            let probe =
                Template { len: n, intervals: intervals.clone(), t: 1, f: 2, a: vec![3], colorings: Vec::new() };
            let found = enumerate_colorings(&probe.instance(false), 3usize.pow(n as u32)).unwrap_or_default();
            if found.len() == 3 {
                for (a, f) in [(n - 1, n), (n, n - 1)] {
                    for t in (1..=n).filter(|&t| t != a && t != f) {
                        if literal_contract(&found, t, f, a).is_err()
                            || !tileable(&intervals[..5], 1, t - 1)
                            || !tileable(&intervals[..5], f + 1, n)
                        {
                            continue;
                        }
                        let y1 = Template {
                            len: n,
                            intervals: intervals.clone(),
                            t,
                            f,
                            a: vec![a],
                            colorings: found.clone(),
                        };
                        match assemble(y1) {
                            Ok(layout) => return Ok(layout),
                            Err(e) => last_err = e,
                        }
                    }
                }
            }
        }
        // Next start vector in lexicographic order.
        let mut k = starts.len();
        loop {
            if k == 0 {
                return Err(last_err);
            }
            k -= 1;
            if starts[k] < max_start[k] {
                starts[k] += 1;
                for s in &mut starts[k + 1..] {
                    *s = 1;
                }
                break;
            }
        }
    }
}

fn assemble(y1: Template) -> Result<GadgetLayout, ReductionError> {
    check_literal(&y1, "y1")?;
    let y3 = mirror(&y1);
    check_literal(&y3, "y3")?;
    let core = assemble_core(&y1, &y3)?;
    let clause = assemble_clause(&y1, &core, &y3);
    let layout = GadgetLayout { name: LAYOUT_NAME, version: LAYOUT_VERSION, y1, y3, core, clause };
    for &(lo, hi, r) in &layout.clause.intervals {
        if r.total() as usize != hi + 1 - lo {
            return Err(ReductionError::Layout(format!("clause interval [{lo},{hi}] inconsistent")));
        }
    }
    check_clause(&layout)?;
    Ok(layout)
}
