//! Witness translation: truth assignment to coloring and back.

use super::layout::{clause_instance, gadget_layout, GadgetLayout, Template};
use super::map::{LiteralSlot, ReductionMap};
use super::ReductionError;
use crate::cnf::{eval, Assignment};
use crate::model::{count_colors, verify, Color, Coloring, Counts};

fn opposite(c: Color) -> Color {
    c.swap_bw()
}

/// Feasible template coloring in the positive frame with the requested
/// `a` and `t` outcomes.
fn pick(tpl: &Template, want: impl Fn(&Coloring) -> bool, what: &str) -> Result<Coloring, ReductionError> {
    tpl.colorings
        .iter()
        .find(|c| want(c))
        .cloned()
        .ok_or_else(|| ReductionError::Internal(format!("no template coloring for {what}")))
}

fn outstanding(req: Counts, have: &[Color]) -> [i64; 3] {
    let got = Counts::of(have);
    [0, 1, 2].map(|k| req.0[k] as i64 - got.0[k] as i64)
}

/// Colors `len` filler nodes, nearest the gadget first: opposites of the
/// gadget's non-RED nodes, then RED if the gadget lacks it, then whatever
/// counts remain.
fn fill_side(need: &mut [i64; 3], gadget: &[Color], len: usize) -> Vec<Color> {
    let mut wish: Vec<Color> = gadget.iter().filter(|&&c| c != Color::Red).map(|&c| opposite(c)).collect();
    wish.push(Color::Red);
    let mut out = Vec::with_capacity(len);
    for c in wish {
        if out.len() < len && need[c.index()] > 0 {
            need[c.index()] -= 1;
            out.push(c);
        }
    }
    fill_rest(need, &mut out, len);
    out
}

fn fill_rest(need: &mut [i64; 3], out: &mut Vec<Color>, len: usize) {
    for c in Color::ALL {
        while out.len() < len && need[c.index()] > 0 {
            need[c.index()] -= 1;
            out.push(c);
        }
    }
}

/// Colors the filler run between two clause intervals: mirrored opposites
/// of both side runs, the remaining counts in the center.
fn fill_middle(need: &mut [i64; 3], left: &[Color], right: &[Color], len: usize) -> Vec<Option<Color>> {
    let mut mid: Vec<Option<Color>> = vec![None; len];
    for (k, &c) in left.iter().enumerate().filter(|(_, c)| **c != Color::Red) {
        let o = opposite(c);
        if k < len && need[o.index()] > 0 {
            need[o.index()] -= 1;
            mid[k] = Some(o);
        }
    }
    for (k, &c) in right.iter().enumerate().filter(|(_, c)| **c != Color::Red) {
        let o = opposite(c);
        if k < len && mid[len - 1 - k].is_none() && need[o.index()] > 0 {
            need[o.index()] -= 1;
            mid[len - 1 - k] = Some(o);
        }
    }
    for slot in mid.iter_mut().filter(|s| s.is_none()) {
        if let Some(c) = Color::ALL.into_iter().find(|c| need[c.index()] > 0) {
            need[c.index()] -= 1;
            *slot = Some(c);
        }
    }
    mid
}

/// Colors the filler nodes `fill_lo..=fill_hi` given the clause intervals
/// reaching into the gadgets on their left and right and the requirement of
/// the interval over exactly the fillers.
fn fill_fillers(
    col: &mut [Option<Color>],
    fill_lo: usize,
    fill_hi: usize,
    left_iv: (usize, usize, Counts),
    right_iv: (usize, usize, Counts),
    whole: Counts,
) -> Result<(), ReductionError> {
    let at = |col: &[Option<Color>], p: usize| col[p - 1].expect("gadget node colored");
    let left_run: Vec<usize> = (fill_lo..=left_iv.1).collect();
    let right_run: Vec<usize> = (right_iv.0..=fill_hi).rev().collect();
    let left_gadget: Vec<Color> = (left_iv.0..fill_lo).rev().map(|p| at(col, p)).collect();
    let right_gadget: Vec<Color> = (fill_hi + 1..=right_iv.1).map(|p| at(col, p)).collect();
    let mut need_l = outstanding(left_iv.2, &left_gadget);
    let mut need_r = outstanding(right_iv.2, &right_gadget);
    if need_l.iter().chain(&need_r).any(|&x| x < 0) {
        return Err(ReductionError::Internal("gadget side of a clause interval over-full".into()));
    }
    let lc = fill_side(&mut need_l, &left_gadget, left_run.len());
    let rc = fill_side(&mut need_r, &right_gadget, right_run.len());
    if need_l.iter().chain(&need_r).any(|&x| x != 0) {
        return Err(ReductionError::Internal("filler side run cannot meet its counts".into()));
    }
    let mut need_m = outstanding(whole, &[lc.clone(), rc.clone()].concat());
    if need_m.iter().any(|&x| x < 0) {
        return Err(ReductionError::Internal("filler runs exceed the filler interval".into()));
    }
    let mid_lo = fill_lo + left_run.len();
    let mid_len = fill_hi + 1 - right_run.len() - mid_lo;
    let mid = fill_middle(&mut need_m, &lc, &rc, mid_len);
    for (p, c) in left_run.iter().zip(lc).chain(right_run.iter().zip(rc)) {
        col[p - 1] = Some(c);
    }
    for (k, c) in mid.into_iter().enumerate() {
        col[mid_lo + k - 1] = c;
    }
    Ok(())
}

/// Coloring of one clause block given literal polarities and the values of
/// the three variables.
pub(crate) fn color_clause(
    layout: &GadgetLayout,
    negated: [bool; 3],
    values: [bool; 3],
) -> Result<Coloring, ReductionError> {
    let cl = &layout.clause;
    let lit = [0, 1, 2].map(|h| values[h] != negated[h]);
    let mut col: Vec<Option<Color>> = vec![None; cl.len];
    let frame = |c: Coloring, neg: bool| if neg { c.swap_bw() } else { c };
    let red = |c: &Coloring, p: usize| c.at(p) == Color::Red;
    let black = |c: &Coloring, p: usize| c.at(p) == Color::Black;
    for (h, tpl, at) in [(0, &layout.y1, cl.y1_at), (2, &layout.y3, cl.y3_at)] {
        let (a, t, l) = (tpl.a[0], tpl.t, lit[h]);
        let c = pick(tpl, |c| red(c, a) == l && black(c, t) == l, "an outer literal")?;
        for (k, &x) in frame(c, negated[h]).colors().iter().enumerate() {
            col[at + k] = Some(x);
        }
    }
    let core = &layout.core;
    let (al, ar) = (core.a[0], core.a[1]);
    let want = if lit[1] {
        (true, true)
    } else if !lit[0] {
        (true, false)
    } else {
        (false, true)
    };
    let c = pick(core, |c| (red(c, al), red(c, ar)) == want && black(c, core.t) == lit[1], "the middle literal")?;
    for (k, &x) in frame(c, negated[1]).colors().iter().enumerate() {
        col[cl.core_at + k] = Some(x);
    }
    let iv = &cl.intervals;
    fill_fillers(&mut col, cl.v_at + 1, cl.core_at, iv[0], iv[1], iv[2].2)?;
    fill_fillers(&mut col, cl.w_at + 1, cl.y3_at, iv[3], iv[4], iv[5].2)?;
    col.into_iter()
        .collect::<Option<Vec<Color>>>()
        .map(Coloring::new)
        .ok_or_else(|| ReductionError::Internal("uncolored node in clause block".into()))
}

/// Feasible coloring of the reduced instance for a satisfying assignment.
pub fn encode_coloring(map: &ReductionMap, assignment: &Assignment) -> Result<Coloring, ReductionError> {
    let p = map.formula.num_vars();
    if assignment.len() != p {
        return Err(ReductionError::AssignmentLength { expected: p, found: assignment.len() });
    }
    let unsat = eval(&map.formula, assignment);
    if !unsat.is_empty() {
        return Err(ReductionError::NotSatisfying(unsat));
    }
    let layout = gadget_layout()?;
    let mut colors = Vec::with_capacity(map.n);
    for (i, clause) in map.formula.clauses().iter().enumerate() {
        let negated = clause.lits().map(|l| l.negated);
        let values = clause.lits().map(|l| assignment.value(l.var));
        let block = color_clause(layout, negated, values)?;
        let report = verify(&clause_instance(layout, negated), &block)?;
        if !report.is_feasible() {
            return Err(ReductionError::Internal(format!(
                "clause {} block violates intervals {:?}",
                i + 1,
                report.violated
            )));
        }
        colors.extend(block.into_colors());
    }
    let col = Coloring::new(colors);
    if col.len() != map.n {
        return Err(ReductionError::LengthMismatch { expected: map.n, found: col.len() });
    }
    for l in &map.links {
        let (e, t) = (map.slot(l.from.0, l.from.1), map.slot(l.to.0, l.to.1));
        if e.f + 1 < t.t && count_colors(&col, e.f + 1, t.t - 1)? != l.z {
            return Err(ReductionError::Internal(format!("nodes inside link {} do not tally to z", l.outer)));
        }
        if col.at(t.t) == col.at(e.f) {
            return Err(ReductionError::Internal(format!("link {} endpoints share a color", l.outer)));
        }
    }
    Ok(col)
}

/// Value displayed by an occurrence: `t` BLACK and `f` not BLACK means
/// true, the reverse false, anything else nothing.
pub fn slot_value(slot: &LiteralSlot, col: &Coloring) -> Option<bool> {
    match (col.at(slot.t) == Color::Black, col.at(slot.f) == Color::Black) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

/// Reads each variable from its occurrences' `t` nodes (BLACK means true);
/// all occurrences must agree. Variables without occurrences are false.
pub fn extract_assignment(map: &ReductionMap, col: &Coloring) -> Result<Assignment, ReductionError> {
    if col.len() != map.n {
        return Err(ReductionError::LengthMismatch { expected: map.n, found: col.len() });
    }
    let mut seen: Vec<Option<bool>> = vec![None; map.formula.num_vars()];
    for s in &map.slots {
        let v = col.at(s.t) == Color::Black;
        let slot = &mut seen[s.var as usize - 1];
        match *slot {
            Some(prev) if prev != v => return Err(ReductionError::InconsistentOccurrences { var: s.var }),
            _ => *slot = Some(v),
        }
    }
    Ok(Assignment::new(seen.into_iter().map(|v| v.unwrap_or(false)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{planted_random_3sat, CnfFormula};
    use crate::reduction::reduce;

    #[test]
    fn all_true_single_clause() {
        let f = CnfFormula::from_triples(3, &[[1, 2, 3]]).unwrap();
        let (inst, map) = reduce(&f).unwrap();
        let col = encode_coloring(&map, &Assignment::all(3, true)).unwrap();
        assert!(verify(&inst, &col).unwrap().is_feasible());
        assert_eq!(col.at(map.slot(1, 1).a[0]), Color::Red);
        assert_eq!(col.at(map.slot(1, 1).t), Color::Black);
    }

    #[test]
    fn falsifying_assignment_rejected() {
        let f = CnfFormula::from_triples(3, &[[1, 2, 3]]).unwrap();
        let (_, map) = reduce(&f).unwrap();
        assert_eq!(
            encode_coloring(&map, &Assignment::all(3, false)).unwrap_err(),
            ReductionError::NotSatisfying(vec![1])
        );
    }

    #[test]
    fn planted_round_trip() {
        for seed in 0..5 {
            let (f, plant) = planted_random_3sat(6, 8, seed).unwrap();
            let (inst, map) = reduce(&f).unwrap();
            let col = encode_coloring(&map, &plant).unwrap();
            assert!(verify(&inst, &col).unwrap().is_feasible());
            let back = extract_assignment(&map, &col).unwrap();
            for s in &map.slots {
                assert_eq!(back.value(s.var), plant.value(s.var));
            }
            assert!(eval(&f, &back).is_empty());
        }
    }

    #[test]
    fn disagreeing_occurrences_rejected() {
        let f = CnfFormula::from_triples(4, &[[1, 2, 3], [1, 2, 4]]).unwrap();
        let (_, map) = reduce(&f).unwrap();
        let mut col = encode_coloring(&map, &Assignment::all(4, true)).unwrap();
        let t = map.slot(2, 1).t;
        col.set(t, Color::White);
        assert_eq!(extract_assignment(&map, &col).unwrap_err(), ReductionError::InconsistentOccurrences { var: 1 });
    }
}
