//! Exhaustive scans over all 3^n colorings.

use super::SolverError;
use crate::model::{Color, Coloring, Counts, Instance};

pub const BRUTE_FORCE_MAX_N: usize = 15;

/// Depth-first walk over all colorings in lexicographic order, calling
/// `leaf` with the number of satisfied intervals at each complete coloring.
fn scan(inst: &Instance, mut leaf: impl FnMut(&[usize], usize)) -> Result<(), SolverError> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(SolverError::Capacity { n, max: BRUTE_FORCE_MAX_N });
    }
    // Intervals grouped by right endpoint so they are checked once complete.
    let mut ending: Vec<Vec<(usize, Counts)>> = vec![Vec::new(); n];
    for iv in inst.intervals() {
        ending[iv.hi - 1].push((iv.lo - 1, iv.req));
    }
    let mut colors = vec![0usize; n];
    let mut prefix = vec![[0u32; 3]; n + 1];
    fn rec(
        p: usize,
        sat: usize,
        colors: &mut [usize],
        prefix: &mut [[u32; 3]],
        ending: &[Vec<(usize, Counts)>],
        leaf: &mut dyn FnMut(&[usize], usize),
    ) {
        if p == colors.len() {
            leaf(colors, sat);
            return;
        }
        for c in 0..3 {
            colors[p] = c;
            let mut row = prefix[p];
            row[c] += 1;
            prefix[p + 1] = row;
            let ok = ending[p].iter().filter(|(lo, req)| (0..3).all(|k| row[k] - prefix[*lo][k] == req.0[k])).count();
            rec(p + 1, sat + ok, colors, prefix, ending, leaf);
        }
    }
    rec(0, 0, &mut colors, &mut prefix, &ending, &mut leaf);
    Ok(())
}

fn to_coloring(colors: &[usize]) -> Coloring {
    Coloring::new(colors.iter().map(|&c| Color::from_index(c)).collect())
}

/// Exact maximum number of satisfied intervals over all 3^n colorings, with
/// the lexicographically first maximizer.
pub fn max_satisfy_brute(inst: &Instance) -> Result<(Coloring, usize), SolverError> {
    let mut best: Option<(Vec<usize>, usize)> = None;
    scan(inst, |colors, sat| {
        if best.as_ref().is_none_or(|(_, b)| sat > *b) {
            best = Some((colors.to_vec(), sat));
        }
    })?;
    let (colors, count) = best.expect("at least one coloring exists");
    Ok((to_coloring(&colors), count))
}

/// Every feasible coloring by raw scan, in lexicographic order.
pub fn scan_feasible_colorings(inst: &Instance) -> Result<Vec<Coloring>, SolverError> {
    let m = inst.len();
    let mut out = Vec::new();
    scan(inst, |colors, sat| {
        if sat == m {
            out.push(to_coloring(colors));
        }
    })?;
    Ok(out)
}
