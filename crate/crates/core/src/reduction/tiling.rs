//! Exact tilings of a span by existing intervals.

use std::collections::BTreeSet;

use super::ReductionError;
use crate::model::{Counts, Interval};

/// Every distinct requirement sum over tilings of `[lo, hi]` by intervals
/// lying inside it. Empty when no tiling exists.
pub(crate) fn tiling_sums(
    intervals: &[(usize, usize, Counts)],
    lo: usize,
    hi: usize,
) -> Result<BTreeSet<Counts>, ReductionError> {
    if lo > hi {
        return Ok(BTreeSet::from([Counts::ZERO]));
    }
    let width = hi + 1 - lo;
    let mut starting: Vec<Vec<(usize, Counts)>> = vec![Vec::new(); width];
    for &(a, b, r) in intervals {
        if a >= lo && b <= hi {
            starting[a - lo].push((b - lo, r));
        }
    }
    // sums[k]: sums over tilings of positions lo + k ..= hi.
    let mut sums: Vec<BTreeSet<Counts>> = vec![BTreeSet::new(); width + 1];
    sums[width].insert(Counts::ZERO);
    for k in (0..width).rev() {
        let mut here = BTreeSet::new();
        for &(end, r) in &starting[k] {
            for &s in &sums[end + 1] {
                here.insert(s + r);
            }
        }
        sums[k] = here;
    }
    Ok(std::mem::take(&mut sums[0]))
}

/// Requirement sum of the intervals that exactly tile `[lo, hi]`, which
/// must be the same for every tiling.
pub fn partition_sum(intervals: &[Interval], lo: usize, hi: usize) -> Result<Counts, ReductionError> {
    let spans: Vec<(usize, usize, Counts)> = intervals.iter().map(|iv| (iv.lo, iv.hi, iv.req)).collect();
    let sums = tiling_sums(&spans, lo, hi)?;
    let mut it = sums.iter();
    match (it.next(), it.next()) {
        (Some(&s), None) => Ok(s),
        (None, _) => Err(ReductionError::NoTiling { lo, hi }),
        (Some(&a), Some(&b)) => Err(ReductionError::TilingsDisagree { lo, hi, a, b }),
    }
}
