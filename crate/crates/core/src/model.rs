//! Instances, colorings and exact verification.
//!
//! Positions are 1-based and intervals are closed on both ends. Requirement
//! triples are always stored in (RED, BLACK, WHITE) order.

use std::fmt;
use std::ops::{Add, AddAssign};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("interval ids must be contiguous from 1: expected {expected}, found {found}")]
    NonContiguousId { expected: usize, found: usize },
    #[error("interval {id} spans [{lo}, {hi}] outside of [1, {n}]")]
    OutOfRange { id: usize, lo: usize, hi: usize, n: usize },
    #[error("coloring has {found} positions but the instance has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("color code {0} is outside the alphabet {{1, 2, 3}}")]
    BadColorCode(u32),
}

/// The three colors. The numeric codes are part of every file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Color {
    Red = 1,
    Black = 2,
    White = 3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Black, Color::White];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u32) -> Result<Self, ModelError> {
        match code {
            1 => Ok(Color::Red),
            2 => Ok(Color::Black),
            3 => Ok(Color::White),
            other => Err(ModelError::BadColorCode(other)),
        }
    }

    /// Zero-based slot in a requirement triple.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// Exchanges BLACK and WHITE; RED is fixed.
    pub fn swap_bw(self) -> Self {
        match self {
            Color::Red => Color::Red,
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Black => 'B',
            Color::White => 'W',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Color::Red => "RED",
            Color::Black => "BLACK",
            Color::White => "WHITE",
        };
        f.write_str(name)
    }
}

/// A (RED, BLACK, WHITE) count triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Counts(pub [u32; 3]);

impl Counts {
    pub const ZERO: Counts = Counts([0, 0, 0]);

    pub fn new(red: u32, black: u32, white: u32) -> Self {
        Counts([red, black, white])
    }

    pub fn red(&self) -> u32 {
        self.0[0]
    }

    pub fn black(&self) -> u32 {
        self.0[1]
    }

    pub fn white(&self) -> u32 {
        self.0[2]
    }

    pub fn get(&self, color: Color) -> u32 {
        self.0[color.index()]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn swap_bw(self) -> Self {
        Counts([self.0[0], self.0[2], self.0[1]])
    }

    pub fn bump(&mut self, color: Color) {
        self.0[color.index()] += 1;
    }

    /// Componentwise `self - other` as signed values.
    pub fn delta(&self, other: &Counts) -> [i64; 3] {
        [0, 1, 2].map(|i| self.0[i] as i64 - other.0[i] as i64)
    }

    pub fn of<'a>(colors: impl IntoIterator<Item = &'a Color>) -> Self {
        let mut c = Counts::ZERO;
        for &col in colors {
            c.bump(col);
        }
        c
    }
}

impl Add for Counts {
    type Output = Counts;
    fn add(self, rhs: Counts) -> Counts {
        Counts([0, 1, 2].map(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        *self = *self + rhs;
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub id: usize,
    pub lo: usize,
    pub hi: usize,
    pub req: Counts,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.lo <= pos && pos <= self.hi
    }

    pub fn is_consistent(&self) -> bool {
        self.req.total() as usize == self.len()
    }
}

/// An interval constrained 3-coloring instance over positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    n: usize,
    intervals: Vec<Interval>,
}

impl Instance {
    pub const COLORS: usize = 3;

    pub fn new(n: usize, intervals: Vec<Interval>) -> Result<Self, ModelError> {
        for (i, iv) in intervals.iter().enumerate() {
            if iv.id != i + 1 {
                return Err(ModelError::NonContiguousId { expected: i + 1, found: iv.id });
            }
            if iv.lo == 0 || iv.lo > iv.hi || iv.hi > n {
                return Err(ModelError::OutOfRange { id: iv.id, lo: iv.lo, hi: iv.hi, n });
            }
        }
        Ok(Instance { n, intervals })
    }

    /// Builds an instance from spans, numbering intervals in the given order.
    pub fn from_spans(n: usize, spans: impl IntoIterator<Item = (usize, usize, Counts)>) -> Result<Self, ModelError> {
        let intervals =
            spans.into_iter().enumerate().map(|(i, (lo, hi, req))| Interval { id: i + 1, lo, hi, req }).collect();
        Instance::new(n, intervals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, id: usize) -> Option<&Interval> {
        id.checked_sub(1).and_then(|i| self.intervals.get(i))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The same instance with BLACK and WHITE exchanged in every requirement.
    pub fn swap_bw(&self) -> Instance {
        Instance {
            n: self.n,
            intervals: self.intervals.iter().map(|iv| Interval { req: iv.req.swap_bw(), ..iv.clone() }).collect(),
        }
    }
}

/// A total assignment of colors to positions `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn uniform(n: usize, color: Color) -> Self {
        Coloring(vec![color; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Color at the 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Color {
        self.0[pos - 1]
    }

    pub fn set(&mut self, pos: usize, color: Color) {
        self.0[pos - 1] = color;
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn into_colors(self) -> Vec<Color> {
        self.0
    }

    pub fn swap_bw(&self) -> Coloring {
        Coloring(self.0.iter().map(|c| c.swap_bw()).collect())
    }

    /// Compact `RBW` string, used in diagnostics and tests.
    pub fn letters(&self) -> String {
        self.0.iter().map(|c| c.letter()).collect()
    }
}

impl From<Vec<Color>> for Coloring {
    fn from(v: Vec<Color>) -> Self {
        Coloring(v)
    }
}

/// Per-color prefix sums over a coloring, for O(1) interval counts.
#[derive(Debug, Clone)]
pub struct ColorPrefix {
    sums: Vec<[u32; 3]>,
}

impl ColorPrefix {
    pub fn new(col: &Coloring) -> Self {
        let mut sums = Vec::with_capacity(col.len() + 1);
        let mut acc = [0u32; 3];
        sums.push(acc);
        for c in col.colors() {
            acc[c.index()] += 1;
            sums.push(acc);
        }
        ColorPrefix { sums }
    }

    /// Counts over the inclusive 1-based range; caller guarantees bounds.
    pub fn range(&self, lo: usize, hi: usize) -> Counts {
        let a = self.sums[lo - 1];
        let b = self.sums[hi];
        Counts([b[0] - a[0], b[1] - a[1], b[2] - a[2]])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub violated: Vec<usize>,
    pub satisfied_count: usize,
    /// `actual - required` for each entry of `violated`, in the same order.
    pub deltas: Vec<[i64; 3]>,
}

impl VerifyReport {
    pub fn is_feasible(&self) -> bool {
        self.violated.is_empty()
    }
}

/// Ids of intervals whose requirement does not sum to the interval length.
pub fn check_consistency(inst: &Instance) -> Vec<usize> {
    inst.intervals().iter().filter(|iv| !iv.is_consistent()).map(|iv| iv.id).collect()
}

pub fn count_colors(col: &Coloring, lo: usize, hi: usize) -> Result<Counts, ModelError> {
    if lo == 0 || lo > hi || hi > col.len() {
        return Err(ModelError::OutOfRange { id: 0, lo, hi, n: col.len() });
    }
    Ok(Counts::of(&col.colors()[lo - 1..hi]))
}

pub fn verify(inst: &Instance, col: &Coloring) -> Result<VerifyReport, ModelError> {
    if col.len() != inst.n() {
        return Err(ModelError::LengthMismatch { expected: inst.n(), found: col.len() });
    }
    let prefix = ColorPrefix::new(col);
    let mut violated = Vec::new();
    let mut deltas = Vec::new();
    for iv in inst.intervals() {
        let actual = prefix.range(iv.lo, iv.hi);
        if actual != iv.req {
            violated.push(iv.id);
            deltas.push(actual.delta(&iv.req));
        }
    }
    Ok(VerifyReport { satisfied_count: inst.len() - violated.len(), violated, deltas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn single(n: usize, lo: usize, hi: usize, req: Counts) -> Instance {
        Instance::from_spans(n, [(lo, hi, req)]).unwrap()
    }

    #[test]
    fn consistency_flags_bad_sums() {
        assert!(check_consistency(&single(3, 1, 3, Counts::new(1, 1, 1))).is_empty());
        assert_eq!(check_consistency(&single(3, 1, 3, Counts::new(1, 1, 0))), vec![1]);
    }

    #[test]
    fn verify_reports_deltas() {
        let inst = single(3, 1, 3, Counts::new(1, 1, 1));
        let ok = verify(&inst, &vec![Red, Black, White].into()).unwrap();
        assert!(ok.is_feasible());
        assert_eq!(ok.satisfied_count, 1);
        let bad = verify(&inst, &vec![Red, Red, White].into()).unwrap();
        assert_eq!(bad.violated, vec![1]);
        assert_eq!(bad.deltas, vec![[1, -1, 0]]);
        assert_eq!(bad.deltas[0].iter().sum::<i64>(), 0);
    }

    #[test]
    fn verify_rejects_length_mismatch() {
        let inst = single(3, 1, 3, Counts::new(1, 1, 1));
        let err = verify(&inst, &vec![Red].into()).unwrap_err();
        assert_eq!(err, ModelError::LengthMismatch { expected: 3, found: 1 });
    }

    #[test]
    fn count_colors_ranges() {
        let col: Coloring = vec![Red, Black, White].into();
        assert_eq!(count_colors(&vec![Red].into(), 1, 1).unwrap(), Counts::new(1, 0, 0));
        assert_eq!(count_colors(&col, 1, 3).unwrap(), Counts::new(1, 1, 1));
        assert_eq!(count_colors(&col, 2, 3).unwrap(), Counts::new(0, 1, 1));
        assert!(count_colors(&col, 0, 1).is_err());
        assert!(count_colors(&col, 3, 2).is_err());
        assert!(count_colors(&col, 2, 4).is_err());
    }

    #[test]
    fn instance_rejects_bad_ids_and_ranges() {
        let iv = |id, lo: usize, hi: usize| Interval { id, lo, hi, req: Counts::new(0, 0, (hi + 1 - lo) as u32) };
        assert!(matches!(
            Instance::new(3, vec![iv(2, 1, 1)]),
            Err(ModelError::NonContiguousId { expected: 1, found: 2 })
        ));
        assert!(matches!(Instance::new(3, vec![iv(1, 2, 4)]), Err(ModelError::OutOfRange { .. })));
    }

    #[test]
    fn color_codes_are_fixed() {
        assert_eq!(Red.code(), 1);
        assert_eq!(Black.code(), 2);
        assert_eq!(White.code(), 3);
        assert!(Color::from_code(4).is_err());
        assert_eq!(White.swap_bw(), Black);
        assert_eq!(Red.swap_bw(), Red);
    }
}
