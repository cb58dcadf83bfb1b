//! Left-to-right backtracking over positions with per-interval count
//! propagation and a memo of failed search states.

use std::collections::HashSet;

use super::{Budget, SolveOutcome, SolveStats, SolveStatus, SolverError};
use crate::model::{check_consistency, verify, Color, Coloring, Instance};

/// Cap on memoized failed states; beyond it the search continues unmemoized.
const MEMO_CAP: usize = 1 << 22;

/// Set of colors a position may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domain(u8);

impl Domain {
    pub const ANY: Domain = Domain(0b111);

    pub fn only(color: Color) -> Self {
        Domain(1 << color.index())
    }

    pub fn without(self, color: Color) -> Self {
        Domain(self.0 & !(1 << color.index()))
    }

    pub fn contains(self, color: Color) -> bool {
        self.0 >> color.index() & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::ANY
    }
}

enum Mode {
    First,
    All { limit: usize, found: Vec<Coloring>, truncate: bool },
}

struct Frame {
    untried: u8,
    current: Option<usize>,
    found: bool,
}

struct Search<'a> {
    n: usize,
    hi: Vec<usize>,
    /// Intervals containing each position.
    covering: Vec<Vec<usize>>,
    /// Intervals started before and still open at each position; they
    /// determine the state of the remaining subproblem.
    open: Vec<Vec<usize>>,
    /// Outstanding RED and BLACK counts per interval; WHITE is the slack.
    need: Vec<[u32; 2]>,
    domains: &'a [Domain],
    failed: HashSet<Vec<u32>>,
    key: Vec<u32>,
    stats: SolveStats,
    budget: Budget,
}

impl<'a> Search<'a> {
    fn new(inst: &Instance, domains: &'a [Domain], budget: Budget) -> Self {
        let n = inst.n();
        let mut covering = vec![Vec::new(); n];
        let mut open = vec![Vec::new(); n];
        let mut hi = Vec::with_capacity(inst.len());
        let mut need = Vec::with_capacity(inst.len());
        for (k, iv) in inst.intervals().iter().enumerate() {
            let (lo0, hi0) = (iv.lo - 1, iv.hi - 1);
            for p in lo0..=hi0 {
                covering[p].push(k);
                if p > lo0 {
                    open[p].push(k);
                }
            }
            hi.push(hi0);
            need.push([iv.req.red(), iv.req.black()]);
        }
        Search {
            n,
            hi,
            covering,
            open,
            need,
            domains,
            failed: HashSet::new(),
            key: Vec::new(),
            stats: SolveStats::default(),
            budget,
        }
    }

    fn allowed(&self, p: usize) -> u8 {
        let mut mask = self.domains[p].0;
        for &k in &self.covering[p] {
            let [r, b] = self.need[k];
            let rem = (self.hi[k] - p + 1) as u32;
            mask &= (r > 0) as u8 | ((b > 0) as u8) << 1 | ((rem > r + b) as u8) << 2;
            if mask == 0 {
                break;
            }
        }
        mask
    }

    fn apply(&mut self, p: usize, c: usize) {
        if c < 2 {
            for &k in &self.covering[p] {
                self.need[k][c] -= 1;
            }
        }
    }

    fn undo(&mut self, p: usize, c: usize) {
        if c < 2 {
            for &k in &self.covering[p] {
                self.need[k][c] += 1;
            }
        }
    }

    fn fill_key(&mut self, p: usize) {
        self.key.clear();
        self.key.push(p as u32);
        for &k in &self.open[p] {
            self.key.extend_from_slice(&self.need[k]);
        }
    }

    /// Runs the search; `Ok(false)` means the budget ran out.
    fn run(&mut self, mode: &mut Mode, first: &mut Option<Coloring>) -> Result<bool, SolverError> {
        let mut frames: Vec<Frame> = Vec::with_capacity(self.n);
        let mut colors = vec![0usize; self.n];
        let mut p = 0;
        loop {
            // Enter position `p`.
            if p == self.n {
                let col = Coloring::new(colors.iter().map(|&c| Color::from_index(c)).collect());
                match mode {
                    Mode::First => {
                        *first = Some(col);
                        return Ok(true);
                    }
                    Mode::All { limit, found, truncate } => {
                        if found.len() == *limit {
                            if *truncate {
                                return Ok(false);
                            }
                            return Err(SolverError::LimitExceeded { limit: *limit });
                        }
                        found.push(col);
                        if let Some(top) = frames.last_mut() {
                            top.found = true;
                        }
                    }
                }
            } else {
                self.stats.nodes += 1;
                self.stats.budget_used = self.stats.nodes;
                if self.budget.exceeded(self.stats.nodes) {
                    return Ok(false);
                }
                self.fill_key(p);
                if !self.failed.contains(&self.key) {
                    let untried = self.allowed(p);
                    if untried.count_ones() == 1 {
                        self.stats.propagations += 1;
                    }
                    frames.push(Frame { untried, current: None, found: false });
                }
            }
            // Advance to the next untried color of the deepest open frame.
            loop {
                if frames.is_empty() {
                    return Ok(true);
                }
                let q = frames.len() - 1;
                if let Some(c) = frames[q].current.take() {
                    self.undo(q, c);
                }
                let top = frames.last_mut().unwrap();
                if top.untried == 0 {
                    let found = top.found;
                    frames.pop();
                    if found {
                        if let Some(parent) = frames.last_mut() {
                            parent.found = true;
                        }
                    } else if self.failed.len() < MEMO_CAP {
                        self.fill_key(q);
                        self.failed.insert(self.key.clone());
                    }
                    continue;
                }
                let c = top.untried.trailing_zeros() as usize;
                top.untried &= !(1 << c);
                top.current = Some(c);
                colors[q] = c;
                self.apply(q, c);
                p = q + 1;
                break;
            }
        }
    }
}

fn check_domains(inst: &Instance, domains: &[Domain]) -> Result<(), SolverError> {
    let bad = check_consistency(inst);
    if !bad.is_empty() {
        return Err(SolverError::Inconsistent(bad));
    }
    if domains.len() != inst.n() {
        return Err(SolverError::DomainLength { expected: inst.n(), found: domains.len() });
    }
    Ok(())
}

fn assert_witness(inst: &Instance, col: &Coloring) {
    let report = verify(inst, col).expect("witness length matches");
    assert!(report.is_feasible(), "solver produced a violating witness: {:?}", report.violated);
}

/// Finds a feasible coloring whose positions respect `domains`.
pub fn solve_with_domains(inst: &Instance, domains: &[Domain], budget: Budget) -> Result<SolveOutcome, SolverError> {
    check_domains(inst, domains)?;
    let mut search = Search::new(inst, domains, budget);
    let mut witness = None;
    let complete = search.run(&mut Mode::First, &mut witness)?;
    let status = match (&witness, complete) {
        (Some(col), _) => {
            assert_witness(inst, col);
            SolveStatus::Feasible
        }
        (None, true) => SolveStatus::Infeasible,
        (None, false) => SolveStatus::Unknown,
    };
    Ok(SolveOutcome { status, witness, stats: search.stats })
}

pub fn solve_backtracking(inst: &Instance, budget: Budget) -> Result<SolveOutcome, SolverError> {
    solve_with_domains(inst, &vec![Domain::ANY; inst.n()], budget)
}

/// All feasible colorings respecting `domains`, in lexicographic order of
/// color codes. Fails if more than `limit` exist.
pub fn enumerate_with_domains(inst: &Instance, domains: &[Domain], limit: usize) -> Result<Vec<Coloring>, SolverError> {
    enumerate_inner(inst, domains, limit, false).map(|(found, _)| found)
}

fn enumerate_inner(
    inst: &Instance,
    domains: &[Domain],
    limit: usize,
    truncate: bool,
) -> Result<(Vec<Coloring>, bool), SolverError> {
    check_domains(inst, domains)?;
    let mut search = Search::new(inst, domains, Budget::unlimited());
    let mut mode = Mode::All { limit, found: Vec::new(), truncate };
    let complete = search.run(&mut mode, &mut None)?;
    let Mode::All { found, .. } = mode else { unreachable!() };
    for col in &found {
        assert_witness(inst, col);
    }
    Ok((found, complete))
}

pub fn enumerate_colorings(inst: &Instance, limit: usize) -> Result<Vec<Coloring>, SolverError> {
    enumerate_with_domains(inst, &vec![Domain::ANY; inst.n()], limit)
}

/// The first `limit` feasible colorings in lexicographic order, and whether
/// that is all of them.
pub fn enumerate_up_to(inst: &Instance, limit: usize) -> Result<(Vec<Coloring>, bool), SolverError> {
    enumerate_inner(inst, &vec![Domain::ANY; inst.n()], limit, true)
}

/// Distinct restrictions of feasible colorings to `positions` (1-based), in
/// lexicographic order. Each prefix is pruned by a feasibility check, so the
/// cost scales with the number of feasible projections rather than with the
/// number of feasible colorings.
pub fn enumerate_projections(
    inst: &Instance,
    positions: &[usize],
    budget: Budget,
) -> Result<Vec<Vec<Color>>, SolverError> {
    let mut domains = vec![Domain::ANY; inst.n()];
    check_domains(inst, &domains)?;
    for &p in positions {
        if p == 0 || p > inst.n() {
            return Err(crate::model::ModelError::OutOfRange { id: 0, lo: p, hi: p, n: inst.n() }.into());
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(positions.len());
    project_rec(inst, positions, budget, &mut domains, &mut prefix, &mut out)?;
    Ok(out)
}

fn project_rec(
    inst: &Instance,
    positions: &[usize],
    budget: Budget,
    domains: &mut [Domain],
    prefix: &mut Vec<Color>,
    out: &mut Vec<Vec<Color>>,
) -> Result<(), SolverError> {
    let Some(&pos) = positions.get(prefix.len()) else {
        out.push(prefix.clone());
        return Ok(());
    };
    let saved = domains[pos - 1];
    for c in Color::ALL {
        if !saved.contains(c) {
            continue;
        }
        domains[pos - 1] = Domain::only(c);
        let outcome = solve_with_domains(inst, domains, budget)?;
        match outcome.status {
            SolveStatus::Feasible => {
                prefix.push(c);
                project_rec(inst, positions, budget, domains, prefix, out)?;
                prefix.pop();
            }
            SolveStatus::Infeasible => {}
            SolveStatus::Unknown => return Err(SolverError::BudgetExhausted(budget.limit().unwrap_or(0))),
        }
    }
    domains[pos - 1] = saved;
    Ok(())
}
