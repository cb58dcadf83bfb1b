//! DPLL with two-watched-literal unit propagation, chronological
//! backtracking and lowest-index-first branching (false before true).

use std::fmt;

use super::{Budget, SolveStats};

/// A literal over variables `1..=num_vars`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit((var - 1) << 1)
    }

    pub fn neg(var: u32) -> Self {
        Lit((var - 1) << 1 | 1)
    }

    pub fn new(var: u32, negated: bool) -> Self {
        if negated {
            Lit::neg(var)
        } else {
            Lit::pos(var)
        }
    }

    pub fn var(self) -> u32 {
        (self.0 >> 1) + 1
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn code(self) -> usize {
        self.0 as usize
    }

    fn index(self) -> usize {
        (self.0 >> 1) as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.is_neg() { "-" } else { "" }, self.var())
    }
}

/// CNF with clauses of any arity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneralCnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl GeneralCnf {
    pub fn new(num_vars: usize) -> Self {
        GeneralCnf { num_vars, clauses: Vec::new() }
    }

    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars as u32
    }

    pub fn add(&mut self, clause: impl Into<Vec<Lit>>) {
        self.clauses.push(clause.into());
    }

    /// True iff every clause has a literal made true by `model` (indexed by var - 1).
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| model[l.index()] != l.is_neg()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpllOutcome {
    /// Model indexed by `var - 1`.
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

const UNASSIGNED: u8 = 2;

struct Level {
    trail_len: usize,
    decision: Lit,
    flipped: bool,
}

struct Engine<'a> {
    clauses: Vec<&'a [Lit]>,
    /// Watch lists per literal code: clauses watching that literal, which
    /// sits at position 0 or 1 of the clause's watch pair.
    watches: Vec<Vec<usize>>,
    /// Per clause, the two watched literal positions.
    watched: Vec<[usize; 2]>,
    value: Vec<u8>,
    trail: Vec<Lit>,
    qhead: usize,
    levels: Vec<Level>,
    next_var: usize,
    stats: SolveStats,
}

impl<'a> Engine<'a> {
    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[l.index()] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (l.is_neg() as u8),
        }
    }

    fn enqueue(&mut self, l: Lit) {
        self.value[l.index()] = !l.is_neg() as u8;
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            let mut list = std::mem::take(&mut self.watches[falsified.code()]);
            let mut i = 0;
            let mut conflict = false;
            while i < list.len() {
                let ci = list[i];
                let clause = self.clauses[ci];
                let [w0, w1] = self.watched[ci];
                let (mine, other) = if clause[w0] == falsified { (0, w1) } else { (1, w0) };
                if self.lit_value(clause[other]) == 1 {
                    i += 1;
                    continue;
                }
                let replacement = (0..clause.len()).find(|&k| k != w0 && k != w1 && self.lit_value(clause[k]) != 0);
                if let Some(k) = replacement {
                    self.watched[ci][mine] = k;
                    self.watches[clause[k].code()].push(ci);
                    list.swap_remove(i);
                    continue;
                }
                match self.lit_value(clause[other]) {
                    UNASSIGNED => {
                        self.stats.propagations += 1;
                        self.enqueue(clause[other]);
                        i += 1;
                    }
                    _ => {
                        conflict = true;
                        break;
                    }
                }
            }
            self.watches[falsified.code()] = list;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            self.value[l.index()] = UNASSIGNED;
            self.next_var = self.next_var.min(l.index());
        }
        self.qhead = len;
    }

    /// Undoes to the most recent unflipped decision and flips it.
    fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            self.undo_to(level.trail_len);
            if !level.flipped {
                let flip = !level.decision;
                self.levels.push(Level { trail_len: level.trail_len, decision: flip, flipped: true });
                self.enqueue(flip);
                return true;
            }
        }
        false
    }
}

/// Sound and complete within `budget`, counted in branching decisions.
pub fn solve_dpll(cnf: &GeneralCnf, budget: Budget) -> (DpllOutcome, SolveStats) {
    let n = cnf.num_vars;
    let mut engine = Engine {
        clauses: Vec::with_capacity(cnf.clauses.len()),
        watches: vec![Vec::new(); 2 * n],
        watched: Vec::with_capacity(cnf.clauses.len()),
        value: vec![UNASSIGNED; n],
        trail: Vec::with_capacity(n),
        qhead: 0,
        levels: Vec::new(),
        next_var: 0,
        stats: SolveStats::default(),
    };
    let mut units = Vec::new();
    for clause in &cnf.clauses {
        match clause.len() {
            0 => return (DpllOutcome::Unsat, engine.stats),
            1 => units.push(clause[0]),
            _ => {
                let ci = engine.clauses.len();
                engine.clauses.push(clause);
                engine.watched.push([0, 1]);
                engine.watches[clause[0].code()].push(ci);
                engine.watches[clause[1].code()].push(ci);
            }
        }
    }
    for l in units {
        match engine.lit_value(l) {
            0 => return (DpllOutcome::Unsat, engine.stats),
            1 => {}
            _ => engine.enqueue(l),
        }
    }
    let mut ok = engine.propagate();
    loop {
        if !ok {
            if !engine.backtrack() {
                return (DpllOutcome::Unsat, engine.stats);
            }
            ok = engine.propagate();
            continue;
        }
        while engine.next_var < n && engine.value[engine.next_var] != UNASSIGNED {
            engine.next_var += 1;
        }
        if engine.next_var == n {
            let model = engine.value.iter().map(|&v| v == 1).collect();
            return (DpllOutcome::Sat(model), engine.stats);
        }
        engine.stats.nodes += 1;
        engine.stats.budget_used = engine.stats.nodes;
        if budget.exceeded(engine.stats.nodes) {
            return (DpllOutcome::Unknown, engine.stats);
        }
        let decision = Lit::neg(engine.next_var as u32 + 1);
        engine.levels.push(Level { trail_len: engine.trail.len(), decision, flipped: false });
        engine.enqueue(decision);
        ok = engine.propagate();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, CnfFormula};
    use proptest::prelude::*;

    fn cnf(num_vars: usize, clauses: &[&[i32]]) -> GeneralCnf {
        GeneralCnf {
            num_vars,
            clauses: clauses.iter().map(|c| c.iter().map(|&x| Lit::new(x.unsigned_abs(), x < 0)).collect()).collect(),
        }
    }

    #[test]
    fn unit_clause_is_sat() {
        let (out, _) = solve_dpll(&cnf(1, &[&[1]]), Budget::unlimited());
        assert_eq!(out, DpllOutcome::Sat(vec![true]));
    }

    #[test]
    fn contradiction_is_unsat() {
        let (out, _) = solve_dpll(&cnf(1, &[&[1], &[-1]]), Budget::unlimited());
        assert_eq!(out, DpllOutcome::Unsat);
        let (out, _) = solve_dpll(&cnf(1, &[&[]]), Budget::unlimited());
        assert_eq!(out, DpllOutcome::Unsat);
    }

    #[test]
    fn prefers_false() {
        let (out, _) = solve_dpll(&cnf(3, &[&[1, 2, 3]]), Budget::unlimited());
        assert_eq!(out, DpllOutcome::Sat(vec![false, false, true]));
    }

    #[test]
    fn budget_exhaustion() {
        let (out, stats) = solve_dpll(&cnf(3, &[&[1, 2, 3]]), Budget::nodes(0));
        assert_eq!(out, DpllOutcome::Unknown);
        assert_eq!(stats.nodes, 1);
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i,j): pigeon i in hole j, var 2*i + j + 1.
        let v = |i: i32, j: i32| 2 * i + j + 1;
        let mut clauses: Vec<Vec<i32>> = (0..3).map(|i| vec![v(i, 0), v(i, 1)]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
        assert_eq!(solve_dpll(&cnf(6, &refs), Budget::unlimited()).0, DpllOutcome::Unsat);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            p in 3usize..9,
            raw in prop::collection::vec((prop::sample::subsequence((1..=8i64).collect::<Vec<_>>(), 3), any::<[bool; 3]>()), 0..30)
        ) {
            let triples: Vec<[i64; 3]> = raw
                .iter()
                .filter(|(vars, _)| vars.iter().all(|&v| v as usize <= p))
                .map(|(vars, s)| [0, 1, 2].map(|i| if s[i] { -vars[i] } else { vars[i] }))
                .collect();
            let f = CnfFormula::from_triples(p, &triples).unwrap();
            let g = GeneralCnf {
                num_vars: p,
                clauses: f.clauses().iter().map(|c| c.lits().iter().map(|l| Lit::new(l.var, l.negated)).collect()).collect(),
            };
            let (out, _) = solve_dpll(&g, Budget::unlimited());
            let expected = brute_force_sat(&f).unwrap();
            match out {
                DpllOutcome::Sat(model) => {
                    prop_assert!(expected.is_some());
                    prop_assert!(g.satisfied_by(&model));
                }
                DpllOutcome::Unsat => prop_assert!(expected.is_none()),
                DpllOutcome::Unknown => prop_assert!(false),
            }
        }
    }
}
