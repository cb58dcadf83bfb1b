//! 3-SAT formulas: DIMACS input, evaluation, planted generation and
//! exhaustive oracles for small variable counts.

use std::fmt::{self, Write as _};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest variable count accepted by the exhaustive oracles.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {clause} has {arity} literals, expected 3")]
    Arity { clause: usize, arity: usize },
    #[error("clause {clause} mentions variable {var} twice")]
    DuplicateVariable { clause: usize, var: u32 },
    #[error("clause {clause} mentions variable {var} but the formula has {p} variables")]
    VariableOutOfRange { clause: usize, var: u32, p: usize },
    #[error("brute force supports at most {max} variables, formula has {p}")]
    Capacity { p: usize, max: usize },
    #[error("planted generation needs at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("assignment covers {found} variables, formula has {expected}")]
    AssignmentLength { expected: usize, found: usize },
}

fn parse_err(line: usize, msg: impl Into<String>) -> CnfError {
    CnfError::Parse { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    pub fn from_dimacs(x: i64) -> Self {
        Literal { var: x.unsigned_abs() as u32, negated: x < 0 }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", if self.negated { "~" } else { "" }, self.var)
    }
}

/// Exactly three literals over pairwise distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause([Literal; 3]);

impl Clause {
    /// `index` is only used for error messages (1-based clause number).
    pub fn new(lits: [Literal; 3], index: usize) -> Result<Self, CnfError> {
        for i in 0..3 {
            if lits[i].var == 0 {
                return Err(CnfError::VariableOutOfRange { clause: index, var: 0, p: 0 });
            }
            for j in 0..i {
                if lits[i].var == lits[j].var {
                    return Err(CnfError::DuplicateVariable { clause: index, var: lits[i].var });
                }
            }
        }
        Ok(Clause(lits))
    }

    pub fn lits(&self) -> &[Literal; 3] {
        &self.0
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        self.0.iter().any(|l| l.eval(a.value(l.var)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            for l in c.lits() {
                if l.var as usize > num_vars {
                    return Err(CnfError::VariableOutOfRange { clause: i + 1, var: l.var, p: num_vars });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Convenience constructor from DIMACS-style signed triples.
    pub fn from_triples(num_vars: usize, triples: &[[i64; 3]]) -> Result<Self, CnfError> {
        let clauses = triples
            .iter()
            .enumerate()
            .map(|(i, t)| Clause::new(t.map(Literal::from_dimacs), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

/// Truth values for variables `1..=p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all(p: usize, value: bool) -> Self {
        Assignment(vec![value; p])
    }

    pub fn value(&self, var: u32) -> bool {
        self.0[var as usize - 1]
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.0[var as usize - 1] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// Bit `p - var` set iff `var` is true, so that integer order equals
    /// lexicographic order with `x1` most significant and false < true.
    fn from_bits(bits: u32, p: usize) -> Self {
        Assignment((1..=p).map(|v| bits >> (p - v) & 1 == 1).collect())
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('%') {
            continue;
        }
        if l.starts_with('p') {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(parse_err(line, "malformed header, expected 'p cnf <vars> <clauses>'"));
            }
            let p = toks[2].parse().map_err(|_| parse_err(line, "invalid variable count"))?;
            let q = toks[3].parse().map_err(|_| parse_err(line, "invalid clause count"))?;
            header = Some((p, q, line));
            continue;
        }
        let (p, _, _) = header.ok_or_else(|| parse_err(line, "clause before header"))?;
        for tok in l.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| parse_err(line, format!("invalid literal '{tok}'")))?;
            if pending.is_empty() {
                pending_line = line;
            }
            if x != 0 {
                pending.push(x);
                continue;
            }
            let index = clauses.len() + 1;
            if pending.len() != 3 {
                return Err(CnfError::Arity { clause: index, arity: pending.len() });
            }
            let lits = [0, 1, 2].map(|i| Literal::from_dimacs(pending[i]));
            let clause = Clause::new(lits, index)?;
            if let Some(l) = lits.iter().find(|l| l.var as usize > p) {
                return Err(CnfError::VariableOutOfRange { clause: index, var: l.var, p });
            }
            clauses.push(clause);
            pending.clear();
        }
    }
    let (p, q, hline) = header.ok_or_else(|| parse_err(0, "missing 'p cnf' header"))?;
    if !pending.is_empty() {
        return Err(parse_err(pending_line, "clause not terminated by 0"));
    }
    if clauses.len() != q {
        return Err(parse_err(hline, format!("header declares {q} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(p, clauses)
}

pub fn emit_dimacs(cnf: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars(), cnf.num_clauses());
    for c in cnf.clauses() {
        let [a, b, d] = c.lits().map(|l| l.to_dimacs());
        writeln!(out, "{a} {b} {d} 0").unwrap();
    }
    out
}

/// `a <±var> ... 0`, positive literal meaning true.
pub fn emit_assignment(a: &Assignment) -> String {
    let mut out = String::from("a");
    for (i, &v) in a.values().iter().enumerate() {
        let var = i as i64 + 1;
        write!(out, " {}", if v { var } else { -var }).unwrap();
    }
    out.push_str(" 0\n");
    out
}

/// Parses the assignment line; every variable `1..=p` must appear once.
pub fn parse_assignment(text: &str, p: usize) -> Result<Assignment, CnfError> {
    let mut values: Vec<Option<bool>> = vec![None; p];
    let mut seen_line = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut toks = l.split_whitespace();
        if toks.next() != Some("a") || seen_line {
            return Err(parse_err(line, "expected a single 'a <lits> 0' line"));
        }
        seen_line = true;
        let mut terminated = false;
        for tok in toks {
            if terminated {
                return Err(parse_err(line, "literals after terminating 0"));
            }
            let x: i64 = tok.parse().map_err(|_| parse_err(line, format!("invalid literal '{tok}'")))?;
            if x == 0 {
                terminated = true;
                continue;
            }
            let lit = Literal::from_dimacs(x);
            let slot = values
                .get_mut(lit.var as usize - 1)
                .ok_or_else(|| parse_err(line, format!("variable {} out of range", lit.var)))?;
            if slot.is_some() {
                return Err(parse_err(line, format!("variable {} assigned twice", lit.var)));
            }
            *slot = Some(!lit.negated);
        }
        if !terminated {
            return Err(parse_err(line, "assignment not terminated by 0"));
        }
    }
    let found = values.iter().filter(|v| v.is_some()).count();
    if found != p {
        return Err(CnfError::AssignmentLength { expected: p, found });
    }
    Ok(Assignment(values.into_iter().map(Option::unwrap).collect()))
}

/// 1-based indices of clauses falsified by `a`.
pub fn eval(cnf: &CnfFormula, a: &Assignment) -> Vec<usize> {
    cnf.clauses().iter().enumerate().filter(|(_, c)| !c.eval(a)).map(|(i, _)| i + 1).collect()
}

/// A random 3-SAT formula together with an assignment satisfying it.
pub fn planted_random_3sat(p: usize, q: usize, seed: u64) -> Result<(CnfFormula, Assignment), CnfError> {
    if p < 3 {
        return Err(CnfError::TooFewVariables(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plant = Assignment((0..p).map(|_| rng.gen_bool(0.5)).collect());
    let mut clauses = Vec::with_capacity(q);
    while clauses.len() < q {
        let vars = sample(&mut rng, p, 3);
        let lits = [0, 1, 2].map(|i| Literal { var: vars.index(i) as u32 + 1, negated: rng.gen_bool(0.5) });
        let clause = Clause::new(lits, clauses.len() + 1)?;
        if clause.eval(&plant) {
            clauses.push(clause);
        }
    }
    Ok((CnfFormula::new(p, clauses)?, plant))
}

/// Per-clause bit masks for the exhaustive scans.
fn clause_masks(cnf: &CnfFormula) -> Vec<(u32, u32)> {
    let p = cnf.num_vars();
    cnf.clauses()
        .iter()
        .map(|c| {
            c.lits().iter().fold((0u32, 0u32), |(pos, neg), l| {
                let bit = 1u32 << (p - l.var as usize);
                if l.negated {
                    (pos, neg | bit)
                } else {
                    (pos | bit, neg)
                }
            })
        })
        .collect()
}

fn check_capacity(cnf: &CnfFormula) -> Result<(), CnfError> {
    if cnf.num_vars() > BRUTE_FORCE_MAX_VARS {
        return Err(CnfError::Capacity { p: cnf.num_vars(), max: BRUTE_FORCE_MAX_VARS });
    }
    Ok(())
}

/// Lexicographically first satisfying assignment (false < true, `x1` first), if any.
pub fn brute_force_sat(cnf: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
    check_capacity(cnf)?;
    let p = cnf.num_vars();
    let masks = clause_masks(cnf);
    let found = (0u32..1 << p).find(|&bits| masks.iter().all(|&(pos, neg)| bits & pos != 0 || !bits & neg != 0));
    Ok(found.map(|bits| Assignment::from_bits(bits, p)))
}

/// Exact maximum number of simultaneously satisfied clauses, with the
/// lexicographically first maximizer.
pub fn max_sat_brute(cnf: &CnfFormula) -> Result<(Assignment, usize), CnfError> {
    check_capacity(cnf)?;
    let p = cnf.num_vars();
    let masks = clause_masks(cnf);
    let q = masks.len();
    let mut best = (0u32, 0usize);
    let mut first = true;
    for bits in 0u32..1 << p {
        let sat = masks.iter().filter(|&&(pos, neg)| bits & pos != 0 || !bits & neg != 0).count();
        if first || sat > best.1 {
            best = (bits, sat);
            first = false;
            if sat == q {
                break;
            }
        }
    }
    Ok((Assignment::from_bits(best.0, p), best.1))
}
