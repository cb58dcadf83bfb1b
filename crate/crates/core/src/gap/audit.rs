//! Majority extraction and the broken/bad clause accounting audit.

use std::fmt;

use num_rational::Rational64;

use super::params::GapParams;
use super::GapError;
use crate::cnf::{eval, Assignment};
use crate::model::{verify, Color, Coloring, Instance};
use crate::reduction::{slot_value, ReductionMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub violated: usize,
    pub broken_clauses: usize,
    pub broken_links: usize,
    pub bad_clauses: usize,
    pub bound: Rational64,
    pub unsat_phi: usize,
    pub holds: bool,
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g V {} broken_clauses {} broken_links {} bad {} bound {} unsat_phi {} holds {}",
            self.violated,
            self.broken_clauses,
            self.broken_links,
            self.bad_clauses,
            self.bound,
            self.unsat_phi,
            self.holds as u8
        )
    }
}

struct Classified {
    violated: Vec<bool>,
    broken: Vec<bool>,
}

fn classify(map: &ReductionMap, inst: &Instance, col: &Coloring) -> Result<Classified, GapError> {
    if inst.n() != map.n || inst.len() != map.m {
        return Err(GapError::Mismatch(format!(
            "instance has {} positions and {} intervals, map expects {} and {}",
            inst.n(),
            inst.len(),
            map.n,
            map.m
        )));
    }
    if col.len() != map.n {
        return Err(GapError::Mismatch(format!("coloring has length {}, map expects {}", col.len(), map.n)));
    }
    let report = verify(inst, col)?;
    let mut violated = vec![false; inst.len() + 1];
    for &id in &report.violated {
        violated[id] = true;
    }
    let broken = (1..=map.num_clauses())
        .map(|i| {
            map.clause_interval_ids(i).any(|id| violated[id])
                || (1..=3).any(|h| slot_value(map.slot(i, h), col).is_none())
        })
        .collect();
    Ok(Classified { violated, broken })
}

fn majority(map: &ReductionMap, col: &Coloring, broken: &[bool]) -> Assignment {
    let mut votes = vec![0i64; map.formula.num_vars() + 1];
    for s in map.slots.iter().filter(|s| !broken[s.clause - 1]) {
        votes[s.var as usize] += if slot_value(s, col) == Some(true) { 1 } else { -1 };
    }
    Assignment::new(votes[1..].iter().map(|&v| v > 0).collect())
}

/// Per variable, the value displayed by most occurrences in non-broken
/// clauses; ties and variables without such occurrences are false. A clause
/// is broken when one of its own intervals is violated or one of its
/// occurrences displays no value.
pub fn majority_extract(map: &ReductionMap, inst: &Instance, col: &Coloring) -> Result<Assignment, GapError> {
    let c = classify(map, inst, col)?;
    Ok(majority(map, col, &c.broken))
}

/// Recounts violated intervals, broken clauses and links, and bad clauses
/// for `col`, and checks `unsat(phi) <= (1 + 3 d0 / h0) V` for the majority
/// assignment `phi`.
pub fn soundness_audit(
    map: &ReductionMap,
    inst: &Instance,
    col: &Coloring,
    params: &GapParams,
) -> Result<AuditReport, GapError> {
    if map.gap.as_ref().is_some_and(|g| g != params) {
        return Err(GapError::Mismatch("parameters differ from the map's".into()));
    }
    let c = classify(map, inst, col)?;
    let phi = majority(map, col, &c.broken);
    let violated = c.violated.iter().filter(|&&v| v).count();
    let broken_clauses = c.broken.iter().filter(|&&b| b).count();
    let broken_links = map
        .links
        .iter()
        .filter(|l| {
            c.violated[l.outer]
                || l.inner.is_some_and(|id| c.violated[id])
                || c.broken[l.from.0 - 1]
                || c.broken[l.to.0 - 1]
        })
        .count();
    let red = |p: usize| col.at(p) == Color::Red;
    let bad_clauses = (1..=map.num_clauses())
        .filter(|&i| !c.broken[i - 1])
        .filter(|&i| {
            (1..=3).any(|h| {
                let s = map.slot(i, h);
                let active = s.a.iter().all(|&a| red(a));
                active && (phi.value(s.var) == s.negated)
            })
        })
        .count();
    let unsat_phi = eval(&map.formula, &phi).len();
    let bound = params.audit_factor() * Rational64::from_integer(violated as i64);
    let holds = Rational64::from_integer(unsat_phi as i64) <= bound;
    Ok(AuditReport { violated, broken_clauses, broken_links, bad_clauses, bound, unsat_phi, holds })
}
