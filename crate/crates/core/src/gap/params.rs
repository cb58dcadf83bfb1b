//! Gap-mode reduction and its parameters.

use num_rational::Rational64;

use super::expander::{build_expander, ExpanderRecord};
use super::GapError;
use crate::cnf::CnfFormula;
use crate::model::Instance;
use crate::reduction::{reduce_with_links, ReductionMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapParams {
    pub d0: usize,
    /// Minimum certified expansion over the graphs used.
    pub h0: Rational64,
    pub c: usize,
    pub eps0: Rational64,
    pub eps: Rational64,
    /// Satisfied-interval threshold `(1 - eps) * m`.
    pub threshold: Rational64,
}

impl GapParams {
    pub fn new(d0: usize, h0: Rational64, c: usize, eps0: Rational64, m: usize) -> Result<Self, GapError> {
        let eps = compute_epsilon(d0, h0, c, eps0)?;
        let threshold = (Rational64::from_integer(1) - eps) * Rational64::from_integer(m as i64);
        Ok(GapParams { d0, h0, c, eps0, eps, threshold })
    }

    /// `1 + 3 * d0 / h0`.
    pub fn audit_factor(&self) -> Rational64 {
        Rational64::from_integer(1) + Rational64::from_integer(3 * self.d0 as i64) / self.h0
    }
}

/// `eps = h0 * eps0 / ((3 * d0 + h0) * c)`.
pub fn compute_epsilon(d0: usize, h0: Rational64, c: usize, eps0: Rational64) -> Result<Rational64, GapError> {
    let zero = Rational64::from_integer(0);
    if d0 == 0 {
        return Err(GapError::Nonpositive("d0"));
    }
    if h0 <= zero {
        return Err(GapError::Nonpositive("h0"));
    }
    if c == 0 {
        return Err(GapError::Nonpositive("c"));
    }
    if eps0 <= zero {
        return Err(GapError::Nonpositive("eps0"));
    }
    let d0 = Rational64::from_integer(d0 as i64);
    let c = Rational64::from_integer(c as i64);
    let eps = h0 * eps0 / ((Rational64::from_integer(3) * d0 + h0) * c);
    if eps >= Rational64::from_integer(1) {
        return Err(GapError::EpsilonTooLarge(eps));
    }
    Ok(eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapOptions {
    pub degree: usize,
    pub target_h: f64,
    pub seed: u64,
    pub retries: usize,
    pub eps0: Rational64,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { degree: 4, target_h: 1.0, seed: 0, retries: 200, eps0: Rational64::new(1, 8) }
    }
}

fn variable_seed(seed: u64, var: u32) -> u64 {
    seed ^ (var as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Gap-mode reduction: per variable, an expander over its occurrences (in
/// clause order) decides which occurrence pairs get an outer and inner link
/// interval.
pub fn gap_reduce_with(cnf: &CnfFormula, opts: &GapOptions) -> Result<(Instance, ReductionMap, GapParams), GapError> {
    let q = cnf.num_clauses();
    if q == 0 {
        return Err(GapError::Nonpositive("clause count"));
    }
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); cnf.num_vars() + 1];
    for (i, clause) in cnf.clauses().iter().enumerate() {
        for (h, lit) in clause.lits().iter().enumerate() {
            occurrences[lit.var as usize].push(3 * i + h);
        }
    }
    let mut pairs = Vec::new();
    let mut records = Vec::new();
    for (var, occ) in occurrences.iter().enumerate().skip(1).filter(|(_, o)| !o.is_empty()) {
        let (g, cert) =
            build_expander(occ.len(), opts.degree, opts.target_h, variable_seed(opts.seed, var as u32), opts.retries)?;
        pairs.extend(g.edges().iter().map(|&(u, v)| (occ[u - 1], occ[v - 1])));
        records.push(ExpanderRecord {
            var: var as u32,
            n: occ.len(),
            d: cert.d,
            h: cert.certified_h(),
            method: cert.method,
        });
    }
    let (inst, mut map) = reduce_with_links(cnf, |_| pairs, true)?;
    let h0 = records.iter().filter_map(|r| r.h).min().unwrap_or(Rational64::from_integer(1));
    let c = inst.len().div_ceil(q);
    let params = GapParams::new(opts.degree, h0, c, opts.eps0, inst.len())?;
    map.c = c;
    map.expanders = records;
    map.gap = Some(params.clone());
    Ok((inst, map, params))
}

pub fn gap_reduce(
    cnf: &CnfFormula,
    d: usize,
    target_h: f64,
    seed: u64,
) -> Result<(Instance, ReductionMap, GapParams), GapError> {
    gap_reduce_with(cnf, &GapOptions { degree: d, target_h, seed, ..GapOptions::default() })
}
