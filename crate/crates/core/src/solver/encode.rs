//! ICC to CNF: one-hot color indicators per position plus, for RED and
//! BLACK, a sequential counter over the whole chain whose register
//! `S(j, k)` means "at least k positions among 1..=j have the color".
//! An interval `[lo, hi]` needing `r` of a color then becomes the
//! equivalences `S(lo - 1, k) <=> S(hi, k + r)`; WHITE follows from
//! consistency.

use super::dpll::{solve_dpll, DpllOutcome, GeneralCnf, Lit};
use super::{Budget, SolveOutcome, SolveStatus, SolverError};
use crate::model::{check_consistency, verify, Color, Coloring, Instance};

/// Maps (position, color) to its indicator variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    vars: Vec<[u32; 3]>,
}

impl VarMap {
    /// Indicator variable of `color` at 1-based `pos`.
    pub fn var(&self, pos: usize, color: Color) -> u32 {
        self.vars[pos - 1][color.index()]
    }

    pub fn positions(&self) -> usize {
        self.vars.len()
    }
}

#[derive(Debug, Clone)]
pub struct CnfEncoding {
    pub cnf: GeneralCnf,
    pub varmap: VarMap,
    pub aux_count: usize,
}

/// Register variables of one color's counter; row `j` holds `S(j, 1..=j)`.
struct Counter {
    rows: Vec<Vec<u32>>,
}

impl Counter {
    /// `None` encodes a constant: true for `k == 0`, false for `k > j`.
    fn reg(&self, j: usize, k: usize) -> Option<u32> {
        if k == 0 || k > j {
            None
        } else {
            Some(self.rows[j][k - 1])
        }
    }

    fn build(cnf: &mut GeneralCnf, indicators: &[u32]) -> Counter {
        let n = indicators.len();
        let mut rows: Vec<Vec<u32>> = vec![Vec::new()];
        for j in 1..=n {
            let row = (1..=j).map(|_| cnf.new_var()).collect();
            rows.push(row);
        }
        let counter = Counter { rows };
        for j in 1..=n {
            let x = indicators[j - 1];
            for k in 1..=j {
                let s = counter.reg(j, k).unwrap();
                let prev = counter.reg(j - 1, k);
                let prev_less = counter.reg(j - 1, k - 1);
                // S(j,k) => S(j-1,k) | x
                match prev {
                    Some(p) => cnf.add([Lit::neg(s), Lit::pos(p), Lit::pos(x)]),
                    None => cnf.add([Lit::neg(s), Lit::pos(x)]),
                }
                // S(j,k) => S(j-1,k) | S(j-1,k-1)
                match (prev, prev_less) {
                    (_, None) => {}
                    (Some(p), Some(q)) => cnf.add([Lit::neg(s), Lit::pos(p), Lit::pos(q)]),
                    (None, Some(q)) => cnf.add([Lit::neg(s), Lit::pos(q)]),
                }
                // S(j-1,k) => S(j,k)
                if let Some(p) = prev {
                    cnf.add([Lit::neg(p), Lit::pos(s)]);
                }
                // S(j-1,k-1) & x => S(j,k)
                match prev_less {
                    Some(q) => cnf.add([Lit::neg(q), Lit::neg(x), Lit::pos(s)]),
                    None => cnf.add([Lit::neg(x), Lit::pos(s)]),
                }
            }
        }
        counter
    }

    /// Exactly `r` marked positions in `[lo, hi]`.
    fn constrain(&self, cnf: &mut GeneralCnf, lo: usize, hi: usize, r: usize) {
        let before = lo - 1;
        for k in 0..=lo {
            let left = self.reg(before, k);
            let right = self.reg(hi, k + r);
            match (k, left, right) {
                (0, _, Some(s)) => cnf.add([Lit::pos(s)]),
                (0, _, None) => {}
                (_, Some(a), Some(b)) => {
                    cnf.add([Lit::neg(a), Lit::pos(b)]);
                    cnf.add([Lit::pos(a), Lit::neg(b)]);
                }
                (_, None, Some(b)) => cnf.add([Lit::neg(b)]),
                (_, _, None) => {}
            }
        }
    }
}

/// Position order used to number indicator variables. DPLL branches on the
/// lowest index first, so positions touching many interval endpoints, where
/// counts are pinned down, come first.
fn branching_order(inst: &Instance) -> Vec<usize> {
    let n = inst.n();
    let mut weight = vec![0usize; n];
    for iv in inst.intervals() {
        weight[iv.lo - 1] += 1;
        weight[iv.hi - 1] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(weight[p]), p));
    order
}

pub fn encode_to_cnf(inst: &Instance) -> CnfEncoding {
    let n = inst.n();
    let mut cnf = GeneralCnf::new(0);
    let mut vars = vec![[0u32; 3]; n];
    for p in branching_order(inst) {
        vars[p] = [cnf.new_var(), cnf.new_var(), cnf.new_var()];
    }
    for v in &vars {
        cnf.add(v.map(Lit::pos));
        cnf.add([Lit::neg(v[0]), Lit::neg(v[1])]);
        cnf.add([Lit::neg(v[0]), Lit::neg(v[2])]);
        cnf.add([Lit::neg(v[1]), Lit::neg(v[2])]);
    }
    for color in [Color::Red, Color::Black] {
        let indicators: Vec<u32> = vars.iter().map(|v| v[color.index()]).collect();
        let counter = Counter::build(&mut cnf, &indicators);
        for iv in inst.intervals() {
            counter.constrain(&mut cnf, iv.lo, iv.hi, iv.req.get(color) as usize);
        }
    }
    let aux_count = cnf.num_vars - 3 * n;
    CnfEncoding { cnf, varmap: VarMap { vars }, aux_count }
}

pub fn decode_model(varmap: &VarMap, model: &[bool]) -> Result<Coloring, SolverError> {
    (1..=varmap.positions())
        .map(|pos| {
            let on: Vec<Color> = Color::ALL.into_iter().filter(|&c| model[varmap.var(pos, c) as usize - 1]).collect();
            match on.as_slice() {
                [c] => Ok(*c),
                _ => Err(SolverError::OneHot(pos)),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Coloring::new)
}

/// Feasibility through the CNF encoding and DPLL.
pub fn solve_via_dpll(inst: &Instance, budget: Budget) -> Result<SolveOutcome, SolverError> {
    let bad = check_consistency(inst);
    if !bad.is_empty() {
        return Err(SolverError::Inconsistent(bad));
    }
    let enc = encode_to_cnf(inst);
    let (out, stats) = solve_dpll(&enc.cnf, budget);
    let (status, witness) = match out {
        DpllOutcome::Sat(model) => {
            let col = decode_model(&enc.varmap, &model)?;
            let report = verify(inst, &col)?;
            assert!(report.is_feasible(), "decoded model violates intervals {:?}", report.violated);
            (SolveStatus::Feasible, Some(col))
        }
        DpllOutcome::Unsat => (SolveStatus::Infeasible, None),
        DpllOutcome::Unknown => (SolveStatus::Unknown, None),
    };
    Ok(SolveOutcome { status, witness, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Counts;
    use crate::solver::{enumerate_colorings, scan_feasible_colorings};
    use proptest::prelude::*;

    fn inst(n: usize, spans: &[(usize, usize, [u32; 3])]) -> Instance {
        Instance::from_spans(n, spans.iter().map(|&(l, h, r)| (l, h, Counts(r)))).unwrap()
    }

    /// All models of the encoding projected to colorings, by blocking each
    /// found coloring and re-solving.
    fn decoded_models(i: &Instance) -> Vec<Coloring> {
        let mut enc = encode_to_cnf(i);
        let mut out = Vec::new();
        while let (DpllOutcome::Sat(model), _) = solve_dpll(&enc.cnf, Budget::unlimited()) {
            let col = decode_model(&enc.varmap, &model).unwrap();
            let block: Vec<Lit> = (1..=i.n()).map(|p| Lit::neg(enc.varmap.var(p, col.at(p)))).collect();
            enc.cnf.add(block);
            out.push(col);
        }
        out.sort_by_key(|c| c.letters());
        out
    }

    #[test]
    fn single_black() {
        let i = inst(1, &[(1, 1, [0, 1, 0])]);
        let enc = encode_to_cnf(&i);
        assert_eq!(enc.cnf.num_vars, 3 + enc.aux_count);
        let out = solve_via_dpll(&i, Budget::unlimited()).unwrap();
        assert_eq!(out.witness.unwrap().letters(), "B");
        assert_eq!(decoded_models(&i).len(), 1);
    }

    #[test]
    fn conflicting_units_unsat() {
        let i = inst(2, &[(1, 1, [1, 0, 0]), (1, 2, [0, 2, 0])]);
        assert_eq!(solve_via_dpll(&i, Budget::unlimited()).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn y1_models_match_enumeration() {
        let i = inst(
            8,
            &[
                (3, 5, [1, 1, 1]),
                (4, 6, [1, 1, 1]),
                (6, 7, [1, 0, 1]),
                (5, 8, [1, 1, 2]),
                (2, 2, [0, 1, 0]),
                (1, 8, [2, 3, 3]),
            ],
        );
        assert!(solve_via_dpll(&i, Budget::unlimited()).unwrap().is_feasible());
        let mut expected = enumerate_colorings(&i, 10).unwrap();
        expected.sort_by_key(|c| c.letters());
        assert_eq!(decoded_models(&i), expected);
    }

    #[test]
    fn one_hot_violation_detected() {
        let i = inst(1, &[]);
        let enc = encode_to_cnf(&i);
        let mut model = vec![false; enc.cnf.num_vars];
        assert_eq!(decode_model(&enc.varmap, &model).unwrap_err(), SolverError::OneHot(1));
        model[enc.varmap.var(1, Color::Red) as usize - 1] = true;
        model[enc.varmap.var(1, Color::White) as usize - 1] = true;
        assert_eq!(decode_model(&enc.varmap, &model).unwrap_err(), SolverError::OneHot(1));
    }

    fn arb_small_instance() -> impl Strategy<Value = Instance> {
        (1usize..=6).prop_flat_map(|n| {
            let color = prop::collection::vec(0usize..3, n);
            let spans = prop::collection::vec((1..=n, 1..=n, any::<bool>()), 0..=4);
            (Just(n), color, spans).prop_map(|(n, hidden, spans)| {
                let spans = spans.into_iter().map(|(a, b, perturb)| {
                    let (lo, hi) = (a.min(b), a.max(b));
                    let mut req = [0u32; 3];
                    for &c in &hidden[lo - 1..hi] {
                        req[c] += 1;
                    }
                    if perturb && req[0] > 0 {
                        req[0] -= 1;
                        req[1] += 1;
                    }
                    (lo, hi, Counts(req))
                });
                Instance::from_spans(n, spans).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn decoded_model_set_is_feasible_set(i in arb_small_instance()) {
            prop_assert_eq!(decoded_models(&i), {
                let mut v = scan_feasible_colorings(&i).unwrap();
                v.sort_by_key(|c| c.letters());
                v
            });
        }
    }
}
