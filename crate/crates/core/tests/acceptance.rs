//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use icc_core::cnf::{brute_force_sat, emit_dimacs, eval, planted_random_3sat, Assignment, CnfFormula};
use icc_core::format::emit_instance;
use icc_core::gap::{
    build_expander, compute_epsilon, edge_expansion_exact, expansion_lower_bound_spectral, gap_reduce, soundness_audit,
    ExpanderMethod, Multigraph, Rational64,
};
use icc_core::generator::{random_coloring, random_hdx_instance};
use icc_core::model::{verify, Color, Coloring, Counts, Instance};
use icc_core::reduction::{emit_map, encode_coloring, extract_assignment, gadget_layout, reduce, Template};
use icc_core::solver::{
    enumerate_projections, max_satisfy_brute, scan_feasible_colorings, solve_backtracking, solve_via_dpll, Budget,
    SolveStatus,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(r: u32, b: u32, w: u32) -> Counts {
    Counts::new(r, b, w)
}

fn triples(reqs: &[[u32; 3]]) -> Vec<Counts> {
    reqs.iter().map(|&[r, b, w]| c(r, b, w)).collect()
}

const LITERAL: [[u32; 3]; 6] = [[1, 1, 1], [1, 1, 1], [1, 0, 1], [1, 1, 2], [0, 1, 0], [2, 3, 3]];
const LITERAL_NEG: [[u32; 3]; 6] = [[1, 1, 1], [1, 1, 1], [1, 1, 0], [1, 2, 1], [0, 0, 1], [2, 3, 3]];
const CORE_NEG: [[u32; 3]; 14] = [
    [1, 1, 1],
    [1, 1, 1],
    [1, 0, 1],
    [1, 1, 2],
    [0, 1, 0],
    [2, 3, 3],
    [1, 1, 1],
    [1, 1, 1],
    [1, 0, 1],
    [1, 1, 2],
    [0, 1, 0],
    [2, 3, 3],
    [0, 2, 1],
    [4, 7, 7],
];
const CLAUSE: [[u32; 3]; 6] = [[1, 2, 2], [1, 2, 2], [1, 6, 6], [1, 3, 3], [1, 2, 2], [1, 7, 7]];
const CLAUSE_SPANS: [(usize, usize); 6] = [(7, 11), (19, 23), (9, 21), (37, 43), (52, 56), (40, 54)];

fn reqs_of(t: &Template, negated: bool) -> Vec<Counts> {
    t.requirements(negated).map(|(_, _, r)| r).collect()
}

fn literal_contract(cols: &[Coloring], t: usize, f: usize, a: usize, negated: bool) -> Result<(), String> {
    for col in cols {
        let black = |p: usize| col.at(p) == Color::Black;
        ensure(black(t) != black(f), || format!("{}: t/f not exactly one BLACK", col.letters()))?;
        let witness = if negated { f } else { t };
        ensure(col.at(a) != Color::Red || black(witness), || {
            format!("{}: RED a without BLACK witness", col.letters())
        })?;
    }
    Ok(())
}

fn criterion_1() -> Check {
    let layout = gadget_layout().map_err(|e| e.to_string())?;
    ensure(reqs_of(&layout.y1, false) == triples(&LITERAL), || "y1 positive requirements".into())?;
    ensure(reqs_of(&layout.y1, true) == triples(&LITERAL_NEG), || "y1 negated requirements".into())?;
    ensure(reqs_of(&layout.y3, true) == triples(&LITERAL), || "y3 negated requirements".into())?;
    ensure(reqs_of(&layout.core, true) == triples(&CORE_NEG), || "core negated requirements".into())?;
    let clause: Vec<_> = layout.clause.intervals.iter().map(|&(lo, hi, r)| ((lo, hi), r)).collect();
    let expected: Vec<_> = CLAUSE_SPANS.iter().copied().zip(triples(&CLAUSE)).collect();
    ensure(clause == expected, || format!("clause intervals {clause:?}"))?;
    ensure(layout.clause.len == 62 && layout.intervals_per_clause() == 32, || "block size".into())?;

    let mut counts = Vec::new();
    for (name, t) in [("y1", &layout.y1), ("y3", &layout.y3)] {
        for negated in [false, true] {
            let inst = t.instance(negated);
            ensure(inst.n() == 8, || format!("{name} has {} nodes", inst.n()))?;
            let cols = scan_feasible_colorings(&inst).map_err(|e| e.to_string())?;
            ensure(cols.len() == 3, || format!("{name} negated={negated}: {} feasible", cols.len()))?;
            literal_contract(&cols, t.t, t.f, t.a[0], negated).map_err(|e| format!("{name}: {e}"))?;
            counts.push(cols.len());
            if name == "y1" && !negated {
                let letters: Vec<_> = cols.iter().map(Coloring::letters).collect();
                ensure(letters == ["BBRWBRWW", "BBWRBWRW", "WBRBWRWB"], || format!("y1 colorings {letters:?}"))?;
            }
        }
    }
    Ok(format!("feasible counts {counts:?}"))
}

fn sign_patterns() -> Vec<[i64; 3]> {
    (0..8).map(|m| [1, 2, 3].map(|v: i64| if m >> (v - 1) & 1 == 1 { -v } else { v })).collect()
}

fn criterion_2() -> Check {
    let mut total = 0;
    for pattern in sign_patterns() {
        let f = CnfFormula::from_triples(3, &[pattern]).map_err(|e| e.to_string())?;
        let (inst, map) = reduce(&f).map_err(|e| e.to_string())?;
        let (s1, s2, s3) = (map.slot(1, 1), map.slot(1, 2), map.slot(1, 3));
        let pos = [s1.t, s1.f, s1.a[0], s2.t, s2.f, s2.a[0], s2.a[1], s3.t, s3.f, s3.a[0]];
        let projections = enumerate_projections(&inst, &pos, Budget::unlimited()).map_err(|e| e.to_string())?;
        ensure(!projections.is_empty(), || format!("{pattern:?}: no feasible coloring"))?;
        for p in &projections {
            let [t1, f1, a1, t2, f2, a2l, a2r, t3, f3, a3] = p[..] else { unreachable!() };
            let black = |x: Color| x == Color::Black;
            let red = |x: Color| x == Color::Red;
            ensure(black(t1) != black(f1) && black(t3) != black(f3), || {
                format!("{pattern:?}: outer t/f not exactly one BLACK")
            })?;
            ensure(!red(a1) || black(if s1.negated { f1 } else { t1 }), || {
                format!("{pattern:?}: RED a1 without BLACK witness")
            })?;
            ensure(!red(a3) || black(if s3.negated { f3 } else { t3 }), || {
                format!("{pattern:?}: RED a3 without BLACK witness")
            })?;
            ensure(black(t2) != black(f2), || format!("{pattern:?}: t2/f2 not exactly one BLACK"))?;
            let witness2 = if s2.negated { f2 } else { t2 };
            ensure(!(red(a2l) && red(a2r)) || black(witness2), || {
                format!("{pattern:?}: RED a2 pair without BLACK witness")
            })?;
            ensure(red(a1) || red(a3) || (red(a2l) && red(a2r)), || format!("{pattern:?}: no active literal"))?;
        }
        total += projections.len();
    }
    Ok(format!("8 sign patterns, {total} distinct special-node projections"))
}

fn criterion_3() -> Check {
    for k in 0..20u64 {
        let p = 4 + (k as usize % 7);
        let q = 1 + (k as usize * 7 % 20);
        let (f, planted) = planted_random_3sat(p, q, 100 + k).map_err(|e| e.to_string())?;
        let (inst, map) = reduce(&f).map_err(|e| e.to_string())?;
        let col = encode_coloring(&map, &planted).map_err(|e| e.to_string())?;
        let rep = verify(&inst, &col).map_err(|e| e.to_string())?;
        ensure(rep.violated.is_empty(), || format!("p={p} q={q}: {} violations", rep.violated.len()))?;
        let back = extract_assignment(&map, &col).map_err(|e| e.to_string())?;
        ensure(eval(&f, &back).is_empty(), || format!("p={p} q={q}: extracted assignment unsatisfying"))?;
    }
    Ok("20 planted formulas".into())
}

fn agree(f: &CnfFormula) -> Result<bool, String> {
    let sat = brute_force_sat(f).map_err(|e| e.to_string())?.is_some();
    let (inst, _) = reduce(f).map_err(|e| e.to_string())?;
    let out = solve_via_dpll(&inst, Budget::unlimited()).map_err(|e| e.to_string())?;
    ensure(out.status != SolveStatus::Unknown, || "dpll unknown".into())?;
    if let Some(w) = &out.witness {
        ensure(verify(&inst, w).map_err(|e| e.to_string())?.is_feasible(), || "dpll witness infeasible".into())?;
    }
    ensure(sat == out.is_feasible(), || format!("disagreement on {}", emit_dimacs(f).replace('\n', " ")))?;
    Ok(sat)
}

fn criterion_4() -> Check {
    let patterns = sign_patterns();
    let mut sets: Vec<Vec<[i64; 3]>> = patterns.iter().map(|&p| vec![p]).collect();
    for i in 0..8 {
        for j in i + 1..8 {
            sets.push(vec![patterns[i], patterns[j]]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut random = Vec::new();
    for _ in 0..20 {
        let p = rng.gen_range(3..=6);
        let q = rng.gen_range(1..=6);
        let f = (0..q)
            .map(|_| {
                let mut vars: Vec<i64> = (1..=p as i64).collect();
                let mut lits = [0i64; 3];
                for l in &mut lits {
                    let v = vars.swap_remove(rng.gen_range(0..vars.len()));
                    *l = if rng.gen_bool(0.5) { -v } else { v };
                }
                lits
            })
            .collect::<Vec<_>>();
        random.push((p, f));
    }
    let mut sat_count = 0;
    for s in &sets {
        sat_count += agree(&CnfFormula::from_triples(3, s).map_err(|e| e.to_string())?)? as usize;
    }
    for (p, f) in &random {
        sat_count += agree(&CnfFormula::from_triples(*p, f).map_err(|e| e.to_string())?)? as usize;
    }
    let unsat8 = CnfFormula::from_triples(3, &patterns).map_err(|e| e.to_string())?;
    ensure(!agree(&unsat8)?, || "all-8-patterns formula satisfiable".into())?;
    let (inst, _) = reduce(&unsat8).map_err(|e| e.to_string())?;
    let bt = solve_backtracking(&inst, Budget::unlimited()).map_err(|e| e.to_string())?;
    ensure(bt.status == SolveStatus::Infeasible, || "backtracking did not refute the 8-pattern instance".into())?;
    let n = sets.len() + random.len();
    Ok(format!("{n} formulas agree ({sat_count} satisfiable), 8-pattern instance INFEASIBLE"))
}

fn criterion_5() -> Check {
    let mut instances = 0;
    for s1 in 0..3 {
        for s2 in 0..3 {
            for (n1, n2) in [(false, false), (false, true), (true, false), (true, true)] {
                let mut c1 = [2, 3, 4];
                let mut c2 = [5, 6, 7];
                c1.swap(0, s1);
                c2.swap(0, s2);
                c1[s1] = if n1 { -1 } else { 1 };
                c2[s2] = if n2 { -1 } else { 1 };
                let f = CnfFormula::from_triples(7, &[c1, c2]).map_err(|e| e.to_string())?;
                let (inst, map) = reduce(&f).map_err(|e| e.to_string())?;
                let (a, b) = (map.slot(1, s1 + 1), map.slot(2, s2 + 1));
                ensure(a.var == 1 && b.var == 1, || "shared variable misplaced".into())?;
                let proj = enumerate_projections(&inst, &[a.t, b.t], Budget::unlimited()).map_err(|e| e.to_string())?;
                ensure(!proj.is_empty(), || format!("{c1:?} {c2:?}: infeasible"))?;
                ensure(proj.iter().all(|p| p[0] == p[1]), || format!("{c1:?} {c2:?}: t colors differ {proj:?}"))?;
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} two-clause instances, t colors always equal"))
}

fn perturb(inst: &Instance, rng: &mut ChaCha8Rng) -> Instance {
    let spans = inst.intervals().iter().map(|iv| {
        let mut r = iv.req;
        if rng.gen_bool(0.3) {
            let from = Color::from_index(rng.gen_range(0..3));
            let to = Color::from_index(rng.gen_range(0..3));
            if r.get(from) > 0 && from != to {
                let mut v = [r.red(), r.black(), r.white()];
                v[from.index()] -= 1;
                v[to.index()] += 1;
                r = c(v[0], v[1], v[2]);
            }
        }
        (iv.lo, iv.hi, r)
    });
    Instance::from_spans(inst.n(), spans.collect::<Vec<_>>()).expect("spans unchanged")
}

fn recount_max(inst: &Instance) -> usize {
    let n = inst.n();
    let mut best = 0;
    for code in 0..3usize.pow(n as u32) {
        let mut x = code;
        let col = Coloring::new(
            (0..n)
                .map(|_| {
                    let c = Color::from_index(x % 3);
                    x /= 3;
                    c
                })
                .collect(),
        );
        let sat = inst.intervals().iter().filter(|iv| Counts::of(&col.colors()[iv.lo - 1..iv.hi]) == iv.req).count();
        best = best.max(sat);
    }
    best
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a1);
    let mut feasible = 0;
    for k in 0..100u64 {
        let n = rng.gen_range(2..=12);
        let frags = rng.gen_range(1..=2 * n);
        let lo = rng.gen_range(1..=n);
        let hi = rng.gen_range(lo..=n);
        let (base, _) = random_hdx_instance(n, frags, lo, hi, 1000 + k).map_err(|e| e.to_string())?;
        let inst = if k % 2 == 1 { perturb(&base, &mut rng) } else { base };
        let bt = solve_backtracking(&inst, Budget::unlimited()).map_err(|e| e.to_string())?;
        let dp = solve_via_dpll(&inst, Budget::unlimited()).map_err(|e| e.to_string())?;
        let scan = !scan_feasible_colorings(&inst).map_err(|e| e.to_string())?.is_empty();
        ensure(bt.is_feasible() == scan && dp.is_feasible() == scan, || format!("instance {k}: solvers disagree"))?;
        feasible += scan as usize;
    }
    for k in 0..50u64 {
        let n = rng.gen_range(2..=10);
        let frags = rng.gen_range(1..=2 * n);
        let lo = rng.gen_range(1..=n);
        let hi = rng.gen_range(lo..=n);
        let (base, _) = random_hdx_instance(n, frags, lo, hi, 5000 + k).map_err(|e| e.to_string())?;
        let inst = perturb(&base, &mut rng);
        let (col, count) = max_satisfy_brute(&inst).map_err(|e| e.to_string())?;
        let rep = verify(&inst, &col).map_err(|e| e.to_string())?;
        ensure(rep.satisfied_count == count, || format!("max instance {k}: witness recount differs"))?;
        ensure(recount_max(&inst) == count, || format!("max instance {k}: optimum differs"))?;
    }
    Ok(format!("100 feasibility instances ({feasible} feasible), 50 max-satisfy instances"))
}

fn criterion_7() -> Check {
    let mut graphs = 0;
    let mut min_margin = f64::INFINITY;
    for n in 4..=16 {
        for seed in 0..5 {
            let (g, cert) = build_expander(n, 4, 1.0, seed, 200).map_err(|e| e.to_string())?;
            let exact = edge_expansion_exact(&g).map_err(|e| e.to_string())?;
            let spectral = expansion_lower_bound_spectral(&g).map_err(|e| e.to_string())?;
            let exact_f = *exact.numer() as f64 / *exact.denom() as f64;
            ensure(exact_f >= spectral - 1e-9, || format!("n={n} seed={seed}: {exact} < {spectral}"))?;
            ensure(exact_f >= 1.0, || format!("n={n} seed={seed}: h {exact} below target"))?;
            if n > 5 {
                ensure(cert.method == ExpanderMethod::RandomRegular, || format!("n={n}: {}", cert.method.name()))?;
            }
            min_margin = min_margin.min(exact_f - spectral);
            graphs += 1;
        }
    }
    let k4 = Multigraph::complete(4);
    let (h, b) = (edge_expansion_exact(&k4).unwrap(), expansion_lower_bound_spectral(&k4).unwrap());
    ensure(h == Rational64::from_integer(2) && (b - 2.0).abs() < 1e-9, || format!("K4: {h} vs {b}"))?;
    let c6 = Multigraph::cycle(6);
    let (h, b) = (edge_expansion_exact(&c6).unwrap(), expansion_lower_bound_spectral(&c6).unwrap());
    ensure(h == Rational64::new(2, 3) && (b - 0.5).abs() < 1e-9, || format!("C6: {h} vs {b}"))?;
    Ok(format!("{graphs} graphs, min exact - spectral {min_margin:.6}; K4 2 vs 2, C6 2/3 vs 0.5"))
}

fn criterion_8() -> Check {
    let mut audits = 0usize;
    let mut max_ratio = Rational64::from_integer(0);
    let mut saw_random_regular = false;
    for (k, (p, q)) in [(3, 6), (4, 5), (5, 6), (6, 6), (4, 4)].into_iter().enumerate() {
        let (f, planted) = planted_random_3sat(p, q, 40 + k as u64).map_err(|e| e.to_string())?;
        let (inst, map, params) = gap_reduce(&f, 4, 1.0, 40 + k as u64).map_err(|e| e.to_string())?;
        saw_random_regular |= map.expanders.iter().any(|e| e.method == ExpanderMethod::RandomRegular);
        let mut check = |col: &Coloring, what: &str| -> Result<(), String> {
            let rep = soundness_audit(&map, &inst, col, &params).map_err(|e| e.to_string())?;
            ensure(rep.holds, || format!("p={p} q={q} {what}: {rep}"))?;
            if rep.violated > 0 {
                let ratio =
                    Rational64::from_integer(rep.unsat_phi as i64) / Rational64::from_integer(rep.violated as i64);
                max_ratio = max_ratio.max(ratio);
            }
            audits += 1;
            Ok(())
        };
        let mut witnesses = Vec::new();
        for bits in 0..1u32 << p {
            let a = Assignment::new((0..p).map(|i| bits >> i & 1 == 1).collect());
            if eval(&f, &a).is_empty() {
                witnesses.push(encode_coloring(&map, &a).map_err(|e| e.to_string())?);
            }
        }
        ensure(witnesses.iter().any(|w| encode_coloring(&map, &planted).as_ref() == Ok(w)), || "planted".into())?;
        for w in &witnesses {
            let rep = soundness_audit(&map, &inst, w, &params).map_err(|e| e.to_string())?;
            ensure(rep.violated == 0 && rep.unsat_phi == 0, || format!("witness audit {rep}"))?;
            check(w, "witness")?;
        }
        let base = &witnesses[0];
        for pos in 1..=inst.n() {
            for color in Color::ALL.into_iter().filter(|&c| c != base.at(pos)) {
                let mut x = base.clone();
                x.set(pos, color);
                check(&x, "flip")?;
            }
        }
        for t in 0..1000u64 {
            check(&random_coloring(inst.n(), 9000 + t), "random")?;
        }
    }
    ensure(saw_random_regular, || "no random regular expander exercised".into())?;
    Ok(format!("{audits} audits hold, max unsat/V {max_ratio}"))
}

fn criterion_9() -> Check {
    let r = Rational64::new;
    let e1 = compute_epsilon(3, r(3, 1), 1, r(1, 1)).map_err(|e| e.to_string())?;
    let e2 = compute_epsilon(4, r(1, 1), 60, r(1, 8)).map_err(|e| e.to_string())?;
    ensure(e1 == r(1, 4) && e2 == r(1, 6240), || format!("examples gave {e1} and {e2}"))?;
    let d0s = [2usize, 3, 4];
    let h0s = [r(1, 2), r(1, 1), r(2, 1)];
    let cs = [10usize, 32, 60];
    let eps0s = [r(1, 16), r(1, 8), r(1, 4)];
    let eps = |i: usize, j: usize, k: usize, l: usize| compute_epsilon(d0s[i], h0s[j], cs[k], eps0s[l]).unwrap();
    let mut comparisons = 0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let e = eps(i, j, k, l);
                    if i < 2 {
                        ensure(eps(i + 1, j, k, l) < e, || "not decreasing in d0".into())?;
                        comparisons += 1;
                    }
                    if j < 2 {
                        ensure(eps(i, j + 1, k, l) > e, || "not increasing in h0".into())?;
                        comparisons += 1;
                    }
                    if k < 2 {
                        ensure(eps(i, j, k + 1, l) < e, || "not decreasing in c".into())?;
                        comparisons += 1;
                    }
                    if l < 2 {
                        ensure(eps(i, j, k, l + 1) > e, || "not increasing in eps0".into())?;
                        comparisons += 1;
                    }
                }
            }
        }
    }
    Ok(format!("1/4 and 1/6240 exact, {comparisons} monotone steps"))
}

fn criterion_10() -> Check {
    let run = || -> Result<String, String> {
        let mut out = String::new();
        let (f, _) = planted_random_3sat(6, 6, 77).map_err(|e| e.to_string())?;
        out += &emit_dimacs(&f);
        let (inst, map) = reduce(&f).map_err(|e| e.to_string())?;
        out += &emit_instance(&inst);
        out += &emit_map(&map);
        let (ginst, gmap, params) = gap_reduce(&f, 4, 1.0, 77).map_err(|e| e.to_string())?;
        out += &emit_instance(&ginst);
        out += &emit_map(&gmap);
        let (hdx, hidden) = random_hdx_instance(30, 20, 2, 8, 77).map_err(|e| e.to_string())?;
        out += &emit_instance(&hdx);
        out += &hidden.letters();
        for t in 0..20 {
            let rep =
                soundness_audit(&gmap, &ginst, &random_coloring(ginst.n(), t), &params).map_err(|e| e.to_string())?;
            out += &format!("{rep}\n");
        }
        Ok(out)
    };
    let a = run()?;
    let b = run()?;
    ensure(a == b, || "outputs differ between runs".into())?;
    Ok(format!("{} bytes identical across runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Check, Duration); 10] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(60)),
        (criterion_3, Duration::from_secs(10)),
        (criterion_4, Duration::from_secs(600)),
        (criterion_5, Duration::from_secs(60)),
        (criterion_6, Duration::from_secs(300)),
        (criterion_7, Duration::from_secs(60)),
        (criterion_8, Duration::from_secs(600)),
        (criterion_9, Duration::from_secs(1)),
        (criterion_10, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS ({elapsed:.2?}) {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL ({elapsed:.2?}) {detail}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
