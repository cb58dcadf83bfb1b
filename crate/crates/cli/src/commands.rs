use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use icc_core::cnf::{
    brute_force_sat, emit_assignment, emit_dimacs, eval, parse_assignment, parse_dimacs, planted_random_3sat,
};
use icc_core::format::{
    emit_coloring, emit_instance, emit_report, emit_solution, parse_coloring, parse_instance, SolutionText,
};
use icc_core::gap::{
    build_expander, edge_expansion_exact, gap_reduce_with, majority_extract, soundness_audit, GapError, GapOptions,
    Rational64, EXACT_EXPANSION_MAX_N,
};
use icc_core::generator::{random_coloring, random_hdx_instance};
use icc_core::reduction::{emit_map, encode_coloring, extract_assignment, gadget_layout, parse_map, reduce};
use icc_core::solver::{enumerate_up_to, max_satisfy_brute, solve_backtracking, solve_via_dpll};
use icc_core::{check_consistency, verify, Budget, CnfFormula, Coloring, Instance, ReductionMap, SolveStatus};

use crate::error::{CliError, FORMAT, INFEASIBLE, INTERNAL, OK, UNKNOWN};
use crate::{AuditArgs, Command, ExpanderArgs, GapFlags, GenCommand, Method, ReduceArgs, RoundtripArgs, SolveArgs};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Reduce(a) => cmd_reduce(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify { instance, coloring } => cmd_verify(&instance, &coloring),
        Command::Encode { map, assignment, output } => cmd_encode(&map, &assignment, output.as_deref()),
        Command::Extract { map, coloring, majority, instance } => {
            cmd_extract(&map, &coloring, majority.then_some(instance).flatten().as_deref())
        }
        Command::Audit(a) => cmd_audit(a),
        Command::Expander(a) => cmd_expander(a),
        Command::Gen(g) => cmd_gen(g),
        Command::Roundtrip(a) => cmd_roundtrip(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::new(INTERNAL, format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).map_err(|e| CliError::format(path, e))
}

fn load_cnf(path: &Path) -> Result<CnfFormula> {
    parse_dimacs(&read(path)?).map_err(|e| CliError::format(path, e))
}

fn load_map(path: &Path) -> Result<ReductionMap> {
    parse_map(&read(path)?, gadget_layout()?).map_err(|e| CliError::format(path, e))
}

fn load_coloring(path: &Path, n: usize) -> Result<Coloring> {
    match parse_coloring(&read(path)?, Some(n)).map_err(|e| CliError::format(path, e))? {
        SolutionText::Feasible(col) => Ok(col),
        _ => Err(CliError::format(path, "no coloring given")),
    }
}

fn gap_options(g: &GapFlags) -> Result<Option<GapOptions>> {
    if !g.gap {
        return Ok(None);
    }
    let seed = g.seed.ok_or_else(|| CliError::usage("--gap needs --seed"))?;
    let eps0: Rational64 = g.eps0.parse().map_err(|_| CliError::usage(format!("invalid --eps0 '{}'", g.eps0)))?;
    Ok(Some(GapOptions { degree: g.degree, target_h: g.target_h, seed, eps0, ..GapOptions::default() }))
}

fn build(cnf: &CnfFormula, g: &GapFlags) -> Result<(Instance, ReductionMap)> {
    match gap_options(g)? {
        Some(opts) => {
            let (inst, map, _) = gap_reduce_with(cnf, &opts)?;
            Ok((inst, map))
        }
        None => Ok(reduce(cnf)?),
    }
}

fn summary(inst: &Instance, map: &ReductionMap) -> String {
    let mut out = format!(
        "c nodes {} intervals {} clauses {} links {}\n",
        inst.n(),
        inst.len(),
        map.num_clauses(),
        map.links.len()
    );
    if let Some(g) = &map.gap {
        writeln!(
            out,
            "c gap d0 {} h0 {} c {} eps0 {} eps {} threshold {}",
            g.d0, g.h0, g.c, g.eps0, g.eps, g.threshold
        )
        .unwrap();
    }
    out
}

fn cmd_reduce(a: ReduceArgs) -> Result<u8> {
    let cnf = load_cnf(&a.input)?;
    let (inst, map) = build(&cnf, &a.gap)?;
    write(Some(&a.output), &emit_instance(&inst))?;
    write(Some(&a.map), &emit_map(&map))?;
    print!("{}", summary(&inst, &map));
    Ok(OK)
}

fn value_line(col: &Coloring) -> String {
    let mut out = String::from("v");
    for c in col.colors() {
        write!(out, " {}", c.code()).unwrap();
    }
    out.push('\n');
    out
}

fn status_code(s: SolveStatus) -> u8 {
    match s {
        SolveStatus::Feasible => OK,
        SolveStatus::Infeasible => INFEASIBLE,
        SolveStatus::Unknown => UNKNOWN,
    }
}

fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let inst = load_instance(&a.instance)?;
    let bad = check_consistency(&inst);
    if !bad.is_empty() {
        return Err(CliError::new(FORMAT, format!("inconsistent intervals: {bad:?}")));
    }
    if a.max_sat {
        let (col, best) = max_satisfy_brute(&inst)?;
        let mut out = format!("o {best}\n");
        out.push_str(&value_line(&col));
        print!("{out}");
        return Ok(OK);
    }
    if let Some(limit) = a.enumerate {
        let (found, complete) = enumerate_up_to(&inst, limit)?;
        if found.is_empty() {
            print!("{}", emit_solution(&SolutionText::Infeasible));
            return Ok(INFEASIBLE);
        }
        let mut out = format!("c colorings {} complete {}\ns FEASIBLE\n", found.len(), complete as u8);
        for col in &found {
            out.push_str(&value_line(col));
        }
        print!("{out}");
        return Ok(OK);
    }
    let budget = a.budget.map_or(Budget::unlimited(), Budget::nodes);
    let outcome = match a.method {
        Method::Backtrack => solve_backtracking(&inst, budget)?,
        Method::Dpll => solve_via_dpll(&inst, budget)?,
    };
    let text = match (&outcome.status, outcome.witness) {
        (SolveStatus::Feasible, Some(col)) => SolutionText::Feasible(col),
        (SolveStatus::Infeasible, _) => SolutionText::Infeasible,
        _ => SolutionText::Unknown,
    };
    print!("{}", emit_solution(&text));
    Ok(status_code(outcome.status))
}

fn cmd_verify(instance: &Path, coloring: &Path) -> Result<u8> {
    let inst = load_instance(instance)?;
    let col = load_coloring(coloring, inst.n())?;
    let report = verify(&inst, &col)?;
    print!("{}", emit_report(&report));
    Ok(if report.is_feasible() { OK } else { INFEASIBLE })
}

fn cmd_encode(map: &Path, assignment: &Path, output: Option<&Path>) -> Result<u8> {
    let map = load_map(map)?;
    let a =
        parse_assignment(&read(assignment)?, map.formula.num_vars()).map_err(|e| CliError::format(assignment, e))?;
    let col = encode_coloring(&map, &a)?;
    write(output, &emit_coloring(&col))?;
    Ok(OK)
}

fn cmd_extract(map_path: &Path, coloring: &Path, majority: Option<&Path>) -> Result<u8> {
    let map = load_map(map_path)?;
    let col = load_coloring(coloring, map.n)?;
    let a = match majority {
        Some(inst) => majority_extract(&map, &load_instance(inst)?, &col)?,
        None => {
            let a = extract_assignment(&map, &col)?;
            let unsat = eval(&map.formula, &a);
            if !unsat.is_empty() {
                return Err(CliError::new(INFEASIBLE, format!("extracted assignment falsifies clauses {unsat:?}")));
            }
            a
        }
    };
    print!("{}", emit_assignment(&a));
    Ok(OK)
}

fn cmd_audit(a: AuditArgs) -> Result<u8> {
    let map = load_map(&a.map)?;
    let params = map.gap.clone().ok_or_else(|| CliError::format(&a.map, "map has no gap parameters"))?;
    let inst = load_instance(&a.instance)?;
    let colorings: Vec<Coloring> = match &a.coloring {
        Some(p) => vec![load_coloring(p, inst.n())?],
        None => {
            let seed = a.seed.expect("clap requires a seed without a coloring");
            (0..a.trials.unwrap_or(1) as u64).map(|k| random_coloring(inst.n(), seed.wrapping_add(k))).collect()
        }
    };
    let mut out = String::new();
    let mut all_hold = true;
    for col in &colorings {
        let report = soundness_audit(&map, &inst, col, &params)?;
        all_hold &= report.holds;
        writeln!(out, "{report}").unwrap();
    }
    print!("{out}");
    Ok(if all_hold { OK } else { INTERNAL })
}

fn cmd_expander(a: ExpanderArgs) -> Result<u8> {
    let (g, cert) = match build_expander(a.n, a.degree, a.target_h, a.seed, a.retries) {
        Err(GapError::RetriesExhausted { best, .. }) => {
            let h = best.and_then(|b| b.certified_h()).map_or("none".to_string(), |h| h.to_string());
            return Err(CliError::new(INTERNAL, format!("no graph reached expansion {}; best {h}", a.target_h)));
        }
        r => r?,
    };
    let mut out = format!(
        "x n {} d {} method {} edges {} lambda2 {:.9} h_spectral {:.9}\n",
        g.n(),
        cert.d,
        cert.method.name(),
        g.edges().len(),
        cert.lambda2,
        cert.h_spectral
    );
    let mut code = OK;
    if a.check {
        if g.n() < 2 {
            out.push_str("x h_exact none\n");
        } else if g.n() > EXACT_EXPANSION_MAX_N {
            return Err(CliError::usage(format!("--check supports n <= {EXACT_EXPANSION_MAX_N}")));
        } else {
            let exact = cert.h_exact.map_or_else(|| edge_expansion_exact(&g), Ok)?;
            let as_f64 = *exact.numer() as f64 / *exact.denom() as f64;
            let ok = as_f64 >= cert.h_spectral - 1e-9;
            writeln!(out, "x h_exact {exact} h_spectral {:.9} sound {}", cert.h_spectral, ok as u8).unwrap();
            if !ok {
                code = INTERNAL;
            }
        }
    }
    if a.edges {
        for (u, v) in g.edges() {
            writeln!(out, "e {u} {v}").unwrap();
        }
    }
    print!("{out}");
    Ok(code)
}

fn cmd_gen(g: GenCommand) -> Result<u8> {
    match g {
        GenCommand::Cnf { vars, clauses, seed, output, planted } => {
            let (cnf, plant) = planted_random_3sat(vars, clauses, seed)?;
            write(output.as_deref(), &emit_dimacs(&cnf))?;
            if let Some(p) = planted {
                write(Some(&p), &emit_assignment(&plant))?;
            }
        }
        GenCommand::Hdx { length, fragments, min_len, max_len, seed, output, hidden } => {
            let (inst, col) = random_hdx_instance(length, fragments, min_len, max_len, seed)?;
            write(output.as_deref(), &emit_instance(&inst))?;
            if let Some(p) = hidden {
                write(Some(&p), &emit_coloring(&col))?;
            }
        }
    }
    Ok(OK)
}

fn cmd_roundtrip(a: RoundtripArgs) -> Result<u8> {
    let cnf = load_cnf(&a.input)?;
    let (inst, map) = build(&cnf, &a.gap)?;
    let assignment = match &a.assignment {
        Some(p) => parse_assignment(&read(p)?, cnf.num_vars()).map_err(|e| CliError::format(p, e))?,
        None => match brute_force_sat(&cnf)? {
            Some(a) => a,
            None => {
                println!("{}s UNSATISFIABLE", summary(&inst, &map));
                return Ok(INFEASIBLE);
            }
        },
    };
    let col = encode_coloring(&map, &assignment)?;
    let report = verify(&inst, &col)?;
    let mut out = summary(&inst, &map);
    out.push_str(&emit_report(&report));
    if !report.is_feasible() {
        println!("{out}s FAILED");
        return Ok(INTERNAL);
    }
    let back = extract_assignment(&map, &col)?;
    out.push_str(&emit_assignment(&back));
    let ok = eval(&cnf, &back).is_empty();
    out.push_str(if ok { "s OK\n" } else { "s FAILED\n" });
    print!("{out}");
    Ok(if ok { OK } else { INTERNAL })
}
