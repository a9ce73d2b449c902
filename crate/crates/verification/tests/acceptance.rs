//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every line is printed even when an earlier one fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revenge_core::counting::{count_configurations, pigeonhole_bound, scientific};
use revenge_core::heuristic::sample_goal_state;
use revenge_core::phases::{generators, predicate, subgroup, target_subgroup};
use revenge_core::scramble::random_scramble;
use revenge_core::search::verify_solution;
use revenge_core::{
    format_moves, parse_moves, twist_distance, CubeState, Move, MoveSequence, PhaseId, SearchConfig, Solution, Solver,
    Turn,
};
use revenge_verification::oracle;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, n: usize, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {n:>2} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn configuration_count(r: &mut Report) {
    let t = Instant::now();
    let count = count_configurations();
    let exact = count == oracle::configurations() && count.to_string() == oracle::CONFIGURATIONS;
    let (m, e) = scientific(&count, 4);
    let secs = t.elapsed().as_secs_f64();
    r.line(
        1,
        "configuration count",
        exact && (m, e) == (7401, 45) && secs < 1.0,
        format!("{count} = {}.{:03}e{e}, exact match {exact}, {secs:.3} s", m / 1000, m % 1000),
    );
}

fn pigeonhole(r: &mut Report) {
    let t = Instant::now();
    let count = count_configurations();
    let n = pigeonhole_bound(&count);
    let reference = oracle::pigeonhole(&count);
    let secs = t.elapsed().as_secs_f64();
    r.line(
        2,
        "pigeonhole bound",
        n == reference && (33..=35).contains(&n) && secs < 1.0,
        format!("n = {n} (oracle {reference}), {secs:.3} s"),
    );
}

fn move_algebra(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let states: Vec<CubeState> =
        (0..8).map(|i| CubeState::solved().apply_sequence(&random_scramble(40, rng.gen::<u64>() + i))).collect();
    let mut problems = Vec::new();
    for m in Move::all() {
        let order = if m.turn() == Turn::Half { 2 } else { 4 };
        for x in &states {
            let mut y = *x;
            for k in 1..=order {
                y = y.apply_move(m);
                if (y == *x) != (k == order) {
                    problems.push(format!("order of {m}"));
                }
            }
        }
        let (c, w, x) = oracle::disturbance(m);
        let expected = if m.is_outer() { (4, 8, 4) } else { (0, 4, 8) };
        if (c, w, x) != expected || c + w + x != if m.is_outer() { 16 } else { 12 } {
            problems.push(format!("{m} disturbs {c}+{w}+{x}"));
        }
        for n in Move::all().filter(|n| n.axis() == m.axis()) {
            for x in &states {
                if x.apply_move(m).apply_move(n) != x.apply_move(n).apply_move(m) {
                    problems.push(format!("{m} {n} do not commute"));
                }
            }
        }
    }
    let f = |s: &str| parse_moves(s).unwrap();
    for x in &states {
        if x.apply_sequence(&f("F F2")) != x.apply_sequence(&f("F'")) {
            problems.push("F F2 != F'".into());
        }
    }
    if f("F F2").simplify() != f("F'") {
        problems.push("F F2 does not simplify to F'".into());
    }
    let secs = t.elapsed().as_secs_f64();
    problems.dedup();
    r.line(
        3,
        "move algebra",
        problems.is_empty() && secs < 10.0,
        format!(
            "36 move orders, disturbance 12 inner / 16 outer, parallel commutation, F F2 = F'; {} problems {:?}, {secs:.2} s",
            problems.len(),
            problems.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

fn phase_scheme(r: &mut Report) {
    let mut not_nested = Vec::new();
    for i in 1..8 {
        let missing: Vec<String> =
            subgroup(i).iter().filter(|m| !subgroup(i - 1).contains(m)).map(|m| m.to_string()).collect();
        if !missing.is_empty() {
            not_nested.push(format!("G{i} not within G{} (missing {})", i - 1, missing.join(" ")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut necessity, mut invariance, mut trials) = (0, 0, 0);
    for phase in PhaseId::all() {
        let gens = target_subgroup(phase);
        for _ in 0..1000 {
            trials += 1;
            let mut s = CubeState::solved();
            for _ in 0..rng.gen_range(0..40) {
                if !gens.is_empty() {
                    s.apply_move_in_place(gens[rng.gen_range(0..gens.len())]);
                }
            }
            necessity += !predicate(phase, &s) as usize;
            let g = sample_goal_state(phase, &mut rng);
            invariance += gens.iter().filter(|&&m| !predicate(phase, &g.apply_move(m))).count();
        }
    }
    let nested = not_nested.is_empty();
    r.line(
        4,
        "phase scheme soundness",
        nested && necessity == 0 && invariance == 0,
        format!(
            "nesting {}; necessity failures {necessity}/{trials}; invariance failures {invariance}",
            if nested { "ok".to_string() } else { not_nested.join("; ") },
        ),
    );
}

/// Walk-length caps per phase for the shallow oracle instances.
const SHALLOW: [usize; 8] = [4, 4, 4, 5, 5, 6, 6, 6];

fn shallow_instances() -> Vec<Vec<(CubeState, u32)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    PhaseId::all()
        .map(|p| {
            let cap = SHALLOW[p.index()];
            (0..500)
                .map(|i| {
                    let len = (i / 2) % (cap + 1);
                    let s = if i % 2 == 0 {
                        oracle::instance(p, len, &mut rng)
                    } else {
                        oracle::leaving_instance(p, len, &mut rng)
                    };
                    (s, oracle::goal_distance(p, &s, cap as u32).expect("a walk can be undone"))
                })
                .collect()
        })
        .collect()
}

fn admissibility(r: &mut Report, solver: &Solver, instances: &[Vec<(CubeState, u32)>]) {
    let (mut over, mut zero_mismatch, mut total) = (0, 0, 0);
    let mut depths = [0usize; 7];
    for p in PhaseId::all() {
        for &(s, d) in &instances[p.index()] {
            total += 1;
            depths[d as usize] += 1;
            let h = twist_distance(&s, p, solver.metric(p));
            over += (h.ceil() > d) as usize;
            zero_mismatch += ((h.eighths() == 0) != predicate(p, &s)) as usize;
        }
    }
    r.line(
        5,
        "heuristic admissibility",
        over == 0 && zero_mismatch == 0 && instances.iter().all(|v| v.len() >= 500),
        format!("{total} states, oracle depths 0..6 {depths:?}; overestimates {over}; zero/goal mismatches {zero_mismatch}"),
    );
}

fn optimality(r: &mut Report, solver: &Solver, instances: &[Vec<(CubeState, u32)>]) {
    let config = SearchConfig::default();
    let (mut wrong, mut total) = (0, 0);
    for p in PhaseId::all() {
        for &(s, d) in &instances[p.index()] {
            total += 1;
            let ok = match solver.solve_phase(p, &s, &config) {
                Ok(found) => found.moves.len() as u32 == d && predicate(p, &s.apply_sequence(&found.moves)),
                Err(_) => false,
            };
            wrong += !ok as usize;
        }
    }
    r.line(6, "per-phase optimality", wrong == 0, format!("{total} instances, {wrong} differ from brute force"));
}

struct Run {
    start: CubeState,
    solution: Option<Solution>,
}

fn end_to_end(r: &mut Report, solver: &Solver) -> Vec<Run> {
    let t = Instant::now();
    let config = SearchConfig::default();
    let runs: Vec<Run> = (0..1000)
        .map(|seed| {
            let start = CubeState::solved().apply_sequence(&random_scramble(35, seed));
            let solution = solver.solve(&start, &config).ok().filter(|sol| verify_solution(&start, sol).is_ok());
            Run { start, solution }
        })
        .collect();
    let mut lengths: Vec<usize> = runs.iter().flatten_solutions().map(|s| s.simplified_total.len()).collect();
    lengths.sort_unstable();
    let solved = lengths.len();
    let (min, median, max) = match lengths.as_slice() {
        [] => (0, 0, 0),
        l => (l[0], l[l.len() / 2], l[l.len() - 1]),
    };
    let mut raw: Vec<usize> = runs.iter().flatten_solutions().map(|s| s.total.len()).collect();
    raw.sort_unstable();
    r.line(
        7,
        "end-to-end solving",
        solved == 1000 && median < 120,
        format!(
            "{solved}/1000 solved and verified; simplified min/median/max {min}/{median}/{max}; \
             total median {}; {:.0} s",
            raw.get(raw.len() / 2).copied().unwrap_or(0),
            t.elapsed().as_secs_f64()
        ),
    );
    runs
}

trait Solutions<'a> {
    fn flatten_solutions(self) -> impl Iterator<Item = &'a Solution>;
}

impl<'a, I: Iterator<Item = &'a Run>> Solutions<'a> for I {
    fn flatten_solutions(self) -> impl Iterator<Item = &'a Solution> {
        self.filter_map(|r| r.solution.as_ref())
    }
}

fn has_same_slice_boundary(sol: &Solution) -> bool {
    let mut last: Option<Move> = None;
    for p in &sol.phases {
        if let (Some(l), Some(&first)) = (last, p.moves().first()) {
            if l.slice() == first.slice() {
                return true;
            }
        }
        last = p.moves().last().copied().or(last);
    }
    false
}

fn boundary_simplification(r: &mut Report, runs: &[Run]) {
    let (mut bad, mut shorter, mut boundary, mut shorter_on_boundary) = (0, 0, 0, 0);
    let mut example = String::new();
    for run in runs {
        let Some(sol) = &run.solution else {
            bad += 1;
            continue;
        };
        let same = run.start.apply_sequence(&sol.simplified_total) == run.start.apply_sequence(&sol.total);
        bad += (!same || sol.simplified_total.len() > sol.total.len()) as usize;
        let b = has_same_slice_boundary(sol);
        let s = sol.simplified_total.len() < sol.total.len();
        boundary += b as usize;
        shorter += s as usize;
        if b && s {
            shorter_on_boundary += 1;
            if example.is_empty() {
                example = format!("{} -> {}", sol.total.len(), sol.simplified_total.len());
            }
        }
    }
    r.line(
        8,
        "boundary simplification",
        bad == 0 && shorter_on_boundary > 0,
        format!(
            "{} solves, {bad} violations; {boundary} with a same-slice boundary, {shorter} strictly shorter \
             ({shorter_on_boundary} at a boundary, e.g. {example})",
            runs.len()
        ),
    );
}

fn relaxation(r: &mut Report, solver: &Solver, runs: &[Run]) {
    let t = Instant::now();
    let config = SearchConfig { relaxation: [1, 0, 0, 0, 0, 0, 0, 0], relaxation_candidates: 8, ..Default::default() };
    let (mut worse, mut better, mut total, mut saved) = (0, 0, 0, 0);
    for run in runs.iter().take(100) {
        let Some(base) = &run.solution else {
            worse += 1;
            continue;
        };
        total += 1;
        match solver.solve_relaxed(&run.start, &config) {
            Ok(sol) if verify_solution(&run.start, &sol).is_ok() => {
                let (a, b) = (sol.simplified_total.len(), base.simplified_total.len());
                worse += (a > b) as usize;
                better += (a < b) as usize;
                saved += b.saturating_sub(a);
            }
            _ => worse += 1,
        }
    }
    r.line(
        9,
        "relaxation",
        worse == 0 && total >= 100,
        format!(
            "offset 1 on phase 1 over {total} scrambles: {worse} worse, {better} strictly shorter ({saved} moves saved); {:.0} s",
            t.elapsed().as_secs_f64()
        ),
    );
}

/// The printed phase sequences, with the phase whose generators they use.
const PRINTED: [(u8, &str); 6] = [
    (3, "R2 B U' r2 b2 d2 D' F r2 B"),
    (4, "F2 l2 U2 R2 B2 U2 r2 U f2"),
    (5, "L B L F' R"),
    (6, "U F D L2 B' F' U B"),
    (7, "R2 F2 U F2 U' L2 U R2 U"),
    (8, "R2 D2 R2 U2 R2 B2 D2 R2 F2 L2 B2 D2"),
];

fn printed_sequences(r: &mut Report) {
    let mut problems = Vec::new();
    for (n, text) in PRINTED {
        let phase = PhaseId::new(n).unwrap();
        match parse_moves(text) {
            Ok(seq) => {
                if format_moves(&seq) != text {
                    problems.push(format!("phase {n} formats as {}", format_moves(&seq)));
                }
                if parse_moves(&format_moves(&seq)).ok() != Some(seq.clone()) {
                    problems.push(format!("phase {n} does not round-trip"));
                }
                let illegal: MoveSequence = seq.iter().copied().filter(|m| !generators(phase).contains(m)).collect();
                if !illegal.is_empty() {
                    problems.push(format!("phase {n} uses {illegal}"));
                }
            }
            Err(e) => problems.push(format!("phase {n}: {e}")),
        }
    }
    r.line(10, "printed move sequences", problems.is_empty(), format!("6 sequences; problems {problems:?}"));
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    configuration_count(&mut r);
    pigeonhole(&mut r);
    move_algebra(&mut r);
    phase_scheme(&mut r);
    let t = Instant::now();
    let solver = Solver::new();
    println!("tables built in {:.1} s", t.elapsed().as_secs_f64());
    let instances = shallow_instances();
    admissibility(&mut r, &solver, &instances);
    optimality(&mut r, &solver, &instances);
    let runs = end_to_end(&mut r, &solver);
    boundary_simplification(&mut r, &runs);
    relaxation(&mut r, &solver, &runs);
    printed_sequences(&mut r);
    println!("{} of 10 criteria failed", r.failed);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
