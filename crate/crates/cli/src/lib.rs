//! Command-line front end for the revenge solver.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use revenge_core::heuristic::DistanceTable;
use revenge_core::phases::describe;
use revenge_core::pruning::PruningTables;
use revenge_core::scramble::random_scramble;
use revenge_core::search::{metric_path, pruning_path, CacheStatus};
use revenge_core::{
    format_moves, format_state, parse_moves, parse_state, CubeState, MoveSequence, PhaseId, SearchConfig, Solution,
    SolveError, Solver,
};

#[derive(Parser, Debug)]
#[command(name = "revenge", version, about = "Eight-phase 4x4x4 solver")]
pub struct Cli {
    /// Directory for the precomputed search tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a seeded random scramble.
    Scramble {
        #[arg(long, default_value_t = 35)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply moves to a state and print the result.
    Apply {
        #[arg(long)]
        state: String,
        #[arg(long)]
        moves: String,
    },
    /// Solve a state or a scramble.
    Solve(SolveArgs),
    /// Exit 0 iff the moves solve the state.
    Verify {
        #[arg(long)]
        state: String,
        #[arg(long)]
        moves: String,
    },
    /// Show the phase scheme.
    Phases {
        #[command(subcommand)]
        action: PhasesAction,
    },
    /// Solve seeded scrambles and report statistics as JSON.
    Bench {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 35)]
        scramble_len: usize,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Build or validate the table cache.
    Tables {
        #[command(subcommand)]
        action: TablesAction,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// State file, or `-` for standard input.
    #[arg(long, conflicts_with = "scramble", required_unless_present = "scramble")]
    pub state: Option<String>,
    /// Scramble applied to the solved cube.
    #[arg(long)]
    pub scramble: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Extra twists per phase, eight comma-separated numbers.
    #[arg(long, value_parser = parse_offsets)]
    pub relax: Option<[u8; 8]>,
    #[arg(long)]
    pub node_budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum PhasesAction {
    Describe,
}

#[derive(Subcommand, Debug)]
pub enum TablesAction {
    Build,
    Check,
}

fn parse_offsets(text: &str) -> Result<[u8; 8], String> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<u8>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values.try_into().map_err(|v: Vec<u8>| format!("expected 8 offsets, got {}", v.len()))
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid state or moves.
    Input(String),
    Solve(SolveError),
    Cache(String),
    /// The moves given to `verify` do not solve the state.
    NotSolved,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 3,
            CliError::Solve(_) | CliError::Cache(_) => 4,
            CliError::NotSolved => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Solve(e) => write!(f, "solver failure: {e}"),
            CliError::Cache(m) => write!(f, "table cache: {m}"),
            CliError::NotSolved => write!(f, "the moves do not solve the state"),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Solve(e)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PhaseReport {
    pub moves: String,
    pub length: usize,
    pub nodes: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub scramble: Option<String>,
    pub phases: Vec<PhaseReport>,
    pub total: String,
    pub simplified_total: String,
    pub total_length: usize,
    pub simplified_length: usize,
    pub verified: bool,
}

impl SolveReport {
    pub fn new(scramble: Option<&MoveSequence>, start: &CubeState, sol: &Solution) -> SolveReport {
        SolveReport {
            scramble: scramble.map(format_moves),
            phases: sol
                .phases
                .iter()
                .zip(sol.nodes)
                .map(|(p, nodes)| PhaseReport { moves: format_moves(p), length: p.len(), nodes })
                .collect(),
            total: format_moves(&sol.total),
            simplified_total: format_moves(&sol.simplified_total),
            total_length: sol.total.len(),
            simplified_length: sol.simplified_total.len(),
            verified: start.apply_sequence(&sol.total).is_solved()
                && start.apply_sequence(&sol.simplified_total).is_solved(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.phases.iter().enumerate() {
            let moves = if p.moves.is_empty() { "-" } else { &p.moves };
            out.push_str(&format!("phase {}: {moves} ({} moves, {} nodes)\n", i + 1, p.length, p.nodes));
        }
        out.push_str(&format!("total ({}): {}\n", self.total_length, self.total));
        out.push_str(&format!("simplified ({}): {}\n", self.simplified_length, self.simplified_total));
        out
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Spread {
    pub min: u64,
    pub median: u64,
    pub max: u64,
}

impl Spread {
    fn of(values: &[u64]) -> Spread {
        let mut v = values.to_vec();
        v.sort_unstable();
        match v.as_slice() {
            [] => Spread { min: 0, median: 0, max: 0 },
            v => Spread { min: v[0], median: v[v.len() / 2], max: v[v.len() - 1] },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PhaseStats {
    pub phase: u8,
    /// Solutions per phase length.
    pub histogram: BTreeMap<usize, usize>,
    pub nodes: Spread,
    pub total_nodes: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub count: usize,
    pub seed: u64,
    pub scramble_len: usize,
    pub cache: String,
    pub table_seconds: f64,
    pub phases: Vec<PhaseStats>,
    pub total_length: Spread,
    pub simplified_length: Spread,
    pub simplified_histogram: BTreeMap<usize, usize>,
    pub wall_seconds: Vec<f64>,
    pub failures: usize,
}

/// Seed of the `i`th bench scramble.
pub fn bench_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
}

pub fn bench(solver: &Solver, count: usize, seed: u64, scramble_len: usize) -> (Vec<Option<Solution>>, Vec<f64>) {
    let runs: Vec<(Option<Solution>, f64)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let start = CubeState::solved().apply_sequence(&random_scramble(scramble_len, bench_seed(seed, i)));
            let t = Instant::now();
            let sol = solver.solve(&start, &SearchConfig::default()).ok();
            (sol, t.elapsed().as_secs_f64())
        })
        .collect();
    runs.into_iter().unzip()
}

pub fn bench_report(
    count: usize,
    seed: u64,
    scramble_len: usize,
    status: CacheStatus,
    table_seconds: f64,
    runs: &[Option<Solution>],
    wall_seconds: Vec<f64>,
) -> BenchReport {
    let solved: Vec<&Solution> = runs.iter().flatten().collect();
    let phases = PhaseId::all()
        .map(|p| {
            let mut histogram = BTreeMap::new();
            let nodes: Vec<u64> = solved.iter().map(|s| s.nodes[p.index()]).collect();
            for s in &solved {
                *histogram.entry(s.phases[p.index()].len()).or_insert(0) += 1;
            }
            PhaseStats { phase: p.get(), histogram, nodes: Spread::of(&nodes), total_nodes: nodes.iter().sum() }
        })
        .collect();
    let totals: Vec<u64> = solved.iter().map(|s| s.total.len() as u64).collect();
    let simplified: Vec<u64> = solved.iter().map(|s| s.simplified_total.len() as u64).collect();
    let mut simplified_histogram = BTreeMap::new();
    for &l in &simplified {
        *simplified_histogram.entry(l as usize).or_insert(0) += 1;
    }
    BenchReport {
        count,
        seed,
        scramble_len,
        cache: match status {
            CacheStatus::Cold => "cold",
            CacheStatus::Warm => "warm",
        }
        .to_string(),
        table_seconds,
        phases,
        total_length: Spread::of(&totals),
        simplified_length: Spread::of(&simplified),
        simplified_histogram,
        wall_seconds,
        failures: runs.len() - solved.len(),
    }
}

pub fn default_cache_dir() -> PathBuf {
    dirs::cache_dir().unwrap_or_else(std::env::temp_dir).join("revenge")
}

fn read_state(source: &str) -> Result<CubeState, CliError> {
    let text = if source == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Input(format!("{source}: {e}")))?
    };
    parse_state(&text).map_err(|e| CliError::Input(e.to_string()))
}

fn read_moves(text: &str) -> Result<MoveSequence, CliError> {
    parse_moves(text).map_err(|e| CliError::Input(e.to_string()))
}

fn load_solver(dir: &Path) -> Result<(Solver, CacheStatus, f64), CliError> {
    let t = Instant::now();
    let (solver, status) = Solver::with_cache(dir).map_err(|e| CliError::Cache(e.to_string()))?;
    Ok((solver, status, t.elapsed().as_secs_f64()))
}

/// Runs one command, writing its normal output to `out`.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let cache_dir = cli.cache_dir.unwrap_or_else(default_cache_dir);
    let io = |e: std::io::Error| CliError::Input(format!("output: {e}"));
    match cli.command {
        Command::Scramble { moves, seed } => writeln!(out, "{}", random_scramble(moves, seed)).map_err(io)?,
        Command::Apply { state, moves } => {
            let s = read_state(&state)?.apply_sequence(&read_moves(&moves)?);
            write!(out, "{}", format_state(&s)).map_err(io)?;
        }
        Command::Verify { state, moves } => {
            if !read_state(&state)?.apply_sequence(&read_moves(&moves)?).is_solved() {
                return Err(CliError::NotSolved);
            }
            writeln!(out, "solved").map_err(io)?;
        }
        Command::Solve(args) => {
            let scramble = args.scramble.as_deref().map(read_moves).transpose()?;
            let start = match (&scramble, &args.state) {
                (Some(seq), _) => CubeState::solved().apply_sequence(seq),
                (None, Some(src)) => read_state(src)?,
                (None, None) => unreachable!("clap requires one of --state and --scramble"),
            };
            let (solver, _, _) = load_solver(&cache_dir)?;
            let config = SearchConfig {
                relaxation: args.relax.unwrap_or([0; 8]),
                node_budget: args.node_budget,
                ..Default::default()
            };
            let sol = match args.relax {
                Some(_) => solver.solve_relaxed(&start, &config)?,
                None => solver.solve(&start, &config)?,
            };
            let report = SolveReport::new(scramble.as_ref(), &start, &sol);
            if !report.verified {
                return Err(CliError::Solve(SolveError::VerificationFailed { phase: PhaseId::LAST }));
            }
            let text = if args.json { report.to_json() + "\n" } else { report.to_text() };
            write!(out, "{text}").map_err(io)?;
        }
        Command::Phases { action: PhasesAction::Describe } => write!(out, "{}", describe()).map_err(io)?,
        Command::Bench { count, seed, scramble_len, threads } => {
            let (solver, status, table_seconds) = load_solver(&cache_dir)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Input(e.to_string()))?;
            let (runs, wall) = pool.install(|| bench(&solver, count, seed, scramble_len));
            let report = bench_report(count, seed, scramble_len, status, table_seconds, &runs, wall);
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes")).map_err(io)?;
            if report.failures > 0 {
                return Err(CliError::Solve(SolveError::VerificationFailed { phase: PhaseId::LAST }));
            }
        }
        Command::Tables { action: TablesAction::Build } => {
            let (_, status, seconds) = load_solver(&cache_dir)?;
            let state = match status {
                CacheStatus::Cold => "built",
                CacheStatus::Warm => "already present",
            };
            writeln!(out, "tables {state} in {} ({seconds:.2} s)", cache_dir.display()).map_err(io)?;
        }
        Command::Tables { action: TablesAction::Check } => {
            let mut bad = 0;
            for p in PhaseId::all() {
                let metric = DistanceTable::load(&metric_path(&cache_dir, p), p).err();
                let pruning = PruningTables::load(&pruning_path(&cache_dir, p), p).err();
                for (name, err) in [("metric", metric), ("pruning", pruning)] {
                    match err {
                        None => writeln!(out, "phase {p} {name}: ok").map_err(io)?,
                        Some(e) => {
                            bad += 1;
                            writeln!(out, "phase {p} {name}: {e}").map_err(io)?;
                        }
                    }
                }
            }
            if bad > 0 {
                return Err(CliError::Cache(format!("{bad} table files missing or invalid")));
            }
        }
    }
    Ok(())
}
