//! Phase-by-phase IDA*.
//!
//! [`Solver::solve`] runs the phases in order. Each phase is an iterative
//! deepening search: a depth-limited DFS at depth 0, 1, 2, ... that prunes
//! any node whose lower bound exceeds the remaining depth. The first path
//! found at the smallest depth is kept, the state is advanced along it and
//! the next phase starts from there.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use crate::cube::CubeState;
use crate::error::{CacheError, SolveError};
use crate::heuristic::{twist_distance, DistanceTable};
use crate::moves::{Move, MoveSequence};
use crate::phases::{generators, predicate, PhaseId};
use crate::pruning::PruningTables;

/// Canonical successors of `last` within the generators of `phase`, in
/// move order (axis, layer, turn).
pub fn successors(phase: PhaseId, last: Option<Move>) -> &'static [Move] {
    static TABLE: OnceLock<Vec<Vec<Vec<Move>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        PhaseId::all()
            .map(|p| {
                (0..=Move::COUNT)
                    .map(|l| {
                        let last = (l < Move::COUNT).then(|| Move::from_index(l));
                        generators(p).iter().copied().filter(|m| m.may_follow(last)).collect()
                    })
                    .collect()
            })
            .collect()
    });
    &table[phase.index()][last.map_or(Move::COUNT, Move::index)]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest depth tried in each phase.
    pub depth_caps: [u8; 8],
    /// Nodes a single phase may expand before giving up.
    pub node_budget: Option<u64>,
    /// Extra twists allowed per phase by [`Solver::solve_relaxed`].
    pub relaxation: [u8; 8],
    /// Alternative phase solutions tried per relaxed phase.
    pub relaxation_candidates: usize,
    /// Successors in fixed move order. Only the sequential order exists;
    /// the flag is kept so configurations state it explicitly.
    pub deterministic: bool,
    /// Prune with the twist-distance metric.
    pub use_heuristic: bool,
    /// Prune with the coordinate tables as well.
    pub use_pruning_tables: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth_caps: [20; 8],
            node_budget: None,
            relaxation: [0; 8],
            relaxation_candidates: 16,
            deterministic: true,
            use_heuristic: true,
            use_pruning_tables: true,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Solution {
    pub phases: Vec<MoveSequence>,
    pub total: MoveSequence,
    pub simplified_total: MoveSequence,
    pub depths: [u8; 8],
    pub nodes: [u64; 8],
}

impl Solution {
    fn from_phases(phases: Vec<MoveSequence>, nodes: [u64; 8]) -> Solution {
        let mut total = MoveSequence::new();
        for p in &phases {
            total.extend_from(p);
        }
        let depths = std::array::from_fn(|i| phases[i].len() as u8);
        let simplified_total = total.simplify();
        Solution { phases, total, simplified_total, depths, nodes }
    }

    pub fn total_nodes(&self) -> u64 {
        self.nodes.iter().sum()
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.phases.iter().enumerate() {
            writeln!(f, "phase {}: {p} ({} moves, {} nodes)", i + 1, p.len(), self.nodes[i])?;
        }
        write!(f, "total {} / simplified {}", self.total.len(), self.simplified_total.len())
    }
}

/// `simplify(total)`, checked against the original state.
pub fn simplify_boundaries(sol: &Solution, start: &CubeState) -> MoveSequence {
    let simplified = sol.total.simplify();
    assert_eq!(
        start.apply_sequence(&simplified),
        start.apply_sequence(&sol.total),
        "simplification changed the transformation"
    );
    simplified
}

/// Tables of all eight phases. Built once and shared read-only.
pub struct Solver {
    metric: Vec<DistanceTable>,
    pruning: Vec<PruningTables>,
}

struct Dfs<'a> {
    solver: &'a Solver,
    phase: PhaseId,
    config: &'a SearchConfig,
    nodes: u64,
    budget: u64,
    path: Vec<Move>,
}

impl Dfs<'_> {
    fn bound(&self, state: &CubeState) -> u32 {
        let mut h = 0;
        if self.config.use_heuristic {
            h = twist_distance(state, self.phase, &self.solver.metric[self.phase.index()]).ceil();
        }
        if self.config.use_pruning_tables {
            h = h.max(self.solver.pruning[self.phase.index()].bound(state) as u32);
        }
        h
    }

    /// Depth-limited search; `Err` when the node budget runs out.
    fn search(&mut self, state: &mut CubeState, depth: u32, last: Option<Move>) -> Result<bool, ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let h = self.bound(state);
        if h > depth {
            return Ok(false);
        }
        if h == 0 && predicate(self.phase, state) {
            return Ok(true);
        }
        if depth == 0 {
            return Ok(false);
        }
        for &m in successors(self.phase, last) {
            state.apply_move_in_place(m);
            self.path.push(m);
            let found = self.search(state, depth - 1, Some(m));
            state.apply_move_in_place(m.inverse());
            match found {
                Ok(true) => return Ok(true),
                Ok(false) => {
                    self.path.pop();
                }
                Err(()) => return Err(()),
            }
        }
        Ok(false)
    }

    /// Every path of exactly `depth` twists ending in the goal, in DFS
    /// order, up to `limit` of them.
    fn enumerate(&mut self, state: &mut CubeState, depth: u32, last: Option<Move>, limit: usize, out: &mut Vec<MoveSequence>) {
        self.nodes += 1;
        if out.len() >= limit || self.nodes > self.budget {
            return;
        }
        if depth == 0 {
            if predicate(self.phase, state) {
                out.push(self.path.clone().into());
            }
            return;
        }
        if self.bound(state) > depth {
            return;
        }
        for &m in successors(self.phase, last) {
            state.apply_move_in_place(m);
            self.path.push(m);
            self.enumerate(state, depth - 1, Some(m), limit, out);
            self.path.pop();
            state.apply_move_in_place(m.inverse());
        }
    }
}

pub struct PhaseResult {
    pub moves: MoveSequence,
    pub nodes: u64,
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            metric: PhaseId::all().map(DistanceTable::build).collect(),
            pruning: PhaseId::all().map(PruningTables::build).collect(),
        }
    }

    /// Loads tables from `dir`, building and storing any that are missing
    /// or do not match the current format.
    pub fn with_cache(dir: &Path) -> Result<(Solver, CacheStatus), CacheError> {
        std::fs::create_dir_all(dir)?;
        let mut status = CacheStatus::Warm;
        let mut metric = Vec::new();
        let mut pruning = Vec::new();
        for p in PhaseId::all() {
            let path = metric_path(dir, p);
            metric.push(match DistanceTable::load(&path, p) {
                Ok(t) => t,
                Err(_) => {
                    status = CacheStatus::Cold;
                    let t = DistanceTable::build(p);
                    t.save(&path)?;
                    t
                }
            });
            let path = pruning_path(dir, p);
            pruning.push(match PruningTables::load(&path, p) {
                Ok(t) => t,
                Err(_) => {
                    status = CacheStatus::Cold;
                    let t = PruningTables::build(p);
                    t.save(&path)?;
                    t
                }
            });
        }
        Ok((Solver { metric, pruning }, status))
    }

    /// Process-wide solver built on first use.
    pub fn shared() -> &'static Solver {
        static SOLVER: OnceLock<Solver> = OnceLock::new();
        SOLVER.get_or_init(Solver::new)
    }

    pub fn metric(&self, phase: PhaseId) -> &DistanceTable {
        &self.metric[phase.index()]
    }

    pub fn pruning(&self, phase: PhaseId) -> &PruningTables {
        &self.pruning[phase.index()]
    }

    /// One depth-limited round: a path of at most `depth` twists from
    /// `state` into the goal of `phase`, or `None`.
    pub fn phase_search(
        &self,
        phase: PhaseId,
        state: &CubeState,
        depth: u32,
        last: Option<Move>,
        config: &SearchConfig,
    ) -> (Option<MoveSequence>, u64) {
        let mut dfs = Dfs { solver: self, phase, config, nodes: 0, budget: u64::MAX, path: Vec::new() };
        let mut s = *state;
        match dfs.search(&mut s, depth, last) {
            Ok(true) => (Some(dfs.path.into()), dfs.nodes),
            _ => (None, dfs.nodes),
        }
    }

    /// Iterative deepening for one phase.
    pub fn solve_phase(&self, phase: PhaseId, state: &CubeState, config: &SearchConfig) -> Result<PhaseResult, SolveError> {
        let budget = config.node_budget.unwrap_or(u64::MAX);
        let mut nodes = 0u64;
        let cap = config.depth_caps[phase.index()];
        for depth in 0..=cap as u32 {
            let mut dfs =
                Dfs { solver: self, phase, config, nodes: 0, budget: budget.saturating_sub(nodes), path: Vec::new() };
            let mut s = *state;
            let found = dfs.search(&mut s, depth, None);
            nodes += dfs.nodes;
            match found {
                Ok(true) => return Ok(PhaseResult { moves: dfs.path.into(), nodes }),
                Ok(false) => {}
                Err(()) => return Err(SolveError::BudgetExhausted { phase }),
            }
        }
        Err(SolveError::DepthCapExceeded { phase, cap })
    }

    /// Solves the phases from `first` on, starting from an anchored state.
    fn solve_from(
        &self,
        first: PhaseId,
        mut state: CubeState,
        config: &SearchConfig,
    ) -> Result<(Vec<MoveSequence>, Vec<u64>), SolveError> {
        let mut phases = Vec::new();
        let mut nodes = Vec::new();
        for phase in PhaseId::all().filter(|&p| p >= first) {
            let r = self.solve_phase(phase, &state, config)?;
            state = state.apply_sequence(&r.moves);
            if !predicate(phase, &state) {
                return Err(SolveError::VerificationFailed { phase });
            }
            phases.push(r.moves);
            nodes.push(r.nodes);
        }
        Ok((phases, nodes))
    }

    pub fn solve(&self, state: &CubeState, config: &SearchConfig) -> Result<Solution, SolveError> {
        let anchored = state.anchored();
        let (phases, nodes) = self.solve_from(PhaseId::FIRST, anchored, config)?;
        let sol = Solution::from_phases(phases, nodes.try_into().unwrap());
        verify_solution(state, &sol)?;
        Ok(sol)
    }

    /// Re-solves with extra twists allowed in the phases named by
    /// `config.relaxation`: phase `i` is searched again at exactly
    /// `t_i + offset` twists. Each alternative path for a relaxed phase is
    /// completed by the ordinary search, and the shortest simplified total
    /// wins; the baseline is kept on ties.
    pub fn solve_relaxed(&self, state: &CubeState, config: &SearchConfig) -> Result<Solution, SolveError> {
        let plain = SearchConfig { relaxation: [0; 8], ..config.clone() };
        let mut best = self.solve(state, &plain)?;
        let anchored = state.anchored();
        for phase in PhaseId::all() {
            let offset = config.relaxation[phase.index()] as u32;
            if offset == 0 {
                continue;
            }
            let mut before = anchored;
            for p in &best.phases[..phase.index()] {
                before = before.apply_sequence(p);
            }
            let t = best.depths[phase.index()] as u32;
            let mut candidates = Vec::new();
            let budget = config.node_budget.unwrap_or(u64::MAX);
            let mut dfs = Dfs { solver: self, phase, config: &plain, nodes: 0, budget, path: Vec::new() };
            let mut s = before;
            dfs.enumerate(&mut s, t + offset, None, config.relaxation_candidates, &mut candidates);
            let baseline_phase = best.phases[phase.index()].clone();
            let prefix = best.phases[..phase.index()].to_vec();
            let prefix_nodes = best.nodes;
            for cand in candidates {
                if cand == baseline_phase {
                    continue;
                }
                let after = before.apply_sequence(&cand);
                let Some(next) = phase.next() else {
                    continue;
                };
                let Ok((rest, rest_nodes)) = self.solve_from(next, after, &plain) else {
                    continue;
                };
                let mut phases = prefix.clone();
                phases.push(cand);
                phases.extend(rest);
                let mut nodes = prefix_nodes;
                for (i, n) in rest_nodes.into_iter().enumerate() {
                    nodes[phase.index() + 1 + i] = n;
                }
                let sol = Solution::from_phases(phases, nodes);
                if sol.simplified_total.len() < best.simplified_total.len() && verify_solution(state, &sol).is_ok() {
                    best = sol;
                }
            }
        }
        Ok(best)
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Cold,
    Warm,
}

/// Cache file of the metric tables of `p` inside `dir`.
pub fn metric_path(dir: &Path, p: PhaseId) -> std::path::PathBuf {
    dir.join(format!("metric-phase{p}.bin"))
}

pub fn pruning_path(dir: &Path, p: PhaseId) -> std::path::PathBuf {
    dir.join(format!("pruning-phase{p}.bin"))
}

/// Checks the total and the simplified total against the input, and every
/// phase goal along the way.
pub fn verify_solution(state: &CubeState, sol: &Solution) -> Result<(), SolveError> {
    let mut s = state.anchored();
    for (i, p) in sol.phases.iter().enumerate() {
        s = s.apply_sequence(p);
        let phase = PhaseId::new(i as u8 + 1).unwrap();
        if !predicate(phase, &s) {
            return Err(SolveError::VerificationFailed { phase });
        }
    }
    if !state.apply_sequence(&sol.total).is_solved() || !state.apply_sequence(&sol.simplified_total).is_solved() {
        return Err(SolveError::VerificationFailed { phase: PhaseId::LAST });
    }
    Ok(())
}

/// [`Solver::solve`] on the shared solver.
pub fn solve(state: &CubeState, config: &SearchConfig) -> Result<Solution, SolveError> {
    Solver::shared().solve(state, config)
}

pub fn solve_relaxed(state: &CubeState, config: &SearchConfig) -> Result<Solution, SolveError> {
    Solver::shared().solve_relaxed(state, config)
}

pub fn phase_search(phase: PhaseId, state: &CubeState, depth: u32, last: Option<Move>) -> Option<MoveSequence> {
    Solver::shared().phase_search(phase, state, depth, last, &SearchConfig::default()).0
}
