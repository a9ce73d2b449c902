#![allow(dead_code)]

use rand::Rng;
use revenge_core::heuristic::sample_goal_state;
use revenge_core::phases::{generators, predicate};
use revenge_core::{CubeState, Move, PhaseId};

/// A goal state of `phase` followed by `len` random generators of `phase`,
/// so the distance back to the goal is at most `len`.
pub fn instance(phase: PhaseId, len: usize, rng: &mut impl Rng) -> CubeState {
    let gens = generators(phase);
    let mut s = sample_goal_state(phase, rng);
    for _ in 0..len {
        s.apply_move_in_place(gens[rng.gen_range(0..gens.len())]);
    }
    s
}

/// Fewest generators of `phase` taking `state` into the goal, by plain
/// iterative deepening. Only repeating the same slice is skipped.
pub fn goal_distance(phase: PhaseId, state: &CubeState, max: u32) -> Option<u32> {
    fn dfs(phase: PhaseId, s: &CubeState, depth: u32, last: Option<Move>) -> bool {
        if depth == 0 {
            return predicate(phase, s);
        }
        generators(phase)
            .iter()
            .filter(|m| last.map_or(true, |l| l.slice() != m.slice()))
            .any(|&m| dfs(phase, &s.apply_move(m), depth - 1, Some(m)))
    }
    (0..=max).find(|&d| dfs(phase, state, d, None))
}
