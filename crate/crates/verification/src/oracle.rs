//! Brute-force references. Nothing here uses the solver's tables, its
//! successor rule or its counting code.

use num_bigint::BigUint;
use rand::Rng;
use revenge_core::heuristic::sample_goal_state;
use revenge_core::phases::{generators, predicate, target_subgroup};
use revenge_core::{Color, CubeState, Move, PhaseId};

/// The well-known configuration count of the 4x4x4.
pub const CONFIGURATIONS: &str = "7401196841564901869874093974498574336000000000";

/// Corners times wings times centers with each face's four centers
/// interchangeable, over the 24 orientations of the whole cube.
pub fn configurations() -> BigUint {
    let fact = |n: u32| (2..=n).map(BigUint::from).product::<BigUint>();
    let corners = fact(8) * BigUint::from(2187u32);
    let centers = fact(24) / BigUint::from(24u32).pow(6);
    corners * fact(24) * centers / BigUint::from(24u32)
}

/// Smallest `n` with `36 * 24^(n-1) >= total`, by direct powers.
pub fn pigeonhole(total: &BigUint) -> u32 {
    (1..).find(|&n| BigUint::from(36u32) * BigUint::from(24u32).pow(n - 1) >= *total).unwrap()
}

/// Corner, wing and center positions a single move changes, found by
/// tracking marked pieces.
pub fn disturbance(m: Move) -> (usize, usize, usize) {
    let s = CubeState::solved().apply_move(m);
    let corners = (0..8).filter(|&i| s.corner_permutation()[i] as usize != i || s.corner_orientation()[i] != 0).count();
    let wings = (0..24).filter(|&i| s.edge_permutation()[i] as usize != i).count();
    let centers = (0..24)
        .filter(|&slot| {
            let mut marks = [Color::U; 24];
            marks[slot] = Color::D;
            let t = CubeState::from_parts([0, 1, 2, 3, 4, 5, 6, 7], [0; 8], std::array::from_fn(|i| i as u8), marks)
                .apply_move(m);
            t.center_colors()[slot] != Color::D
        })
        .count();
    (corners, wings, centers)
}

/// A goal state of `phase` followed by `len` random generators of `phase`.
pub fn instance(phase: PhaseId, len: usize, rng: &mut impl Rng) -> CubeState {
    walk(phase, generators(phase), len, rng)
}

/// Like [`instance`], but only with generators outside the next subgroup,
/// which rarely lands back in the goal.
pub fn leaving_instance(phase: PhaseId, len: usize, rng: &mut impl Rng) -> CubeState {
    let leaving: Vec<Move> = generators(phase).iter().copied().filter(|m| !target_subgroup(phase).contains(m)).collect();
    walk(phase, &leaving, len, rng)
}

fn walk(phase: PhaseId, gens: &[Move], len: usize, rng: &mut impl Rng) -> CubeState {
    let mut s = sample_goal_state(phase, rng);
    for _ in 0..len {
        s.apply_move_in_place(gens[rng.gen_range(0..gens.len())]);
    }
    s
}

/// Fewest generators of `phase` reaching the goal, by exhaustive iterative
/// deepening that only skips turning the same slice twice in a row.
pub fn goal_distance(phase: PhaseId, state: &CubeState, max: u32) -> Option<u32> {
    fn dfs(phase: PhaseId, s: &mut CubeState, depth: u32, last: Option<Move>) -> bool {
        if depth == 0 {
            return predicate(phase, s);
        }
        for &m in generators(phase) {
            if last.is_some_and(|l| l.slice() == m.slice()) {
                continue;
            }
            s.apply_move_in_place(m);
            let found = dfs(phase, s, depth - 1, Some(m));
            s.apply_move_in_place(m.inverse());
            if found {
                return true;
            }
        }
        false
    }
    let mut s = *state;
    (0..=max).find(|&d| dfs(phase, &mut s, d, None))
}
