//! The eight-phase subgroup scheme and the goal test of every phase.
//!
//! Phase `i` searches with the generators of `G(i-1)` and stops once the
//! cube can be finished by the later phases:
//!
//! ```text
//! G0 = {R, L, F, B, U, D, r, l, f, b, u, d}
//! G1 = {R, L, F, B, U, D, r, l, f2, b2, u2, d2}
//! G2 = {R2, L2, F, B, U, D, r2, l2, f2, b2, u2, d2}
//! G3 = {R2, L2, F2, B2, U, D, r2, l2, f2, b2}
//! G4 = {R, L, F, B, U, D}
//! G5 = {R2, L2, F, B, U, D}
//! G6 = {R2, L2, F2, B2, U, D}
//! G7 = {R2, L2, F2, B2, U2, D2}
//! ```
//!
//! The goal of phase `i` is the set `goal(i) = <Gi> . goal(i+1)` with
//! `goal(8) = {solved}`: every state in it can be carried into the next goal
//! using only `Gi`. Each goal is closed under its own subgroup and contains
//! the next one. `G4` is not contained in `G3`, so `goal(3)` and `goal(2)`
//! are strictly larger than the orbits of solved under `G3` and `G2`.

use std::fmt;
use std::sync::OnceLock;

use crate::cube::{parity, Color, CubeState, SOLVED_CENTERS};
use crate::moves::{Move, MoveSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseId(u8);

impl PhaseId {
    pub const FIRST: PhaseId = PhaseId(1);
    pub const LAST: PhaseId = PhaseId(8);

    pub fn new(n: u8) -> Option<PhaseId> {
        (1..=8).contains(&n).then_some(PhaseId(n))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based position, for indexing per-phase arrays.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn all() -> impl Iterator<Item = PhaseId> {
        (1..=8).map(PhaseId)
    }

    pub fn next(self) -> Option<PhaseId> {
        PhaseId::new(self.0 + 1)
    }
}

impl fmt::Display for PhaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Subgroup generators exactly as listed for the scheme. A bare letter
/// stands for all three turns of its slice, a letter with `2` for the half
/// turn only.
pub const SUBGROUPS: [&str; 8] = [
    "R L F B U D r l f b u d",
    "R L F B U D r l f2 b2 u2 d2",
    "R2 L2 F B U D r2 l2 f2 b2 u2 d2",
    "R2 L2 F2 B2 U D r2 l2 f2 b2",
    "R L F B U D",
    "R2 L2 F B U D",
    "R2 L2 F2 B2 U D",
    "R2 L2 F2 B2 U2 D2",
];

fn expand(spec: &str) -> Vec<Move> {
    let mut out = Vec::new();
    for tok in spec.split_whitespace() {
        if tok.ends_with('2') {
            out.push(tok.parse::<Move>().expect("generator token"));
        } else {
            for suffix in ["", "2", "'"] {
                out.push(format!("{tok}{suffix}").parse::<Move>().expect("generator token"));
            }
        }
    }
    out.sort();
    out
}

/// Generators of `G(index)`, `index` in 0..8, in canonical move order.
/// `G8` is the trivial group and has no generators.
pub fn subgroup(index: usize) -> &'static [Move] {
    static GROUPS: OnceLock<Vec<Vec<Move>>> = OnceLock::new();
    let groups = GROUPS.get_or_init(|| {
        let mut g: Vec<Vec<Move>> = SUBGROUPS.iter().map(|s| expand(s)).collect();
        g.push(Vec::new());
        g
    });
    &groups[index]
}

/// Moves available while solving `phase`: the generators of `G(phase-1)`.
pub fn generators(phase: PhaseId) -> &'static [Move] {
    subgroup(phase.index())
}

/// Generators of the subgroup whose identity coset `phase` targets.
pub fn target_subgroup(phase: PhaseId) -> &'static [Move] {
    subgroup(phase.index() + 1)
}

// ---------------------------------------------------------------------------
// piece geometry shared by the goal tests

pub(crate) const E_POSITIONS: [usize; 4] = [8, 9, 10, 11];

/// Slice (0 = S, 1 = M, 2 = E) each dedge position belongs to; S holds the
/// UR/UL/DR/DL edges, M the UF/UB/DF/DB edges.
pub(crate) const POSITION_SLICE: [u8; 12] = [0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2];

/// Center slots of the L and R faces.
pub(crate) const LR_SLOTS: [usize; 8] = [4, 5, 6, 7, 16, 17, 18, 19];

pub(crate) struct PhaseData {
    /// Two-coloring of wing slots by the orbits of a single wing under `G2`.
    pub wing_class: [u8; 24],
    /// For each position, its class-0 wing slot.
    pub class0_slot: [u8; 12],
    /// Reachable center arrangements under `G2` and `G3`, by [`center_index`].
    pub centers_g2: Vec<bool>,
    pub centers_g3: Vec<bool>,
    /// Corner permutations reachable with half turns, by [`rank_perm`].
    pub corners_g7: Vec<bool>,
}

pub(crate) fn data() -> &'static PhaseData {
    static DATA: OnceLock<PhaseData> = OnceLock::new();
    DATA.get_or_init(build_data)
}

fn build_data() -> PhaseData {
    let g2 = subgroup(2);
    // single wing orbit of slot 0 under G2
    let mut wing_class = [1u8; 24];
    wing_class[0] = 0;
    let mut stack = vec![0usize];
    while let Some(s) = stack.pop() {
        for &m in g2 {
            let t = wing_destination(m, s);
            if wing_class[t] == 1 {
                wing_class[t] = 0;
                stack.push(t);
            }
        }
    }
    let mut class0_slot = [0u8; 12];
    for (p, slot) in class0_slot.iter_mut().enumerate() {
        assert_ne!(wing_class[2 * p], wing_class[2 * p + 1], "each position has one wing of each class");
        *slot = if wing_class[2 * p] == 0 { 2 * p as u8 } else { 2 * p as u8 + 1 };
    }

    let centers_g2 = center_orbit(g2);
    let centers_g3 = center_orbit(subgroup(3));

    let mut corners_g7 = vec![false; 40320];
    let solved = CubeState::solved();
    corners_g7[rank_perm(&solved.cp) as usize] = true;
    let mut frontier = vec![solved.cp];
    while let Some(cp) = frontier.pop() {
        for &m in subgroup(7) {
            let t = crate::geometry::tables();
            let next: [u8; 8] = std::array::from_fn(|i| cp[t.corner_src[m.index()][i] as usize]);
            let r = rank_perm(&next) as usize;
            if !corners_g7[r] {
                corners_g7[r] = true;
                frontier.push(next);
            }
        }
    }

    PhaseData { wing_class, class0_slot, centers_g2, centers_g3, corners_g7 }
}

/// Slot that the wing in slot `s` moves to under `m`.
pub(crate) fn wing_destination(m: Move, s: usize) -> usize {
    let src = &crate::geometry::tables().edge_src[m.index()];
    src.iter().position(|&x| x as usize == s).unwrap()
}

fn center_orbit(gens: &[Move]) -> Vec<bool> {
    let mut seen = vec![false; CENTER_GRID];
    let start = SOLVED_CENTERS;
    seen[center_index(&start).unwrap() as usize] = true;
    let mut frontier = vec![start];
    let t = crate::geometry::tables();
    while let Some(c) = frontier.pop() {
        for &m in gens {
            let next: [u8; 24] = std::array::from_fn(|i| c[t.center_src[m.index()][i] as usize]);
            let idx = center_index(&next).expect("subgroup keeps centers on their axis") as usize;
            if !seen[idx] {
                seen[idx] = true;
                frontier.push(next);
            }
        }
    }
    seen
}

pub(crate) const CENTER_GRID: usize = 70 * 70 * 70;

/// Rank of each 8-bit pattern with four bits set, in 0..70.
pub(crate) fn rank4of8(bits: u8) -> Option<u8> {
    static RANKS: OnceLock<[u8; 256]> = OnceLock::new();
    let ranks = RANKS.get_or_init(|| {
        let mut r = [u8::MAX; 256];
        let mut next = 0;
        for b in 0..256usize {
            if b.count_ones() == 4 {
                r[b] = next;
                next += 1;
            }
        }
        r
    });
    let v = ranks[bits as usize];
    (v != u8::MAX).then_some(v)
}

/// Index of a center arrangement in which every axis keeps only its own two
/// colors: for U/D, R/L and F/B, the rank of which of the axis's eight slots
/// hold the U, R and F color respectively.
pub(crate) fn center_index(centers: &[u8; 24]) -> Option<u32> {
    let mut idx = 0u32;
    for (first, second) in [(0usize, 3usize), (1, 4), (2, 5)] {
        let mut bits = 0u8;
        for (k, slot) in (first * 4..first * 4 + 4).chain(second * 4..second * 4 + 4).enumerate() {
            let c = centers[slot] as usize;
            if c == first {
                bits |= 1 << k;
            } else if c != second {
                return None;
            }
        }
        idx = idx * 70 + rank4of8(bits)? as u32;
    }
    Some(idx)
}

/// Lexicographic rank of a permutation of up to 12 elements.
pub(crate) fn rank_perm(p: &[u8]) -> u32 {
    let n = p.len();
    let mut rank = 0u32;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u32;
        rank = rank * (n - i) as u32 + smaller;
    }
    rank
}

/// In-class status of a wing: true when the wing sits in a slot of the
/// other class than its home slot.
pub(crate) fn wing_misplaced_class(state: &CubeState, slot: usize) -> bool {
    let d = data();
    d.wing_class[slot] != d.wing_class[state.ep[slot] as usize]
}

/// True when both wings of every position are partners.
pub(crate) fn all_paired(state: &CubeState) -> bool {
    (0..12).all(|p| state.ep[2 * p] / 2 == state.ep[2 * p + 1] / 2)
}

fn position_paired(state: &CubeState, p: usize) -> bool {
    state.ep[2 * p] / 2 == state.ep[2 * p + 1] / 2
}

/// Permutation of dedge ids read off the class-0 slot of every position.
pub(crate) fn dedge_permutation(state: &CubeState) -> [u8; 12] {
    let d = data();
    std::array::from_fn(|p| state.ep[d.class0_slot[p] as usize] / 2)
}

fn pair_classes_consistent(state: &CubeState) -> bool {
    // status per piece; partners must agree and the number of misplaced
    // pairs must be even
    let mut status = [false; 24];
    for s in 0..24 {
        status[state.ep[s] as usize] = wing_misplaced_class(state, s);
    }
    let mut misplaced_pairs = 0;
    for pair in 0..12 {
        if status[2 * pair] != status[2 * pair + 1] {
            return false;
        }
        if status[2 * pair] {
            misplaced_pairs += 1;
        }
    }
    misplaced_pairs % 2 == 0
}

fn centers_in(state: &CubeState, set: &[bool]) -> bool {
    center_index(&state.centers).is_some_and(|i| set[i as usize])
}

fn lr_centers_separated(state: &CubeState) -> bool {
    LR_SLOTS.iter().all(|&s| matches!(Color::from_index(state.centers[s] as usize), Color::L | Color::R))
}

fn reduction_conditions(state: &CubeState) -> bool {
    state.centers == SOLVED_CENTERS
        && all_paired(state)
        && !parity(&state.ep)
        && parity(&state.cp) == parity(&dedge_permutation(state))
}

/// Goal test of `phase`. Assumes the state is expressed in the anchored
/// color scheme.
pub fn predicate(phase: PhaseId, state: &CubeState) -> bool {
    let d = data();
    match phase.get() {
        1 => lr_centers_separated(state),
        2 => {
            predicate(PhaseId(1), state)
                && centers_in(state, &d.centers_g2)
                && !parity(&state.ep)
                && pair_classes_consistent(state)
        }
        3 => {
            predicate(PhaseId(2), state)
                && centers_in(state, &d.centers_g3)
                && E_POSITIONS.iter().all(|&p| position_paired(state, p))
        }
        4 => predicate(PhaseId(3), state) && reduction_conditions(state),
        5 => predicate(PhaseId(4), state) && (0..24).all(|s| !wing_misplaced_class(state, s)),
        6 => {
            predicate(PhaseId(5), state)
                && state.co.iter().all(|&o| o == 0)
                && E_POSITIONS.iter().all(|&p| POSITION_SLICE[(state.ep[2 * p] / 2) as usize] == 2)
        }
        7 => {
            predicate(PhaseId(6), state)
                && d.corners_g7[rank_perm(&state.cp) as usize]
                && (0..12).all(|p| POSITION_SLICE[(state.ep[2 * p] / 2) as usize] == POSITION_SLICE[p])
                && !parity(&dedge_permutation(state))
        }
        8 => *state == CubeState::solved(),
        _ => unreachable!(),
    }
}

/// True when centers are solved and edges paired so that outer turns
/// behave like a 3x3x3 (the goal of phase 4).
pub fn is_reduced(state: &CubeState) -> bool {
    predicate(PhaseId(4), state)
}

/// Immutable description of one phase.
#[derive(Clone, Debug)]
pub struct PhaseSpec {
    pub id: PhaseId,
    pub generators: &'static [Move],
    pub summary: &'static str,
}

impl PhaseSpec {
    pub fn get(id: PhaseId) -> PhaseSpec {
        PhaseSpec { id, generators: generators(id), summary: SUMMARIES[id.index()] }
    }

    pub fn is_goal(&self, state: &CubeState) -> bool {
        predicate(self.id, state)
    }
}

const SUMMARIES: [&str; 8] = [
    "L and R center slots hold only the L/R colors",
    "every axis keeps its two center colors, L/R centers in one of the 12 arrangements reachable \
     with G2, both wings of each edge pair in the same class state, an even number of misplaced \
     pairs and an even wing permutation",
    "centers in one of the 2520 arrangements reachable with G3 (columns on the side faces) and \
     four complete edge pairs in the middle (E) layer",
    "reduction: centers solved, all 12 edge pairs joined, corner and edge permutation parities \
     equal",
    "every edge pair oriented so that R and L only need half turns",
    "corners oriented relative to U/D and the four E-slice edges in the E layer",
    "corners in the 96-element half-turn coset, every edge in its home slice, even edge \
     permutation",
    "solved",
];

/// Text listing of the scheme, one block per phase.
pub fn describe() -> String {
    let mut out = String::new();
    for id in PhaseId::all() {
        let spec = PhaseSpec::get(id);
        let gens: MoveSequence = spec.generators.to_vec().into();
        out.push_str(&format!(
            "phase {id}: moves of G{} = {{{}}} ({} twists)\n  goal: {}\n  twists: {gens}\n",
            id.index(),
            SUBGROUPS[id.index()].replace(' ', ", "),
            spec.generators.len(),
            spec.summary,
        ));
    }
    out
}

/// Center-only orbit sizes under `G2` and `G3`, for documentation and tests.
pub fn center_orbit_sizes() -> (usize, usize) {
    let d = data();
    (d.centers_g2.iter().filter(|&&b| b).count(), d.centers_g3.iter().filter(|&&b| b).count())
}

pub fn half_turn_corner_coset_size() -> usize {
    data().corners_g7.iter().filter(|&&b| b).count()
}

/// Distinct wing slot classes, for diagnostics.
pub fn wing_classes() -> [u8; 24] {
    data().wing_class
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::parse_moves;

    fn p(n: u8) -> PhaseId {
        PhaseId::new(n).unwrap()
    }

    #[test]
    fn generator_counts() {
        assert_eq!(generators(p(1)).len(), 36);
        assert_eq!(generators(p(2)).len(), 28);
        assert_eq!(generators(p(3)).len(), 20);
        assert_eq!(generators(p(4)).len(), 14);
        assert_eq!(generators(p(5)).len(), 18);
        assert_eq!(generators(p(6)).len(), 14);
        assert_eq!(generators(p(7)).len(), 10);
        assert_eq!(generators(p(8)).len(), 6);
        for id in PhaseId::all().skip(4) {
            assert!(generators(id).iter().all(|m| m.is_outer()));
        }
    }

    #[test]
    fn solved_satisfies_every_phase() {
        for id in PhaseId::all() {
            assert!(predicate(id, &CubeState::solved()), "phase {id}");
        }
    }

    #[test]
    fn inner_quarter_breaks_phase_one() {
        let s = CubeState::solved().apply_sequence(&parse_moves("f").unwrap());
        assert!(!predicate(p(1), &s));
        assert!(!is_reduced(&CubeState::solved().apply_sequence(&parse_moves("r").unwrap())));
    }

    #[test]
    fn outer_quarter_keeps_reduction_but_not_orientation() {
        let s = CubeState::solved().apply_sequence(&parse_moves("F").unwrap());
        for n in 1..=4 {
            assert!(predicate(p(n), &s), "phase {n}");
        }
        // F is a good move for the R/L-restricted orientation
        assert!(predicate(p(5), &s));
        let s = CubeState::solved().apply_sequence(&parse_moves("R").unwrap());
        assert!(predicate(p(4), &s));
        assert!(!predicate(p(5), &s));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(center_orbit_sizes(), (58800, 2520));
        assert_eq!(half_turn_corner_coset_size(), 96);
    }

    #[test]
    fn rank_helpers() {
        assert_eq!(rank_perm(&[0, 1, 2, 3]), 0);
        assert_eq!(rank_perm(&[3, 2, 1, 0]), 23);
        assert_eq!(rank4of8(0b0000_1111), Some(0));
        assert_eq!(rank4of8(0b1111_0000), Some(69));
        assert_eq!(rank4of8(0b0000_0111), None);
        assert_eq!(center_index(&SOLVED_CENTERS).is_some(), true);
    }
}
