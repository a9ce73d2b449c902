//! Exact distance tables over small projections of the cube.
//!
//! Each phase gets one or more coordinates that are closed under its
//! generators. A BFS over a coordinate from the projection of the goal
//! gives, for every coordinate value, the fewest twists that can reach the
//! goal. Because the goal projects into the target set, that number never
//! exceeds the true phase distance. Phases 5 to 8 use a single coordinate
//! that captures the goal exactly.

use std::io::Read;
use std::path::Path;
use std::sync::OnceLock;

use crate::coord::{binomial, gather, permute_mask, rank_perm, rank_subset, scatter, unrank_perm, unrank_subset};
use crate::cube::{parity, Color, CubeState, SOLVED_CENTERS};
use crate::error::CacheError;
use crate::geometry::tables;
use crate::moves::Move;
use crate::phases::{center_index, data, dedge_permutation, generators, wing_destination, PhaseId, CENTER_GRID, LR_SLOTS};

pub const UNREACHED: u8 = u8::MAX;
const MAGIC: &[u8; 4] = b"RVPT";
pub const CACHE_VERSION: u32 = 1;

const NON_LR_SLOTS: [usize; 16] = [0, 1, 2, 3, 8, 9, 10, 11, 12, 13, 14, 15, 20, 21, 22, 23];
const SLICE_POSITIONS: [[usize; 4]; 3] = [[0, 2, 4, 6], [1, 3, 5, 7], [8, 9, 10, 11]];

/// Generic BFS over `size` coordinate values; `step(x, g)` applies the
/// `g`-th generator.
fn bfs(size: usize, targets: impl IntoIterator<Item = usize>, gens: usize, step: impl Fn(usize, usize) -> usize) -> Vec<u8> {
    let mut dist = vec![UNREACHED; size];
    let mut frontier: Vec<usize> = Vec::new();
    for t in targets {
        if dist[t] == UNREACHED {
            dist[t] = 0;
            frontier.push(t);
        }
    }
    let mut depth = 0u8;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for g in 0..gens {
                let y = step(x, g);
                if dist[y] == UNREACHED {
                    dist[y] = depth;
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Move table of a coordinate computed through representative states.
fn move_table(size: usize, gens: &[Move], decode: impl Fn(usize) -> CubeState, encode: impl Fn(&CubeState) -> usize) -> Vec<u32> {
    let mut table = vec![0u32; size * gens.len()];
    for x in 0..size {
        let s = decode(x);
        for (g, &m) in gens.iter().enumerate() {
            table[x * gens.len() + g] = encode(&s.apply_move(m)) as u32;
        }
    }
    table
}

fn edge_dest() -> &'static [[u8; 24]; Move::COUNT] {
    static D: OnceLock<[[u8; 24]; Move::COUNT]> = OnceLock::new();
    D.get_or_init(|| {
        let mut d = [[0u8; 24]; Move::COUNT];
        for m in Move::all() {
            for s in 0..24 {
                d[m.index()][s] = wing_destination(m, s) as u8;
            }
        }
        d
    })
}

fn wing_locations(state: &CubeState) -> [u8; 24] {
    let mut loc = [0u8; 24];
    for (slot, &piece) in state.ep.iter().enumerate() {
        loc[piece as usize] = slot as u8;
    }
    loc
}

fn color_mask(state: &CubeState, colors: &[Color]) -> u32 {
    let mut mask = 0;
    for (slot, &c) in state.centers.iter().enumerate() {
        if colors.iter().any(|&x| x as u8 == c) {
            mask |= 1 << slot;
        }
    }
    mask
}

/// Center colors of a grid index from [`center_index`].
fn grid_centers(index: usize) -> [u8; 24] {
    static UNRANK: OnceLock<[u8; 70]> = OnceLock::new();
    let unrank = UNRANK.get_or_init(|| {
        let mut u = [0u8; 70];
        let mut next = 0;
        for b in 0..256usize {
            if b.count_ones() == 4 {
                u[next] = b as u8;
                next += 1;
            }
        }
        u
    });
    let ranks = [index / 4900, (index / 70) % 70, index % 70];
    let mut c = [0u8; 24];
    for (axis, (first, second)) in [(0usize, 3usize), (1, 4), (2, 5)].into_iter().enumerate() {
        let bits = unrank[ranks[axis]];
        for (k, slot) in (first * 4..first * 4 + 4).chain(second * 4..second * 4 + 4).enumerate() {
            c[slot] = if bits >> k & 1 == 1 { first as u8 } else { second as u8 };
        }
    }
    c
}

fn grid_step(index: usize, m: Move) -> usize {
    let c = grid_centers(index);
    let src = &tables().center_src[m.index()];
    let next: [u8; 24] = std::array::from_fn(|i| c[src[i] as usize]);
    center_index(&next).expect("axis-preserving move") as usize
}

fn grid_table(targets: impl IntoIterator<Item = usize>, gens: &[Move]) -> Vec<u8> {
    bfs(CENTER_GRID, targets, gens.len(), |x, g| grid_step(x, gens[g]))
}

fn grid_of(state: &CubeState) -> Option<usize> {
    center_index(&state.centers).map(|i| i as usize)
}

// --- phase 1: which center slots hold L/R colors

fn lr_set_index(state: &CubeState) -> usize {
    rank_subset(color_mask(state, &[Color::R, Color::L])) as usize
}

fn build_phase1() -> Vec<u8> {
    let gens = generators(PhaseId::new(1).unwrap());
    let t = tables();
    let target = scatter(0xff, &LR_SLOTS);
    bfs(binomial(24, 8) as usize, [rank_subset(target) as usize], gens.len(), |x, g| {
        let mask = unrank_subset(x as u32, 8, 24);
        rank_subset(permute_mask(mask, &t.center_src[gens[g].index()])) as usize
    })
}

// --- phase 2: L/R arrangement with the F/B slot set; edge pair classes

const FB_SETS: usize = 12870;

fn phase2_center_index(state: &CubeState) -> Option<usize> {
    let lr = gather(color_mask(state, &[Color::R]), &LR_SLOTS);
    let fb = gather(color_mask(state, &[Color::F, Color::B]), &NON_LR_SLOTS);
    if lr.count_ones() != 4 || fb.count_ones() != 8 || color_mask(state, &[Color::R, Color::L]) != scatter(0xff, &LR_SLOTS) {
        return None;
    }
    Some(rank_subset(lr) as usize * FB_SETS + rank_subset(fb) as usize)
}

fn build_phase2_centers() -> Vec<u8> {
    let gens = generators(PhaseId::new(2).unwrap());
    let d = data();
    let t = tables();
    let mut lr_targets = Vec::new();
    for (i, &reach) in d.centers_g2.iter().enumerate() {
        if reach {
            let c = grid_centers(i);
            let lr = (0..8).fold(0u32, |acc, k| acc | ((c[LR_SLOTS[k]] == Color::R as u8) as u32) << k);
            let r = rank_subset(lr) as usize;
            if !lr_targets.contains(&r) {
                lr_targets.push(r);
            }
        }
    }
    let solved = CubeState::solved();
    let fb_target = rank_subset(gather(color_mask(&solved, &[Color::F, Color::B]), &NON_LR_SLOTS)) as usize;
    let targets: Vec<usize> = lr_targets.iter().map(|&lr| lr * FB_SETS + fb_target).collect();
    bfs(70 * FB_SETS, targets, gens.len(), |x, g| {
        let src = &t.center_src[gens[g].index()];
        let lr = permute_mask(scatter(unrank_subset((x / FB_SETS) as u32, 4, 8), &LR_SLOTS), src);
        let fb = permute_mask(scatter(unrank_subset((x % FB_SETS) as u32, 8, 16), &NON_LR_SLOTS), src);
        rank_subset(gather(lr, &LR_SLOTS)) as usize * FB_SETS + rank_subset(gather(fb, &NON_LR_SLOTS)) as usize
    })
}

/// Wing pieces of each pair: the one homed in a class-0 slot first.
fn pair_pieces(pair: usize) -> (usize, usize) {
    let a = data().class0_slot[pair] as usize;
    (a, a ^ 1)
}

fn build_pair_pair(gens: &[Move], target: impl Fn(usize, usize) -> bool) -> Vec<u8> {
    let dest = edge_dest();
    let mut targets = Vec::new();
    for x in 0..24usize.pow(4) {
        let s = [x / 13824, (x / 576) % 24, (x / 24) % 24, x % 24];
        let distinct = s[0] != s[1] && s[0] != s[2] && s[0] != s[3] && s[1] != s[2] && s[1] != s[3] && s[2] != s[3];
        if distinct && target(s[0], s[1]) && target(s[2], s[3]) {
            targets.push(x);
        }
    }
    bfs(24usize.pow(4), targets, gens.len(), |x, g| {
        let dm = &dest[gens[g].index()];
        let s = [x / 13824, (x / 576) % 24, (x / 24) % 24, x % 24].map(|v| dm[v] as usize);
        ((s[0] * 24 + s[1]) * 24 + s[2]) * 24 + s[3]
    })
}

fn pair_pair_index(loc: &[u8; 24], p: usize, q: usize) -> usize {
    let (a, b) = pair_pieces(p);
    let (c, d) = pair_pieces(q);
    ((loc[a] as usize * 24 + loc[b] as usize) * 24 + loc[c] as usize) * 24 + loc[d] as usize
}

// --- phase 3: centers into columns; complete pairs in the middle layer

fn build_single_pair(gens: &[Move], target: impl Fn(usize, usize) -> bool) -> Vec<u8> {
    let dest = edge_dest();
    let targets: Vec<usize> = (0..576).filter(|&x| x / 24 != x % 24 && target(x / 24, x % 24)).collect();
    bfs(576, targets, gens.len(), |x, g| {
        let dm = &dest[gens[g].index()];
        dm[x / 24] as usize * 24 + dm[x % 24] as usize
    })
}

/// Whether some four pairs each reach the middle layer and every two of
/// them can be there together within `depth` twists.
fn has_four_clique(both: &[[u8; 12]; 12], single: &[u8; 12], depth: u8) -> bool {
    let mut adj = [0u16; 12];
    for i in 0..12 {
        if single[i] > depth {
            continue;
        }
        for j in 0..12 {
            if i != j && single[j] <= depth && both[i][j] <= depth {
                adj[i] |= 1 << j;
            }
        }
    }
    for a in 0..12 {
        let mut rest = adj[a] & !((2u16 << a) - 1);
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut common = adj[a] & adj[b] & !((2u16 << b) - 1);
            while common != 0 {
                let c = common.trailing_zeros() as usize;
                common &= common - 1;
                if adj[c] & common != 0 {
                    return true;
                }
            }
        }
    }
    false
}

fn in_middle_together(a: usize, b: usize) -> bool {
    a / 2 == b / 2 && (8..12).contains(&(a / 2))
}

// --- phase 4: pairing of the eight outer-layer edge pairs plus parity

const PAIRINGS: usize = 40320 * 2;

fn non_middle_slots() -> ([usize; 8], [usize; 8]) {
    let d = data();
    let c0: [usize; 8] = std::array::from_fn(|p| d.class0_slot[p] as usize);
    (c0, c0.map(|s| s ^ 1))
}

fn pairing_index(state: &CubeState) -> Option<usize> {
    let (c0, c1) = non_middle_slots();
    let mut beta = [0u8; 8];
    for i in 0..8 {
        let partner = state.ep[c0[i]] ^ 1;
        beta[i] = c1.iter().position(|&s| state.ep[s] == partner)? as u8;
    }
    let b = parity(&state.cp) ^ parity(&dedge_permutation(state));
    Some(rank_perm(&beta) as usize * 2 + b as usize)
}

fn pairing_state(index: usize) -> CubeState {
    let (c0, c1) = non_middle_slots();
    let beta = unrank_perm((index / 2) as u32, 8);
    let mut s = CubeState::solved();
    for i in 0..8 {
        s.ep[c0[i]] = c0[i] as u8;
        s.ep[c1[beta[i] as usize]] = (c0[i] ^ 1) as u8;
    }
    if index % 2 == 1 {
        s.cp.swap(0, 1);
    }
    s
}

fn build_pairing() -> Vec<u8> {
    let gens = generators(PhaseId::new(4).unwrap());
    let mt = move_table(PAIRINGS, gens, pairing_state, |s| pairing_index(s).expect("pairing closed under G3"));
    let n = gens.len();
    bfs(PAIRINGS, [pairing_index(&CubeState::solved()).unwrap()], n, |x, g| mt[x * n + g] as usize)
}

// --- phases 5 to 8: 3x3x3 coordinates on the reduced cube

fn flip_index(state: &CubeState) -> usize {
    let d = data();
    (0..12).fold(0, |acc, p| acc | ((d.wing_class[state.ep[d.class0_slot[p] as usize] as usize] as usize) << p))
}

fn flip_state(index: usize) -> CubeState {
    let mut s = CubeState::solved();
    for p in 0..12 {
        if index >> p & 1 == 1 {
            s.ep.swap(2 * p, 2 * p + 1);
        }
    }
    s
}

/// Puts dedge `d` into position `p`, oriented.
fn place_dedge(s: &mut CubeState, p: usize, d: usize) {
    let c = data().class0_slot;
    s.ep[c[p] as usize] = c[d];
    s.ep[c[p] as usize ^ 1] = c[d] ^ 1;
}

fn dedge_at(state: &CubeState, p: usize) -> usize {
    state.ep[data().class0_slot[p] as usize] as usize / 2
}

fn twist_index(state: &CubeState) -> usize {
    state.co[..7].iter().fold(0, |acc, &o| acc * 3 + o as usize)
}

fn twist_state(index: usize) -> CubeState {
    let mut s = CubeState::solved();
    let mut x = index;
    for i in (0..7).rev() {
        s.co[i] = (x % 3) as u8;
        x /= 3;
    }
    s.co[7] = (3 - s.co[..7].iter().map(|&o| o as u32).sum::<u32>() % 3) as u8 % 3;
    s
}

fn middle_set_index(state: &CubeState) -> usize {
    let mask = (0..12).fold(0u32, |acc, p| acc | ((dedge_at(state, p) >= 8) as u32) << p);
    rank_subset(mask) as usize
}

fn middle_set_state(index: usize) -> CubeState {
    let mask = unrank_subset(index as u32, 4, 12);
    let mut s = CubeState::solved();
    let (mut e, mut o) = (8, 0);
    for p in 0..12 {
        if mask >> p & 1 == 1 {
            place_dedge(&mut s, p, e);
            e += 1;
        } else {
            place_dedge(&mut s, p, o);
            o += 1;
        }
    }
    s
}

fn product_table(na: usize, nb: usize, ta: &[u32], tb: &[u32], gens: usize, targets: Vec<usize>) -> Vec<u8> {
    bfs(na * nb, targets, gens, |x, g| ta[(x / nb) * gens + g] as usize * nb + tb[(x % nb) * gens + g] as usize)
}

fn corner_perm_state(index: usize) -> CubeState {
    let mut s = CubeState::solved();
    s.cp.copy_from_slice(&unrank_perm(index as u32, 8));
    s
}

fn corner_perm_index(state: &CubeState) -> usize {
    rank_perm(&state.cp) as usize
}

fn slice_mask_index(state: &CubeState) -> usize {
    let mask = (0..8).fold(0u32, |acc, p| acc | ((dedge_at(state, p) % 2 == 1 && dedge_at(state, p) < 8) as u32) << p);
    rank_subset(mask) as usize
}

fn slice_mask_state(index: usize) -> CubeState {
    let mask = unrank_subset(index as u32, 4, 8);
    let mut s = CubeState::solved();
    let (mut m, mut e) = (1, 0);
    for p in 0..8 {
        if mask >> p & 1 == 1 {
            place_dedge(&mut s, p, m);
            m += 2;
        } else {
            place_dedge(&mut s, p, e);
            e += 2;
        }
    }
    s
}

fn half_turn_corner_ranks() -> &'static (Vec<u32>, Vec<u8>) {
    static R: OnceLock<(Vec<u32>, Vec<u8>)> = OnceLock::new();
    R.get_or_init(|| {
        let set = &data().corners_g7;
        let ranks: Vec<u32> = (0..40320).filter(|&r| set[r as usize]).collect();
        let mut index = vec![u8::MAX; 40320];
        for (i, &r) in ranks.iter().enumerate() {
            index[r as usize] = i as u8;
        }
        (ranks, index)
    })
}

fn slice_perm_index(state: &CubeState) -> usize {
    SLICE_POSITIONS.iter().fold(0, |acc, positions| {
        let perm: [u8; 4] = std::array::from_fn(|k| {
            let d = dedge_at(state, positions[k]);
            positions.iter().position(|&p| p == d).unwrap_or(0) as u8
        });
        acc * 24 + rank_perm(&perm) as usize
    })
}

fn slice_perm_state(index: usize) -> CubeState {
    let mut s = CubeState::solved();
    let ranks = [index / 576, (index / 24) % 24, index % 24];
    for (positions, &r) in SLICE_POSITIONS.iter().zip(ranks.iter()) {
        let perm = unrank_perm(r as u32, 4);
        for k in 0..4 {
            place_dedge(&mut s, positions[k], positions[perm[k] as usize]);
        }
    }
    s
}

/// Pruning data of one phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruningTables {
    phase: PhaseId,
    parts: Vec<Vec<u8>>,
}

/// Entry counts of every table of `phase`, in storage order.
pub fn table_sizes(phase: PhaseId) -> Vec<usize> {
    match phase.get() {
        1 => vec![binomial(24, 8) as usize],
        2 => vec![70 * FB_SETS, 24usize.pow(4)],
        3 => vec![CENTER_GRID, 576, 24usize.pow(4)],
        4 => vec![CENTER_GRID, PAIRINGS],
        5 => vec![4096],
        6 => vec![2187 * 495],
        7 => vec![40320 * 70],
        8 => vec![96 * 13824],
        _ => unreachable!(),
    }
}

impl PruningTables {
    pub fn build(phase: PhaseId) -> PruningTables {
        let gens = generators(phase);
        let n = gens.len();
        let parts = match phase.get() {
            1 => vec![build_phase1()],
            2 => {
                let class = data().wing_class;
                vec![build_phase2_centers(), build_pair_pair(gens, |a, b| class[a] != class[b])]
            }
            3 => {
                let targets = (0..CENTER_GRID).filter(|&i| data().centers_g3[i]);
                vec![
                    grid_table(targets, gens),
                    build_single_pair(gens, in_middle_together),
                    build_pair_pair(gens, in_middle_together),
                ]
            }
            4 => {
                let solved = center_index(&SOLVED_CENTERS).unwrap() as usize;
                vec![grid_table([solved], gens), build_pairing()]
            }
            5 => {
                let mt = move_table(4096, gens, flip_state, flip_index);
                vec![bfs(4096, [0], n, |x, g| mt[x * n + g] as usize)]
            }
            6 => {
                let ta = move_table(2187, gens, twist_state, twist_index);
                let tb = move_table(495, gens, middle_set_state, middle_set_index);
                let solved = CubeState::solved();
                vec![product_table(2187, 495, &ta, &tb, n, vec![middle_set_index(&solved)])]
            }
            7 => {
                let ta = move_table(40320, gens, corner_perm_state, corner_perm_index);
                let tb = move_table(70, gens, slice_mask_state, slice_mask_index);
                let target_b = slice_mask_index(&CubeState::solved());
                let targets = half_turn_corner_ranks().0.iter().map(|&r| r as usize * 70 + target_b).collect();
                vec![product_table(40320, 70, &ta, &tb, n, targets)]
            }
            8 => {
                let (ranks, index) = half_turn_corner_ranks();
                let ta = move_table(
                    96,
                    gens,
                    |i| corner_perm_state(ranks[i] as usize),
                    |s| index[corner_perm_index(s)] as usize,
                );
                let tb = move_table(13824, gens, slice_perm_state, slice_perm_index);
                vec![product_table(96, 13824, &ta, &tb, n, vec![0])]
            }
            _ => unreachable!(),
        };
        PruningTables { phase, parts }
    }

    pub fn phase(&self) -> PhaseId {
        self.phase
    }

    /// Lower bound on the twists `state` needs to reach the goal of the
    /// phase; [`UNREACHED`] when the state cannot reach it with the phase's
    /// generators.
    pub fn bound(&self, state: &CubeState) -> u8 {
        let p = &self.parts;
        match self.phase.get() {
            1 => p[0][lr_set_index(state)],
            2 => {
                let Some(c) = phase2_center_index(state) else { return UNREACHED };
                let mut h = p[0][c];
                let loc = wing_locations(state);
                for k in 0..12 {
                    h = h.max(p[1][pair_pair_index(&loc, k, (k + 1) % 12)]);
                }
                h
            }
            3 => {
                let Some(c) = grid_of(state) else { return UNREACHED };
                let loc = wing_locations(state);
                let d: [u8; 12] = std::array::from_fn(|pair| {
                    let (a, b) = pair_pieces(pair);
                    p[1][loc[a] as usize * 24 + loc[b] as usize]
                });
                let mut sorted = d;
                sorted.sort_unstable();
                let mut h = p[0][c].max(sorted[3]);
                // the goal needs four pairs that can all be in the middle
                // layer together; raise the bound until such a set exists
                let mut both = [[0u8; 12]; 12];
                for i in 0..12 {
                    for j in i + 1..12 {
                        let v = p[2][pair_pair_index(&loc, i, j)];
                        both[i][j] = v;
                        both[j][i] = v;
                    }
                }
                while h < UNREACHED && !has_four_clique(&both, &d, h) {
                    h += 1;
                }
                h
            }
            4 => {
                let Some(c) = grid_of(state) else { return UNREACHED };
                let Some(e) = pairing_index(state) else { return UNREACHED };
                p[0][c].max(p[1][e])
            }
            5 => p[0][flip_index(state)],
            6 => p[0][twist_index(state) * 495 + middle_set_index(state)],
            7 => p[0][corner_perm_index(state) * 70 + slice_mask_index(state)],
            8 => {
                let i = half_turn_corner_ranks().1[corner_perm_index(state)];
                if i == u8::MAX {
                    return UNREACHED;
                }
                p[0][i as usize * 13824 + slice_perm_index(state)]
            }
            _ => unreachable!(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let mut f = Vec::new();
        f.extend_from_slice(MAGIC);
        f.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        f.extend_from_slice(&[self.phase.get(), self.parts.len() as u8]);
        for part in &self.parts {
            f.extend_from_slice(&(part.len() as u32).to_le_bytes());
        }
        for part in &self.parts {
            f.extend_from_slice(part);
        }
        crate::heuristic::write_atomic(path, &f)
    }

    pub fn load(path: &Path, phase: PhaseId) -> Result<PruningTables, CacheError> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() < 10 || &bytes[..4] != MAGIC {
            return Err(CacheError::BadMagic);
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(CacheError::Version(version));
        }
        if bytes[8] != phase.get() {
            return Err(CacheError::WrongPhase { expected: phase.get(), found: bytes[8] });
        }
        let sizes = table_sizes(phase);
        let count = bytes[9] as usize;
        let header = 10 + 4 * count;
        if count != sizes.len() || bytes.len() < header {
            return Err(CacheError::Dimensions(format!("{count} tables")));
        }
        let stored: Vec<usize> =
            (0..count).map(|i| u32::from_le_bytes(bytes[10 + 4 * i..14 + 4 * i].try_into().unwrap()) as usize).collect();
        if stored != sizes || bytes.len() != header + sizes.iter().sum::<usize>() {
            return Err(CacheError::Dimensions(format!("{stored:?}")));
        }
        let mut parts = Vec::new();
        let mut at = header;
        for s in sizes {
            parts.push(bytes[at..at + s].to_vec());
            at += s;
        }
        if parts.iter().any(|p| !p.contains(&0)) {
            return Err(CacheError::Corrupt);
        }
        Ok(PruningTables { phase, parts })
    }
}
