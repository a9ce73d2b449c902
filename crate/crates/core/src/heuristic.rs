//! Per-piece twist-distance metric.
//!
//! Every corner, wing and center color gets a table of single-piece BFS
//! distances to the placements it may occupy in a goal state of the phase.
//! The sums per piece class are divided by the most pieces of that class a
//! single twist can move (4 corners, 8 wings, 8 center stickers), and the
//! largest of the three terms is a lower bound on the remaining twists.

use std::collections::VecDeque;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::CubeState;
use crate::error::CacheError;
use crate::geometry::tables;
use crate::moves::Move;
use crate::phases::{generators, predicate, subgroup, PhaseId};

pub const CORNER_STATES: usize = 24;
pub const EDGE_STATES: usize = 24;
pub const CENTER_STATES: usize = 24;
pub const UNREACHABLE: u8 = u8::MAX;

const MAGIC: &[u8; 4] = b"RVDT";
pub const CACHE_VERSION: u32 = 1;

/// Goal-state samples drawn per phase when collecting goal placements.
const GOAL_SAMPLES: usize = 512;

/// Distance tables for one phase. Entries are laid out piece-major:
/// corners as `piece * 24 + slot * 3 + orientation`, wings as
/// `piece * 24 + slot`, centers as `color * 24 + slot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    phase: PhaseId,
    corners: Vec<u8>,
    edges: Vec<u8>,
    centers: Vec<u8>,
}

/// A twist distance in eighths of a twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistDistance(pub u32);

impl TwistDistance {
    pub fn eighths(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 8.0
    }

    /// Smallest whole number of twists not below the distance.
    pub fn ceil(self) -> u32 {
        self.0.div_ceil(8)
    }
}

struct PieceMoves {
    corner: Vec<[u8; CORNER_STATES]>,
    edge: Vec<[u8; EDGE_STATES]>,
    center: Vec<[u8; CENTER_STATES]>,
}

/// Where a single piece in each placement goes under every move.
fn piece_moves() -> &'static PieceMoves {
    static CELL: std::sync::OnceLock<PieceMoves> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let t = tables();
        let mut corner = vec![[0u8; CORNER_STATES]; Move::COUNT];
        let mut edge = vec![[0u8; EDGE_STATES]; Move::COUNT];
        let mut center = vec![[0u8; CENTER_STATES]; Move::COUNT];
        for m in 0..Move::COUNT {
            for to in 0..8 {
                let from = t.corner_src[m][to] as usize;
                for o in 0..3 {
                    corner[m][from * 3 + o] = (to * 3 + (o + t.corner_twist[m][to] as usize) % 3) as u8;
                }
            }
            for to in 0..24 {
                edge[m][t.edge_src[m][to] as usize] = to as u8;
                center[m][t.center_src[m][to] as usize] = to as u8;
            }
        }
        PieceMoves { corner, edge, center }
    })
}

fn bfs(goals: &[bool], gens: &[Move], step: &[[u8; 24]]) -> [u8; 24] {
    let mut dist = [UNREACHABLE; 24];
    let mut queue = VecDeque::new();
    for (x, &g) in goals.iter().enumerate() {
        if g {
            dist[x] = 0;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &m in gens {
            let y = step[m.index()][x] as usize;
            if dist[y] == UNREACHABLE {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn closure(goals: &mut [bool], gens: &[Move], step: &[[u8; 24]]) {
    let mut stack: Vec<usize> = (0..goals.len()).filter(|&x| goals[x]).collect();
    while let Some(x) = stack.pop() {
        for &m in gens {
            let y = step[m.index()][x] as usize;
            if !goals[y] {
                goals[y] = true;
                stack.push(y);
            }
        }
    }
}

/// A random member of the goal of `phase`: random walks in the subgroups
/// of the later phases, deepest first, starting from solved.
pub fn sample_goal_state(phase: PhaseId, rng: &mut impl Rng) -> CubeState {
    let mut s = CubeState::solved();
    for g in (phase.index() + 1..8).rev() {
        let gens = subgroup(g);
        for _ in 0..rng.gen_range(0..40) {
            s.apply_move_in_place(gens[rng.gen_range(0..gens.len())]);
        }
    }
    s
}

impl DistanceTable {
    pub fn build(phase: PhaseId) -> DistanceTable {
        let pm = piece_moves();
        let mut corner_goal = vec![[false; 24]; 8];
        let mut edge_goal = vec![[false; 24]; 24];
        let mut center_goal = vec![[false; 24]; 6];

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + phase.get() as u64);
        for _ in 0..GOAL_SAMPLES {
            let s = sample_goal_state(phase, &mut rng);
            debug_assert!(predicate(phase, &s));
            for slot in 0..8 {
                corner_goal[s.cp[slot] as usize][slot * 3 + s.co[slot] as usize] = true;
            }
            for slot in 0..24 {
                edge_goal[s.ep[slot] as usize][slot] = true;
                center_goal[s.centers[slot] as usize][slot] = true;
            }
        }
        // placements of goal(i) are those of goal(i+1) closed under G(i)
        for g in (phase.index() + 1..8).rev() {
            let keep = subgroup(g);
            for goal in corner_goal.iter_mut() {
                closure(goal, keep, &pm.corner);
            }
            for goal in edge_goal.iter_mut() {
                closure(goal, keep, &pm.edge);
            }
            for goal in center_goal.iter_mut() {
                closure(goal, keep, &pm.center);
            }
        }

        let gens = generators(phase);
        let corners = corner_goal.iter().flat_map(|g| bfs(g, gens, &pm.corner)).collect();
        let edges = edge_goal.iter().flat_map(|g| bfs(g, gens, &pm.edge)).collect();
        let centers = center_goal.iter().flat_map(|g| bfs(g, gens, &pm.center)).collect();
        DistanceTable { phase, corners, edges, centers }
    }

    pub fn phase(&self) -> PhaseId {
        self.phase
    }

    pub fn corner(&self, piece: usize, slot: usize, ori: usize) -> u8 {
        self.corners[piece * CORNER_STATES + slot * 3 + ori]
    }

    pub fn edge(&self, piece: usize, slot: usize) -> u8 {
        self.edges[piece * EDGE_STATES + slot]
    }

    pub fn center(&self, color: usize, slot: usize) -> u8 {
        self.centers[color * CENTER_STATES + slot]
    }

    /// Corners whose goal placements do not cover every placement.
    pub fn corner_set(&self) -> Vec<usize> {
        (0..8).filter(|&p| self.corners[p * 24..(p + 1) * 24].iter().any(|&d| d > 0)).collect()
    }

    pub fn edge_set(&self) -> Vec<usize> {
        (0..24).filter(|&p| self.edges[p * 24..(p + 1) * 24].iter().any(|&d| d > 0)).collect()
    }

    pub fn center_set(&self) -> Vec<usize> {
        (0..6).filter(|&c| self.centers[c * 24..(c + 1) * 24].iter().any(|&d| d > 0)).collect()
    }

    /// The three class sums: corners, wings and center stickers.
    pub fn sums(&self, state: &CubeState) -> (u32, u32, u32) {
        let mut c = 0u32;
        for slot in 0..8 {
            c += self.corner(state.cp[slot] as usize, slot, state.co[slot] as usize) as u32;
        }
        let mut e = 0u32;
        let mut x = 0u32;
        for slot in 0..24 {
            e += self.edge(state.ep[slot] as usize, slot) as u32;
            x += self.center(state.centers[slot] as usize, slot) as u32;
        }
        (c, e, x)
    }

    /// `max(corners / 4, wings / 8, centers / 8)` without the goal test.
    pub fn raw_distance(&self, state: &CubeState) -> TwistDistance {
        let (c, e, x) = self.sums(state);
        TwistDistance((2 * c).max(e).max(x))
    }

    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let mut f = Vec::with_capacity(33 + 8 * 24 + 24 * 24 + 6 * 24);
        f.extend_from_slice(MAGIC);
        f.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        f.push(self.phase.get());
        for (count, states) in [(8u32, CORNER_STATES), (24, EDGE_STATES), (6, CENTER_STATES)] {
            f.extend_from_slice(&count.to_le_bytes());
            f.extend_from_slice(&(states as u32).to_le_bytes());
        }
        f.extend_from_slice(&self.corners);
        f.extend_from_slice(&self.edges);
        f.extend_from_slice(&self.centers);
        write_atomic(path, &f)
    }

    pub fn load(path: &Path, phase: PhaseId) -> Result<DistanceTable, CacheError> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let header = 4 + 4 + 1 + 6 * 4;
        if bytes.len() < header || &bytes[..4] != MAGIC {
            return Err(CacheError::BadMagic);
        }
        let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let version = word(4);
        if version != CACHE_VERSION {
            return Err(CacheError::Version(version));
        }
        if bytes[8] != phase.get() {
            return Err(CacheError::WrongPhase { expected: phase.get(), found: bytes[8] });
        }
        let dims: Vec<u32> = (0..6).map(|i| word(9 + 4 * i)).collect();
        if dims != [8, 24, 24, 24, 6, 24] {
            return Err(CacheError::Dimensions(format!("{dims:?}")));
        }
        let body = &bytes[header..];
        if body.len() != (8 + 24 + 6) * 24 {
            return Err(CacheError::Dimensions(format!("{} entry bytes", body.len())));
        }
        Ok(DistanceTable {
            phase,
            corners: body[..192].to_vec(),
            edges: body[192..768].to_vec(),
            centers: body[768..].to_vec(),
        })
    }
}

/// Writes through a temporary file in the same directory, so readers never
/// see a partial table.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CacheError> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// The metric for `state` in `phase`. States outside the goal count at
/// least one twist, so the value is zero exactly on goal states.
pub fn twist_distance(state: &CubeState, phase: PhaseId, tables: &DistanceTable) -> TwistDistance {
    debug_assert_eq!(tables.phase, phase);
    let raw = tables.raw_distance(state);
    if raw.0 == 0 && !predicate(phase, state) {
        TwistDistance(8)
    } else {
        raw
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::parse_moves;

    fn p(n: u8) -> PhaseId {
        PhaseId::new(n).unwrap()
    }

    #[test]
    fn goal_entries_are_zero() {
        for phase in PhaseId::all() {
            let t = DistanceTable::build(phase);
            assert_eq!(t.raw_distance(&CubeState::solved()).0, 0);
            assert_eq!(twist_distance(&CubeState::solved(), phase, &t).0, 0);
        }
    }

    #[test]
    fn last_phase_corner_one_twist_away() {
        let t = DistanceTable::build(p(8));
        let s = CubeState::solved().apply_sequence(&parse_moves("R2").unwrap());
        let slot = s.cp.iter().position(|&c| c == 0).unwrap();
        assert_eq!(t.corner(0, slot, s.co[slot] as usize), 1);
        // a quarter turn leaves the half-turn orbit of the corner slot
        let s = CubeState::solved().apply_sequence(&parse_moves("U").unwrap());
        let slot = s.cp.iter().position(|&c| c == 0).unwrap();
        assert_eq!(t.corner(0, slot, s.co[slot] as usize), UNREACHABLE);
        assert_eq!(t.corner_set().len(), 8);
        assert_eq!(t.edge_set().len(), 24);
    }

    #[test]
    fn outer_left_quarter_in_phase_five() {
        let t = DistanceTable::build(p(5));
        let s = CubeState::solved().apply_sequence(&parse_moves("L").unwrap());
        assert_eq!(twist_distance(&s, p(5), &t), TwistDistance(8));
    }

    #[test]
    fn cache_round_trip_and_rejection() {
        let dir = std::env::temp_dir().join(format!("rvdt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p3.bin");
        let t = DistanceTable::build(p(3));
        t.save(&path).unwrap();
        assert_eq!(DistanceTable::load(&path, p(3)).unwrap(), t);
        assert!(matches!(DistanceTable::load(&path, p(4)), Err(CacheError::WrongPhase { .. })));
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[4] = 99;
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(DistanceTable::load(&path, p(3)), Err(CacheError::Version(99))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
