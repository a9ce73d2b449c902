//! 96-facelet geometric model of the 4x4x4.
//!
//! Cubie positions use doubled coordinates in {-3, -1, 1, 3} with `x`
//! towards R, `y` towards U and `z` towards F. Every twist is produced by
//! rotating the facelets of one layer, and the resulting facelet
//! permutations are baked into piece-level tables once per process.
//!
//! Sticker layout of the text format (faces in order U, R, F, D, L, B,
//! stickers row major):
//!
//! ```text
//!              U00 U01 U02 U03
//!              U04 U05 U06 U07
//!              U08 U09 U10 U11
//!              U12 U13 U14 U15
//! L00 .. L03   F00 .. F03   R00 .. R03   B00 .. B03
//!  ..           ..           ..           ..
//! L12 .. L15   F12 .. F15   R12 .. R15   B12 .. B15
//!              D00 D01 D02 D03
//!              ..
//!              D12 D13 D14 D15
//! ```
//!
//! U is seen from above with B at the top edge, D from below with F at the
//! top edge, and the four side faces with U at the top edge.

use std::sync::OnceLock;

use crate::moves::{Axis, Move};

pub const FACELETS: usize = 96;

pub type Vec3 = [i8; 3];

/// Position and outward normal of a sticker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sticker {
    pub pos: Vec3,
    pub normal: Vec3,
}

const FACE_NORMALS: [Vec3; 6] = [[0, 1, 0], [1, 0, 0], [0, 0, 1], [0, -1, 0], [-1, 0, 0], [0, 0, -1]];

pub fn sticker(facelet: usize) -> Sticker {
    let face = facelet / 16;
    let r = ((facelet % 16) / 4) as i8;
    let c = (facelet % 4) as i8;
    let pos = match face {
        0 => [-3 + 2 * c, 3, -3 + 2 * r],
        1 => [3, 3 - 2 * r, 3 - 2 * c],
        2 => [-3 + 2 * c, 3 - 2 * r, 3],
        3 => [-3 + 2 * c, -3, 3 - 2 * r],
        4 => [-3, 3 - 2 * r, -3 + 2 * c],
        5 => [3 - 2 * c, 3 - 2 * r, -3],
        _ => unreachable!(),
    };
    Sticker { pos, normal: FACE_NORMALS[face] }
}

fn facelet_at(s: Sticker) -> usize {
    (0..FACELETS).find(|&f| sticker(f) == s).expect("sticker off the cube")
}

/// Clockwise quarter turn seen from the positive end of `axis`.
fn rotate(v: Vec3, axis: Axis) -> Vec3 {
    let [x, y, z] = v;
    match axis {
        Axis::X => [x, z, -y],
        Axis::Y => [-z, y, x],
        Axis::Z => [y, -x, z],
    }
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: Vec3, b: Vec3) -> i32 {
    a.iter().zip(b.iter()).map(|(&p, &q)| p as i32 * q as i32).sum()
}

/// `to[f]` is where the sticker currently at `f` ends up after the move.
fn facelet_permutation(m: Move) -> [u8; FACELETS] {
    let axis = m.axis();
    let coord = -3 + 2 * m.layer() as i8;
    let mut to = [0u8; FACELETS];
    for (f, slot) in to.iter_mut().enumerate() {
        let mut s = sticker(f);
        if s.pos[axis.index()] == coord {
            for _ in 0..m.turn().quarters() {
                s = Sticker { pos: rotate(s.pos, axis), normal: rotate(s.normal, axis) };
            }
        }
        *slot = facelet_at(s) as u8;
    }
    to
}

pub const CORNER_NAMES: [&str; 8] = ["URF", "UFL", "ULB", "UBR", "DFR", "DLF", "DBL", "DRB"];
const CORNER_POS: [Vec3; 8] = [
    [3, 3, 3],
    [-3, 3, 3],
    [-3, 3, -3],
    [3, 3, -3],
    [3, -3, 3],
    [-3, -3, 3],
    [-3, -3, -3],
    [3, -3, -3],
];

const EDGE_MID: [Vec3; 12] = [
    [3, 3, 0],
    [0, 3, 3],
    [-3, 3, 0],
    [0, 3, -3],
    [3, -3, 0],
    [0, -3, 3],
    [-3, -3, 0],
    [0, -3, -3],
    [3, 0, 3],
    [-3, 0, 3],
    [-3, 0, -3],
    [3, 0, -3],
];

/// Piece-level move tables plus the sticker locations of every slot.
pub struct Tables {
    /// Sticker facelets of each corner slot; index 0 is on U or D, the rest
    /// follow clockwise.
    pub corner_facelets: [[u8; 3]; 8],
    /// Sticker facelets of each wing slot, in face order.
    pub edge_facelets: [[u8; 2]; 24],
    pub center_facelets: [u8; 24],
    /// `corner_src[m][t]` is the slot whose corner moves into slot `t`.
    pub corner_src: [[u8; 8]; Move::COUNT],
    pub corner_twist: [[u8; 8]; Move::COUNT],
    pub edge_src: [[u8; 24]; Move::COUNT],
    pub center_src: [[u8; 24]; Move::COUNT],
    /// `edge_swap[p][s]`: whether wing `p` shows its stickers in reversed
    /// order when sitting in slot `s`.
    pub edge_swap: [[bool; 24]; 24],
}

pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

fn build_tables() -> Tables {
    let mut corner_facelets = [[0u8; 3]; 8];
    for (slot, &pos) in CORNER_POS.iter().enumerate() {
        let mut fs: Vec<usize> = (0..FACELETS).filter(|&f| sticker(f).pos == pos).collect();
        assert_eq!(fs.len(), 3);
        let first = fs.iter().position(|&f| sticker(f).normal[1] != 0).unwrap();
        fs.swap(0, first);
        // clockwise seen from outside: (n0 x n1) . n2 < 0
        if dot(cross(sticker(fs[0]).normal, sticker(fs[1]).normal), sticker(fs[2]).normal) > 0 {
            fs.swap(1, 2);
        }
        corner_facelets[slot] = [fs[0] as u8, fs[1] as u8, fs[2] as u8];
    }

    let mut edge_facelets = [[0u8; 2]; 24];
    for (p, &mid) in EDGE_MID.iter().enumerate() {
        let free = mid.iter().position(|&c| c == 0).unwrap();
        for (w, off) in [-1i8, 1].into_iter().enumerate() {
            let mut pos = mid;
            pos[free] = off;
            let fs: Vec<usize> = (0..FACELETS).filter(|&f| sticker(f).pos == pos).collect();
            assert_eq!(fs.len(), 2);
            edge_facelets[2 * p + w] = [fs[0] as u8, fs[1] as u8];
        }
    }

    let mut center_facelets = [0u8; 24];
    for face in 0..6 {
        for (k, (r, c)) in [(1, 1), (1, 2), (2, 1), (2, 2)].into_iter().enumerate() {
            center_facelets[face * 4 + k] = (face * 16 + r * 4 + c) as u8;
        }
    }

    let corner_of = |f: u8| -> (usize, usize) {
        for (s, fs) in corner_facelets.iter().enumerate() {
            if let Some(i) = fs.iter().position(|&x| x == f) {
                return (s, i);
            }
        }
        unreachable!()
    };
    let edge_of = |f: u8| -> (usize, usize) {
        for (s, fs) in edge_facelets.iter().enumerate() {
            if let Some(i) = fs.iter().position(|&x| x == f) {
                return (s, i);
            }
        }
        unreachable!()
    };
    let center_of = |f: u8| center_facelets.iter().position(|&x| x == f).unwrap();

    let mut corner_src = [[0u8; 8]; Move::COUNT];
    let mut corner_twist = [[0u8; 8]; Move::COUNT];
    let mut edge_src = [[0u8; 24]; Move::COUNT];
    let mut edge_flip = [[false; 24]; Move::COUNT];
    let mut center_src = [[0u8; 24]; Move::COUNT];
    for m in Move::all() {
        let to = facelet_permutation(m);
        let mi = m.index();
        for (s, fs) in corner_facelets.iter().enumerate() {
            let (t, d) = corner_of(to[fs[0] as usize]);
            for (k, &f) in fs.iter().enumerate() {
                assert_eq!(corner_of(to[f as usize]), (t, (k + d) % 3), "corner cycle order");
            }
            corner_src[mi][t] = s as u8;
            corner_twist[mi][t] = d as u8;
        }
        for (s, fs) in edge_facelets.iter().enumerate() {
            let (t, i) = edge_of(to[fs[0] as usize]);
            edge_src[mi][t] = s as u8;
            edge_flip[mi][t] = i == 1;
        }
        for (s, &f) in center_facelets.iter().enumerate() {
            center_src[mi][center_of(to[f as usize])] = s as u8;
        }
    }

    // Propagate the sticker order of each wing through every slot it can
    // reach; a wing fits each slot in exactly one way.
    let mut edge_swap = [[false; 24]; 24];
    for (p, row) in edge_swap.iter_mut().enumerate() {
        let mut seen = [None::<bool>; 24];
        seen[p] = Some(false);
        let mut queue = vec![p];
        while let Some(s) = queue.pop() {
            let swapped = seen[s].unwrap();
            for mi in 0..Move::COUNT {
                let t = (0..24).find(|&t| edge_src[mi][t] as usize == s).unwrap();
                let next = swapped ^ edge_flip[mi][t];
                match seen[t] {
                    None => {
                        seen[t] = Some(next);
                        queue.push(t);
                    }
                    Some(prev) => assert_eq!(prev, next, "wing orientation is not slot-determined"),
                }
            }
        }
        for s in 0..24 {
            row[s] = seen[s].expect("wing orbit covers all slots");
        }
    }

    Tables {
        corner_facelets,
        edge_facelets,
        center_facelets,
        corner_src,
        corner_twist,
        edge_src,
        center_src,
        edge_swap,
    }
}
