//! Slice twists, move sequences and WCA single-turn notation.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseMovesError;

/// Rotation axis. `X` points from L to R, `Y` from D to U, `Z` from B to F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    /// Slice letters for layers 0..3 along this axis.
    fn letters(self) -> [char; 4] {
        match self {
            Axis::X => ['L', 'l', 'r', 'R'],
            Axis::Y => ['D', 'd', 'u', 'U'],
            Axis::Z => ['B', 'b', 'f', 'F'],
        }
    }
}

/// Amount of rotation, measured clockwise as seen from the positive face of
/// the move's axis (R, U or F side).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Turn {
    Cw,
    Half,
    Ccw,
}

impl Turn {
    pub const ALL: [Turn; 3] = [Turn::Cw, Turn::Half, Turn::Ccw];

    /// Number of clockwise quarter turns (1, 2 or 3).
    pub fn quarters(self) -> u8 {
        match self {
            Turn::Cw => 1,
            Turn::Half => 2,
            Turn::Ccw => 3,
        }
    }

    pub fn from_quarters(q: u8) -> Option<Turn> {
        match q % 4 {
            1 => Some(Turn::Cw),
            2 => Some(Turn::Half),
            3 => Some(Turn::Ccw),
            _ => None,
        }
    }

    pub fn inverse(self) -> Turn {
        match self {
            Turn::Cw => Turn::Ccw,
            Turn::Half => Turn::Half,
            Turn::Ccw => Turn::Cw,
        }
    }
}

/// One of the 36 single-slice twists.
///
/// Layers are numbered 0..3 from the negative side of the axis, so along
/// `X` they are L, l, r, R. Layers 0 and 3 are outer layers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move(u8);

impl Move {
    pub const COUNT: usize = 36;

    pub fn new(axis: Axis, layer: u8, turn: Turn) -> Move {
        assert!(layer < 4, "layer index out of range: {layer}");
        Move((axis.index() as u8) * 12 + layer * 3 + turn as u8)
    }

    /// Every move in canonical order: axis, then layer, then turn.
    pub fn all() -> impl Iterator<Item = Move> {
        (0..Self::COUNT as u8).map(Move)
    }

    pub fn from_index(i: usize) -> Move {
        assert!(i < Self::COUNT);
        Move(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn axis(self) -> Axis {
        Axis::from_index(self.0 as usize / 12)
    }

    pub fn layer(self) -> u8 {
        (self.0 % 12) / 3
    }

    pub fn turn(self) -> Turn {
        Turn::ALL[(self.0 % 3) as usize]
    }

    /// Slice identifier in 0..12 (axis and layer).
    pub fn slice(self) -> usize {
        self.0 as usize / 3
    }

    pub fn is_outer(self) -> bool {
        matches!(self.layer(), 0 | 3)
    }

    pub fn inverse(self) -> Move {
        Move::new(self.axis(), self.layer(), self.turn().inverse())
    }

    /// Canonical adjacency: a move may not repeat the previous slice, and
    /// after a move on the same axis only a strictly higher layer follows.
    pub fn may_follow(self, prev: Option<Move>) -> bool {
        match prev {
            None => true,
            Some(p) => self.axis() != p.axis() || self.layer() > p.layer(),
        }
    }

    /// The slice letter and the turn as written in WCA notation, where the
    /// letter's own face defines clockwise.
    fn notation(self) -> (char, Turn) {
        let letter = self.axis().letters()[self.layer() as usize];
        let turn = if self.layer() < 2 {
            self.turn().inverse()
        } else {
            self.turn()
        };
        (letter, turn)
    }

    fn from_notation(letter: char, turn: Turn) -> Option<Move> {
        for axis in Axis::ALL {
            if let Some(layer) = axis.letters().iter().position(|&c| c == letter) {
                let turn = if layer < 2 { turn.inverse() } else { turn };
                return Some(Move::new(axis, layer as u8, turn));
            }
        }
        None
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (letter, turn) = self.notation();
        match turn {
            Turn::Cw => write!(f, "{letter}"),
            Turn::Half => write!(f, "{letter}2"),
            Turn::Ccw => write!(f, "{letter}'"),
        }
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Move {
    type Err = ParseMovesError;

    fn from_str(s: &str) -> Result<Move, ParseMovesError> {
        parse_token(s, 0)
    }
}

fn parse_token(token: &str, position: usize) -> Result<Move, ParseMovesError> {
    let mut chars = token.chars();
    let letter = chars.next().ok_or_else(|| ParseMovesError::UnknownToken {
        position,
        token: token.to_string(),
    })?;
    let suffix: String = chars.collect();
    let turn = match suffix.as_str() {
        "" => Turn::Cw,
        "2" => Turn::Half,
        "'" | "\u{2032}" | "\u{2019}" => Turn::Ccw,
        _ => {
            return Err(if Move::from_notation(letter, Turn::Cw).is_some() {
                ParseMovesError::IllegalSuffix {
                    position,
                    token: token.to_string(),
                }
            } else {
                ParseMovesError::UnknownToken {
                    position,
                    token: token.to_string(),
                }
            })
        }
    };
    Move::from_notation(letter, turn).ok_or_else(|| ParseMovesError::UnknownToken {
        position,
        token: token.to_string(),
    })
}

/// An ordered list of twists; the empty sequence is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn new() -> MoveSequence {
        MoveSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.0.iter()
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn push(&mut self, m: Move) {
        self.0.push(m);
    }

    pub fn extend_from(&mut self, other: &MoveSequence) {
        self.0.extend_from_slice(&other.0);
    }

    /// Reverses the order and inverts every twist.
    pub fn inverse(&self) -> MoveSequence {
        MoveSequence(self.0.iter().rev().map(|m| m.inverse()).collect())
    }

    /// Merges and cancels twists of the same slice and sorts runs of
    /// commuting same-axis twists by ascending layer, until nothing changes.
    pub fn simplify(&self) -> MoveSequence {
        // Stack of same-axis runs; each run holds the net quarter turns per layer.
        let mut runs: Vec<(Axis, [u8; 4])> = Vec::new();
        for &m in &self.0 {
            match runs.last_mut() {
                Some((axis, amounts)) if *axis == m.axis() => {
                    let layer = m.layer() as usize;
                    amounts[layer] = (amounts[layer] + m.turn().quarters()) % 4;
                    if amounts.iter().all(|&a| a == 0) {
                        runs.pop();
                    }
                }
                _ => {
                    let mut amounts = [0u8; 4];
                    amounts[m.layer() as usize] = m.turn().quarters();
                    runs.push((m.axis(), amounts));
                }
            }
        }
        let mut out = Vec::with_capacity(self.0.len());
        for (axis, amounts) in runs {
            for (layer, &q) in amounts.iter().enumerate() {
                if let Some(turn) = Turn::from_quarters(q) {
                    out.push(Move::new(axis, layer as u8, turn));
                }
            }
        }
        MoveSequence(out)
    }
}

impl From<Vec<Move>> for MoveSequence {
    fn from(v: Vec<Move>) -> Self {
        MoveSequence(v)
    }
}

impl FromIterator<Move> for MoveSequence {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveSequence(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a MoveSequence {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for MoveSequence {
    type Err = ParseMovesError;

    fn from_str(s: &str) -> Result<MoveSequence, ParseMovesError> {
        parse_moves(s)
    }
}

/// Parses whitespace separated WCA tokens. Positions in errors are 0-based
/// token indices.
pub fn parse_moves(text: &str) -> Result<MoveSequence, ParseMovesError> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, tok)| parse_token(tok, i))
        .collect::<Result<Vec<_>, _>>()
        .map(MoveSequence)
}

pub fn format_moves(seq: &MoveSequence) -> String {
    seq.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> MoveSequence {
        parse_moves(s).unwrap()
    }

    #[test]
    fn thirty_six_distinct_moves() {
        let all: std::collections::HashSet<String> = Move::all().map(|m| m.to_string()).collect();
        assert_eq!(all.len(), 36);
        for m in Move::all() {
            assert_eq!(m.to_string().parse::<Move>().unwrap(), m);
        }
    }

    #[test]
    fn prime_is_counter_clockwise_outer_right() {
        let m: Move = "R'".parse().unwrap();
        assert_eq!(m.axis(), Axis::X);
        assert_eq!(m.layer(), 3);
        assert_eq!(m.turn(), Turn::Ccw);
        // L is clockwise from the left, which is counter-clockwise about +x.
        let l: Move = "L".parse().unwrap();
        assert_eq!((l.axis(), l.layer(), l.turn()), (Axis::X, 0, Turn::Ccw));
    }

    #[test]
    fn parse_examples() {
        assert!(seq("").is_empty());
        let s = seq("R2 F2 U F2 U' L2 U R2 U");
        assert_eq!(s.len(), 9);
        assert_eq!(s.iter().filter(|m| m.turn() == Turn::Half).count(), 5);
        assert_eq!(seq("  U2 \n r'  ").to_string(), "U2 r'");
        assert_eq!(seq("R\u{2032}"), seq("R'"));
    }

    #[test]
    fn parse_errors_name_position() {
        assert_eq!(
            parse_moves("R U X"),
            Err(ParseMovesError::UnknownToken { position: 2, token: "X".into() })
        );
        assert_eq!(
            parse_moves("R U3"),
            Err(ParseMovesError::IllegalSuffix { position: 1, token: "U3".into() })
        );
        assert!(matches!(parse_moves("R2'"), Err(ParseMovesError::IllegalSuffix { position: 0, .. })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(seq("R").inverse(), seq("R'"));
        assert_eq!(seq("U B2").inverse(), seq("B2 U'"));
        assert_eq!(MoveSequence::new().inverse(), MoveSequence::new());
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(seq("U U2").simplify(), seq("U'"));
        assert_eq!(seq("R2 R2").simplify(), seq(""));
        assert_eq!(seq("L2 R2 L2").simplify(), seq("R2"));
        assert_eq!(seq("R L").simplify(), seq("L R"));
        assert_eq!(seq("F U R R' U' B").simplify(), seq("B F"));
        assert_eq!(seq("F b f' B' F2").simplify(), seq("B' b f' F'"));
    }
}
