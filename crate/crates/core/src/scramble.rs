//! Seeded random scrambles.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::moves::{Move, MoveSequence};

/// `n` uniformly chosen twists obeying the canonical adjacency rule, so the
/// result is already in simplified form. The same `(n, seed)` always gives
/// the same sequence.
pub fn random_scramble(n: usize, seed: u64) -> MoveSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Move> = Move::all().collect();
    let mut out = Vec::with_capacity(n);
    let mut last = None;
    for _ in 0..n {
        let options: Vec<Move> = all.iter().copied().filter(|m| m.may_follow(last)).collect();
        let m = *options.choose(&mut rng).expect("some move can always follow");
        out.push(m);
        last = Some(m);
    }
    out.into()
}
