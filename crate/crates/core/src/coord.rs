//! Ranking helpers for subsets and permutations.

use std::sync::OnceLock;

fn binomials() -> &'static [[u32; 25]; 25] {
    static C: OnceLock<[[u32; 25]; 25]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [[0u32; 25]; 25];
        for n in 0..25 {
            c[n][0] = 1;
            for k in 1..=n {
                c[n][k] = c[n - 1][k - 1] + if k < n { c[n - 1][k] } else { 0 };
            }
        }
        c
    })
}

pub fn binomial(n: usize, k: usize) -> u32 {
    if k > n {
        0
    } else {
        binomials()[n][k]
    }
}

/// Colex rank of a bit set among the sets of the same size.
pub fn rank_subset(mask: u32) -> u32 {
    let mut rank = 0;
    let mut k = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        k += 1;
        rank += binomial(i, k);
        m &= m - 1;
    }
    rank
}

pub fn unrank_subset(mut rank: u32, k: usize, n: usize) -> u32 {
    let mut mask = 0;
    let mut k = k;
    for i in (0..n).rev() {
        if k == 0 {
            break;
        }
        let c = binomial(i, k);
        if rank >= c {
            rank -= c;
            mask |= 1 << i;
            k -= 1;
        }
    }
    mask
}

/// Gathers the bits of `mask` at `slots` into a compact mask.
pub fn gather(mask: u32, slots: &[usize]) -> u32 {
    slots.iter().enumerate().fold(0, |acc, (i, &s)| acc | (((mask >> s) & 1) << i))
}

pub fn scatter(compact: u32, slots: &[usize]) -> u32 {
    slots.iter().enumerate().fold(0, |acc, (i, &s)| acc | (((compact >> i) & 1) << s))
}

/// Moves bit `src[t]` of `mask` to bit `t`.
pub fn permute_mask(mask: u32, src: &[u8; 24]) -> u32 {
    let mut out = 0;
    for (t, &s) in src.iter().enumerate() {
        out |= ((mask >> s) & 1) << t;
    }
    out
}

pub fn rank_perm(p: &[u8]) -> u32 {
    crate::phases::rank_perm(p)
}

pub fn unrank_perm(mut rank: u32, n: usize) -> Vec<u8> {
    let mut digits = vec![0u32; n];
    for i in (0..n).rev() {
        let base = (n - i) as u32;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.iter().map(|&d| pool.remove(d as usize)).collect()
}
