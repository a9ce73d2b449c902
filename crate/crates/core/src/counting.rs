//! Size of the state space and the move-count lower bound it implies.

use num_bigint::BigUint;
use num_traits::One;

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Numerator and denominator of `8! 3^7 24! 24! / ((4!)^6 24)`.
pub fn configuration_terms() -> (BigUint, BigUint) {
    let numerator = factorial(8) * BigUint::from(3u32).pow(7) * factorial(24) * factorial(24);
    let denominator = factorial(4).pow(6) * 24u32;
    (numerator, denominator)
}

/// Number of configurations of the 4x4x4 with indistinguishable centers and
/// no fixed orientation.
pub fn count_configurations() -> BigUint {
    let (n, d) = configuration_terms();
    n / d
}

/// Smallest `n >= 1` with `36 * 24^(n-1) >= total`. On the full
/// configuration count this is 34: `36 * 24^32` is about `5.29e45`, still
/// short of the count, while `36 * 24^33` is about `1.27e47`.
///
/// A `total` of zero is treated like one.
pub fn pigeonhole_bound(total: &BigUint) -> u32 {
    let mut n = 1;
    let mut reach = BigUint::from(36u32);
    while &reach < total {
        reach *= 24u32;
        n += 1;
    }
    n
}

/// `total` rounded to `digits` significant digits, as `(mantissa, exponent)`
/// with the mantissa scaled to an integer, e.g. `(7401, 45)` for 7.401e45.
pub fn scientific(total: &BigUint, digits: u32) -> (u64, u32) {
    let s = total.to_str_radix(10);
    let exponent = s.len() as u32 - 1;
    let digits = digits.max(1) as usize;
    if s.len() <= digits {
        return (s.parse::<u64>().unwrap() * 10u64.pow((digits - s.len()) as u32), exponent);
    }
    let head: u64 = s[..digits].parse().unwrap();
    let round_up = s.as_bytes()[digits] >= b'5';
    let mut m = head + round_up as u64;
    let mut e = exponent;
    if m == 10u64.pow(digits as u32) {
        m /= 10;
        e += 1;
    }
    (m, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        assert_eq!(pigeonhole_bound(&BigUint::from(1u32)), 1);
        assert_eq!(pigeonhole_bound(&BigUint::from(36u32)), 1);
        assert_eq!(pigeonhole_bound(&BigUint::from(37u32)), 2);
        assert_eq!(pigeonhole_bound(&BigUint::from(36u32 * 24)), 2);
        assert_eq!(pigeonhole_bound(&BigUint::from(36u32 * 24 + 1)), 3);
    }

    #[test]
    fn rounding() {
        assert_eq!(scientific(&BigUint::from(74015u32), 4), (7402, 4));
        assert_eq!(scientific(&BigUint::from(99999u32), 2), (10, 5));
        assert_eq!(scientific(&BigUint::from(7u32), 3), (700, 0));
    }
}
