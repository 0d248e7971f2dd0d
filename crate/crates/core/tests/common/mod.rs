//! Oracles shared by the integration targets.

#![allow(dead_code)]

use std::sync::OnceLock;

const M: i64 = 512;

/// For each residue mod 2⁹: (is a square, is the square of an odd number).
fn square_table() -> &'static [(bool, bool)] {
    static TABLE: OnceLock<Vec<(bool, bool)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![(false, false); M as usize];
        for z in 0..M {
            let r = (z * z % M) as usize;
            t[r].0 = true;
            if z % 2 == 1 {
                t[r].1 = true;
            }
        }
        t
    })
}

/// The 2-adic Hilbert symbol by primitive solvability of
/// `z² ≡ a·x² + b·y² (mod 2⁹)`.
pub fn hilbert2_mod_512(a: i64, b: i64) -> i32 {
    let squares = square_table();
    for x in 0..M / 2 {
        for y in 0..M / 2 {
            let (any, odd) = squares[(a * x * x + b * y * y).rem_euclid(M) as usize];
            if odd || (any && (x % 2 == 1 || y % 2 == 1)) {
                return 1;
            }
        }
    }
    -1
}

/// Nonzero pairs with `|a|, |b| ≤ 50`.
pub fn hilbert_grid() -> impl Iterator<Item = (i64, i64)> {
    (-50i64..=50)
        .filter(|&a| a != 0)
        .flat_map(|a| (-50i64..=50).filter(|&b| b != 0).map(move |b| (a, b)))
}

pub fn is_square_free(n: i64) -> bool {
    let n = n.abs();
    (2..).take_while(|q| q * q <= n).all(|q| n % (q * q) != 0)
}
