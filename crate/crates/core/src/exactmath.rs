//! Exact integer and rational helpers: factorization, quadratic residue
//! symbols, the 2-adic Hilbert symbol, Euler's totient and the characters of
//! symmetric powers of `SL₂`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Prime factorization `n = ∏ pᵢ^eᵢ` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// `Some((p, e))` when the factored integer is a prime power `p^e`, `e ≥ 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.0.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    pub fn value(&self) -> BigInt {
        self.0
            .iter()
            .map(|&(p, e)| num_traits::pow(BigInt::from(p), e as usize))
            .product()
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all `u64` (Miller-Rabin with the first
/// twelve prime bases).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `n ≥ 1` by trial division up to 10⁶ followed by a primality check
/// of the cofactor.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n <= 0 {
        return Err(Error::pre("factorize", format!("n must be >= 1, got {n}")));
    }
    let mut m = n as u64;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT && p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if !is_prime(m) {
            return Err(Error::pre(
                "factorize",
                format!("cofactor {m} of {n} has no prime factor below 10^6 and is composite"),
            ));
        }
        out.push((m, 1));
    }
    Ok(Factorization(out))
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Result<i32> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::pre("legendre", format!("p must be an odd prime, got {p}")));
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Kronecker symbol `(a/n)`, the multiplicative extension of the Jacobi
/// symbol to all integers `n`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Splits a nonzero integer into its 2-adic valuation and odd part.
fn two_adic_split(a: i64) -> (u32, i64) {
    let v = a.trailing_zeros();
    (v, a >> v)
}

/// The 2-adic Hilbert symbol `(a, b)₂`.
///
/// With `a = 2^α u`, `b = 2^β v` and `u, v` odd, the symbol is
/// `(-1)^(ε(u)ε(v) + α ω(v) + β ω(u))` where `ε(x) = (x-1)/2` and
/// `ω(x) = (x²-1)/8` modulo 2.
pub fn hilbert2(a: i64, b: i64) -> Result<i32> {
    if a == 0 || b == 0 {
        return Err(Error::pre("hilbert2", format!("arguments must be nonzero, got ({a}, {b})")));
    }
    let (alpha, u) = two_adic_split(a);
    let (beta, v) = two_adic_split(b);
    let eps = |x: i64| (((x as i128 - 1) / 2).rem_euclid(2)) as u32;
    let omega = |x: i64| ((((x as i128) * (x as i128) - 1) / 8).rem_euclid(2)) as u32;
    let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    Ok(if e % 2 == 0 { 1 } else { -1 })
}

/// Euler's totient via the multiplicative formula.
pub fn euler_phi(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::pre("euler_phi", format!("n must be >= 1, got {n}")));
    }
    let f = factorize(n)?;
    Ok(f.factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// Trace of `x` on the `k`-th symmetric power of the standard representation,
/// where `det x = 1` and `tr x = t`: `u₀ = 1`, `u₁ = t`, `uⱼ = t·uⱼ₋₁ − uⱼ₋₂`.
pub fn sym_power_trace(t: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(Error::pre("sym_power_trace", format!("k must be >= 0, got {k}")));
    }
    let t = BigInt::from(t);
    let (mut prev, mut cur) = (BigInt::one(), t.clone());
    if k == 0 {
        return Ok(prev);
    }
    for _ in 1..k {
        let next = &t * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Returns the integer value of `r`, or a [`Error::NonIntegral`] diagnostic
/// naming `op`.
pub fn require_integer(op: &'static str, r: &BigRational) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NonIntegral {
            op,
            value: r.to_string(),
        })
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `2^e` as an exact rational; `e` may be negative.
pub fn pow2(e: i64) -> BigRational {
    let mag = num_traits::pow(BigInt::from(2), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

pub fn big_pow(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `∏ (1 − q⁻²)` over the given norms `q`.
pub fn euler_factor(norms: impl IntoIterator<Item = u64>) -> BigRational {
    norms.into_iter().fold(BigRational::one(), |acc, q| {
        let q2 = BigInt::from(q) * BigInt::from(q);
        acc * (BigRational::one() - BigRational::new(BigInt::one(), q2))
    })
}

pub fn is_square_free(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    match factorize(n.abs()) {
        Ok(f) => f.factors().iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}
