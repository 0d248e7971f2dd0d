//! Invariants of an imaginary quadratic field `K = Q(√d)`.
//!
//! Elements of the ring of integers are addressed as integer pairs `(a, b)`
//! meaning `a + bω`, with `ω = √d` when `d ≡ 2, 3 (mod 4)` and
//! `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{factorize, is_prime, is_square_free, kronecker};

/// `ω² = constant + linear·ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaRule {
    pub constant: i64,
    pub linear: i64,
}

impl OmegaRule {
    /// Coefficients of `ω̄ = linear − ω`, as a pair `(a, b)` for `a + bω`.
    pub fn conjugate(&self) -> (i64, i64) {
        (self.linear, -1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplittingType::Split => "split",
            SplittingType::Inert => "inert",
            SplittingType::Ramified => "ramified",
        })
    }
}

/// A reduced positive-definite binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    /// Forms of order at most two in the class group.
    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.a == self.b || self.a == self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    d: i64,
    disc: i64,
    omega: OmegaRule,
    ramified: Vec<u64>,
    d2: u64,
    h: u64,
}

impl QuadField {
    /// Builds `Q(√d)` for square-free `d < 0`, `d ∉ {−1, −3}`.
    pub fn new(d: i64) -> Result<Self> {
        const OP: &str = "make_field";
        if d >= 0 {
            return Err(Error::pre(OP, format!("d must be negative, got {d}")));
        }
        if d == -1 || d == -3 {
            return Err(Error::pre(
                OP,
                format!("d ≠ −1,−3 is required (fields with extra units are excluded), got {d}"),
            ));
        }
        if !is_square_free(d) {
            return Err(Error::pre(OP, format!("d must be square-free, got {d}")));
        }
        let (disc, omega) = if d.rem_euclid(4) == 1 {
            (d, OmegaRule { constant: (d - 1) / 4, linear: 1 })
        } else {
            (4 * d, OmegaRule { constant: d, linear: 0 })
        };
        let ramified: Vec<u64> = factorize(-disc)?.primes().collect();
        let d2 = 1u64 << (-disc).trailing_zeros();
        let h = reduced_forms(disc).len() as u64;
        Ok(QuadField { d, disc, omega, ramified, d2, h })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Field discriminant `D`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega(&self) -> OmegaRule {
        self.omega
    }

    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    /// Number of ramified rational primes.
    pub fn t(&self) -> u32 {
        self.ramified.len() as u32
    }

    /// 2-part of `D`: 1, 4 or 8.
    pub fn d2(&self) -> u64 {
        self.d2
    }

    pub fn class_number(&self) -> u64 {
        self.h
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        self.ramified.contains(&p)
    }

    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if !is_prime(p) {
            return Err(Error::pre("splitting_type", format!("p must be prime, got {p}")));
        }
        Ok(if self.disc % p as i64 == 0 {
            SplittingType::Ramified
        } else if kronecker(self.disc, p as i64) == 1 {
            SplittingType::Split
        } else {
            SplittingType::Inert
        })
    }

    /// Norms of the prime ideals of `O` above the rational prime `p`.
    pub fn prime_ideal_norms(&self, p: u64) -> Result<Vec<u64>> {
        Ok(match self.splitting_type(p)? {
            SplittingType::Split => vec![p, p],
            SplittingType::Inert => vec![p * p],
            SplittingType::Ramified => vec![p],
        })
    }

    /// Norms of the prime ideals dividing `(n)`, with multiplicity one each.
    pub fn prime_ideal_norms_dividing(&self, n: i64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for p in factorize(n)?.primes() {
            out.extend(self.prime_ideal_norms(p)?);
        }
        Ok(out)
    }

    /// Number of ideal classes of order at most two, `2^(t−1)`.
    pub fn two_torsion_count(&self) -> u64 {
        1 << (self.t() - 1)
    }

    /// Multiplies `a + bω` by `c + eω`.
    pub fn mul(&self, (a, b): (i64, i64), (c, e): (i64, i64)) -> (i64, i64) {
        let be = b * e;
        (a * c + be * self.omega.constant, a * e + b * c + be * self.omega.linear)
    }

    /// Norm of `a + bω`.
    pub fn norm(&self, (a, b): (i64, i64)) -> i64 {
        // N(a + bω) = a² + ab·tr(ω) + b²·N(ω), with tr ω = linear, N ω = −constant
        a * a + a * b * self.omega.linear - b * b * self.omega.constant
    }
}

/// Reduced primitive forms of discriminant `disc < 0`: `|b| ≤ a ≤ c`, with
/// `b ≥ 0` whenever `|b| = a` or `a = c`, and `gcd(a, b, c) = 1`.
pub fn reduced_forms(disc: i64) -> Vec<ReducedForm> {
    assert!(disc < 0, "reduced_forms needs a negative discriminant");
    let mut out = Vec::new();
    let mut a = 1i64;
    // a ≤ √(|D|/3) for reduced forms
    while 3 * a * a <= -disc {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push(ReducedForm { a, b, c });
        }
        a += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        let f = QuadField::new(-2).unwrap();
        assert_eq!(f.disc(), -8);
        assert_eq!(f.t(), 1);
        assert_eq!(f.ramified_primes(), &[2]);
        assert_eq!(f.d2(), 8);

        let f = QuadField::new(-7).unwrap();
        assert_eq!(f.disc(), -7);
        assert_eq!(f.t(), 1);
        assert_eq!(f.d2(), 1);
        assert_eq!(f.omega(), OmegaRule { constant: -2, linear: 1 });

        let f = QuadField::new(-5).unwrap();
        assert_eq!(f.disc(), -20);
        assert_eq!(f.d2(), 4);
        assert_eq!(f.ramified_primes(), &[2, 5]);
    }

    #[test]
    fn field_rejects_bad_d() {
        for d in [-3, -1, 0, 5, -4, -12, -18] {
            assert!(QuadField::new(d).is_err(), "d = {d}");
        }
        let msg = QuadField::new(-3).unwrap_err().to_string();
        assert!(msg.contains("d ≠ −1,−3"), "{msg}");
    }

    #[test]
    fn splitting_examples() {
        let f7 = QuadField::new(-7).unwrap();
        assert_eq!(f7.splitting_type(3).unwrap(), SplittingType::Inert);
        let f2 = QuadField::new(-2).unwrap();
        assert_eq!(f2.splitting_type(3).unwrap(), SplittingType::Split);
        assert_eq!(f2.splitting_type(5).unwrap(), SplittingType::Inert);
        let f5 = QuadField::new(-5).unwrap();
        assert_eq!(f5.splitting_type(5).unwrap(), SplittingType::Ramified);
        assert!(f5.splitting_type(9).is_err());
    }

    #[test]
    fn class_number_examples() {
        let forms = |d| reduced_forms(QuadField::new(d).unwrap().disc());
        assert_eq!(forms(-2), vec![ReducedForm { a: 1, b: 0, c: 2 }]);
        assert_eq!(
            forms(-5),
            vec![ReducedForm { a: 1, b: 0, c: 5 }, ReducedForm { a: 2, b: 2, c: 3 }]
        );
        assert_eq!(
            forms(-23),
            vec![
                ReducedForm { a: 1, b: 1, c: 6 },
                ReducedForm { a: 2, b: -1, c: 3 },
                ReducedForm { a: 2, b: 1, c: 3 },
            ]
        );
        assert_eq!(QuadField::new(-105).unwrap().class_number(), 8);
    }

    #[test]
    fn two_torsion_examples() {
        assert_eq!(QuadField::new(-2).unwrap().two_torsion_count(), 1);
        assert_eq!(QuadField::new(-5).unwrap().two_torsion_count(), 2);
        let f = QuadField::new(-105).unwrap();
        assert_eq!(f.disc(), -420);
        assert_eq!(f.t(), 4);
        assert_eq!(f.two_torsion_count(), 8);
    }

    #[test]
    fn ambiguous_forms_match_genus_theory() {
        for d in (-200i64..=-2).filter(|&d| d != -3 && is_square_free(d)) {
            let f = QuadField::new(d).unwrap();
            let ambiguous = reduced_forms(f.disc()).iter().filter(|r| r.is_ambiguous()).count() as u64;
            assert_eq!(ambiguous, f.two_torsion_count(), "d = {d}");
        }
    }

    #[test]
    fn split_iff_minimal_polynomial_has_distinct_roots() {
        for d in (-30i64..=-2).filter(|&d| d != -3 && is_square_free(d)) {
            let f = QuadField::new(d).unwrap();
            let OmegaRule { constant, linear } = f.omega();
            for p in (2u64..=50).filter(|&p| is_prime(p)) {
                // x² − linear·x − constant over F_p
                let pi = p as i64;
                let roots: Vec<i64> = (0..pi)
                    .filter(|&x| (x * x - linear * x - constant).rem_euclid(pi) == 0)
                    .collect();
                let split = f.splitting_type(p).unwrap() == SplittingType::Split;
                assert_eq!(split, roots.len() == 2, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn multiplication_respects_norm() {
        for d in [-2i64, -5, -7, -11, -15] {
            let f = QuadField::new(d).unwrap();
            for x in [(1, 2), (-3, 1), (4, -5)] {
                for y in [(2, 1), (0, 1), (7, -2)] {
                    assert_eq!(f.norm(f.mul(x, y)), f.norm(x) * f.norm(y));
                }
            }
        }
    }
}
