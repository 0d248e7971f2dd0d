//! Brute-force arithmetic in `R = O/(N)`.
//!
//! Everything here is deliberately naive: matrices are enumerated, ideals are
//! materialized as sets, and cosets are counted one by one. These routines
//! are the oracles that the closed formulas elsewhere in the crate are
//! checked against.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{euler_factor, factorize, require_integer};
use crate::quadfield::QuadField;
use crate::Involution;

/// Largest ring (by number of elements) for which `SL₂` is counted exhaustively.
pub const EXHAUSTIVE_RING_LIMIT: u64 = 81;

/// `a + bω` with `a, b` reduced modulo `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    pub a: u32,
    pub b: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub d: RingElem,
}

/// A point `(x : y)` of the projective line, stored as the canonical
/// representative of its orbit under unit scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    pub x: RingElem,
    pub y: RingElem,
}

#[derive(Debug, Clone)]
pub struct FiniteRing {
    field: QuadField,
    modulus: u32,
    // ω² = c₀ + c₁ω and ω̄ = c₁ − ω, reduced mod N
    omega_const: u32,
    omega_lin: u32,
    units: Vec<bool>,
}

impl FiniteRing {
    pub fn new(field: &QuadField, modulus: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::pre("finite_ring", format!("modulus must be >= 2, got {modulus}")));
        }
        let n = modulus as i64;
        let rule = field.omega();
        let mut ring = FiniteRing {
            field: field.clone(),
            modulus,
            omega_const: rule.constant.rem_euclid(n) as u32,
            omega_lin: rule.linear.rem_euclid(n) as u32,
            units: Vec::new(),
        };
        let size = ring.size();
        let mut units = vec![false; size];
        for (i, x) in ring.elements().enumerate() {
            units[i] = ring.elements().any(|y| ring.mul(x, y) == ring.one());
        }
        ring.units = units;
        Ok(ring)
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `|R| = N²`.
    pub fn size(&self) -> usize {
        (self.modulus as usize).pow(2)
    }

    pub fn elem(&self, a: i64, b: i64) -> RingElem {
        let n = self.modulus as i64;
        RingElem {
            a: a.rem_euclid(n) as u32,
            b: b.rem_euclid(n) as u32,
        }
    }

    pub fn zero(&self) -> RingElem {
        RingElem { a: 0, b: 0 }
    }

    pub fn one(&self) -> RingElem {
        self.elem(1, 0)
    }

    pub fn index(&self, x: RingElem) -> usize {
        x.a as usize + x.b as usize * self.modulus as usize
    }

    pub fn from_index(&self, i: usize) -> RingElem {
        let n = self.modulus as usize;
        RingElem {
            a: (i % n) as u32,
            b: (i / n) as u32,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        let n = self.modulus;
        RingElem {
            a: (x.a + y.a) % n,
            b: (x.b + y.b) % n,
        }
    }

    pub fn neg(&self, x: RingElem) -> RingElem {
        let n = self.modulus;
        RingElem {
            a: (n - x.a) % n,
            b: (n - x.b) % n,
        }
    }

    pub fn sub(&self, x: RingElem, y: RingElem) -> RingElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        let n = self.modulus as u64;
        let (a, b, c, e) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        let be = b * e % n;
        RingElem {
            a: ((a * c + be * self.omega_const as u64) % n) as u32,
            b: ((a * e + b * c + be * self.omega_lin as u64) % n) as u32,
        }
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        self.units[self.index(x)]
    }

    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.elements().filter(move |&x| self.is_unit(x))
    }

    /// Complex conjugation `a + bω ↦ a + bω̄`.
    pub fn sigma(&self, x: RingElem) -> RingElem {
        // a + b(c₁ − ω) = (a + b·c₁) − bω
        let n = self.modulus as u64;
        RingElem {
            a: ((x.a as u64 + x.b as u64 * self.omega_lin as u64) % n) as u32,
            b: ((n - x.b as u64) % n) as u32,
        }
    }

    pub fn det(&self, m: &Mat2) -> RingElem {
        self.sub(self.mul(m.a, m.d), self.mul(m.b, m.c))
    }

    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            c: self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            d: self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        }
    }

    pub fn identity(&self) -> Mat2 {
        Mat2 {
            a: self.one(),
            b: self.zero(),
            c: self.zero(),
            d: self.one(),
        }
    }

    /// Entry-wise complex conjugation.
    pub fn sigma_mat(&self, m: &Mat2) -> Mat2 {
        Mat2 {
            a: self.sigma(m.a),
            b: self.sigma(m.b),
            c: self.sigma(m.c),
            d: self.sigma(m.d),
        }
    }

    /// `β·σ(m)·β` with `β = diag(−1, 1)`: conjugate, then negate the
    /// off-diagonal entries.
    pub fn tau_mat(&self, m: &Mat2) -> Mat2 {
        Mat2 {
            a: self.sigma(m.a),
            b: self.neg(self.sigma(m.b)),
            c: self.neg(self.sigma(m.c)),
            d: self.sigma(m.d),
        }
    }

    pub fn apply(&self, inv: Involution, m: &Mat2) -> Mat2 {
        match inv {
            Involution::Sigma => self.sigma_mat(m),
            Involution::Tau => self.tau_mat(m),
        }
    }

    /// All of `SL₂(R)`, by testing every quadruple. Only sensible for small rings.
    pub fn sl2_elements(&self) -> Vec<Mat2> {
        let elems: Vec<RingElem> = self.elements().collect();
        let one = self.one();
        let mut out = Vec::new();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    let bc = self.mul(b, c);
                    for &d in &elems {
                        if self.sub(self.mul(a, d), bc) == one {
                            out.push(Mat2 { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    /// Counts all `(a, b, c, d) ∈ R⁴` with `ad − bc = 1` by tabulating how
    /// often each ring element occurs as a product `xy`.
    pub fn sl2_order_exhaustive(&self) -> u64 {
        let size = self.size();
        let mut hist = vec![0u64; size];
        for x in self.elements() {
            for y in self.elements() {
                hist[self.index(self.mul(x, y))] += 1;
            }
        }
        // ad = bc + 1
        self.elements()
            .map(|bc| hist[self.index(bc)] * hist[self.index(self.add(bc, self.one()))])
            .sum()
    }

    /// `N⁶ ∏_{𝔭 | (N)} (1 − N𝔭⁻²)`.
    pub fn sl2_order_closed(&self) -> Result<BigInt> {
        let n = BigInt::from(self.modulus);
        let norms = self.field.prime_ideal_norms_dividing(self.modulus as i64)?;
        let value = euler_factor(norms) * num_rational::BigRational::from_integer(num_traits::pow(n, 6));
        require_integer("sl2_order", &value)
    }

    pub fn sl2_order(&self) -> Result<Sl2Order> {
        let closed = self.sl2_order_closed()?;
        let exhaustive = (self.size() as u64 <= EXHAUSTIVE_RING_LIMIT).then(|| self.sl2_order_exhaustive());
        if let Some(count) = exhaustive {
            if BigInt::from(count) != closed {
                return Err(Error::Conformance {
                    op: "sl2_order",
                    text: format!("exhaustive count {count} differs from closed formula {closed}"),
                });
            }
        }
        Ok(Sl2Order { exhaustive, closed })
    }

    /// The principal ideal `xR` as a membership table.
    fn principal_ideal(&self, x: RingElem) -> Vec<bool> {
        let mut set = vec![false; self.size()];
        for r in self.elements() {
            set[self.index(self.mul(x, r))] = true;
        }
        set
    }

    /// Whether `xR + yR = R`.
    pub fn is_unimodular(&self, x: RingElem, y: RingElem) -> bool {
        if self.is_unit(x) || self.is_unit(y) {
            return true;
        }
        let yr = self.principal_ideal(y);
        let one = self.one();
        self.elements()
            .map(|r| self.mul(x, r))
            .any(|w| yr[self.index(self.sub(one, w))])
    }

    fn unimodular_table(&self) -> Vec<bool> {
        let size = self.size();
        let ideals: Vec<Vec<bool>> = self.elements().map(|x| self.principal_ideal(x)).collect();
        let one = self.one();
        let mut table = vec![false; size * size];
        for x in self.elements() {
            let xi = self.index(x);
            for y in self.elements() {
                let yi = self.index(y);
                table[xi * size + yi] = self.is_unit(x)
                    || self.is_unit(y)
                    || (0..size).any(|w| ideals[xi][w] && ideals[yi][self.index(self.sub(one, self.from_index(w)))]);
            }
        }
        table
    }

    /// Unimodular pairs `(x, y)`, equivalently the first columns of `SL₂(R)`.
    pub fn unimodular_pairs(&self) -> Vec<(RingElem, RingElem)> {
        let table = self.unimodular_table();
        let size = self.size();
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if table[self.index(x) * size + self.index(y)] {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn prime_power(&self, op: &'static str) -> Result<(u64, u32)> {
        factorize(self.modulus as i64)?
            .as_prime_power()
            .ok_or_else(|| Error::pre(op, format!("N must be a prime power, got {}", self.modulus)))
    }

    /// Canonical representatives of `P¹(R)` for `N` a prime power.
    pub fn projective_line(&self) -> Result<Vec<ProjPoint>> {
        self.prime_power("projective_line")?;
        let units: Vec<RingElem> = self.units().collect();
        let mut points: Vec<ProjPoint> = self
            .unimodular_pairs()
            .into_iter()
            .map(|(x, y)| {
                units
                    .iter()
                    .map(|&u| ProjPoint {
                        x: self.mul(u, x),
                        y: self.mul(u, y),
                    })
                    .min_by_key(|p| (self.index(p.x), self.index(p.y)))
                    .expect("R has at least one unit")
            })
            .collect();
        points.sort_by_key(|p| (self.index(p.x), self.index(p.y)));
        points.dedup();
        Ok(points)
    }

    /// Counts the cosets `gU` of the upper unitriangular group fixed by the
    /// involution, via their first columns `(a, c)`: a coset is fixed by `σ`
    /// iff `(σa, σc) = (a, c)` and by `τ` iff `(σa, −σc) = (a, c)`.
    pub fn fixed_coset_count(&self, inv: Involution) -> Result<CosetCensus> {
        const OP: &str = "fixed_coset_count";
        let (p, n) = self.prime_power(OP)?;
        if p == 2 {
            return Err(Error::pre(OP, "p must be odd"));
        }
        if self.field.is_ramified(p) {
            return Err(Error::pre(OP, format!("p = {p} must be unramified in K")));
        }
        let columns = self.unimodular_pairs();
        let fixed = columns
            .iter()
            .filter(|&&(a, c)| match inv {
                Involution::Sigma => self.sigma(a) == a && self.sigma(c) == c,
                Involution::Tau => self.sigma(a) == a && self.neg(self.sigma(c)) == c,
            })
            .count() as u64;
        let formula = match inv {
            Involution::Sigma => p.pow(2 * n) - p.pow(2 * n - 2),
            Involution::Tau => p.pow(2 * n - 1) - p.pow(2 * n - 2),
        };
        Ok(CosetCensus {
            involution: inv,
            p,
            n,
            total_cosets: columns.len() as u64,
            census: fixed,
            formula,
            matches: fixed == formula,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Order {
    /// Present when the ring is small enough to enumerate.
    pub exhaustive: Option<u64>,
    pub closed: BigInt,
}

impl Sl2Order {
    pub fn value(&self) -> BigInt {
        self.closed.clone()
    }

    pub fn exhaustive_matches(&self) -> Option<bool> {
        self.exhaustive.map(|c| BigInt::from(c) == self.closed)
    }
}

/// Outcome of counting fixed unipotent cosets, alongside the closed-form
/// prediction for the same count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetCensus {
    pub involution: Involution,
    pub p: u64,
    pub n: u32,
    pub total_cosets: u64,
    pub census: u64,
    /// `p^{2n} − p^{2n−2}` for `σ`, `p^{2n−1} − p^{2n−2}` for `τ`.
    pub formula: u64,
    pub matches: bool,
}

/// Number of cusps of `Γ(N)` as `h(K)·#SL₂(O/(N))/N²`, with the group order
/// counted exhaustively whenever the ring is small enough.
pub fn cusp_count_bruteforce(field: &QuadField, n: u32) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::pre("cusp_count_bruteforce", format!("N must be >= 3, got {n}")));
    }
    let ring = FiniteRing::new(field, n)?;
    let order = match ring.sl2_order()? {
        Sl2Order { exhaustive: Some(c), .. } => BigInt::from(c),
        other => other.closed,
    };
    let n2 = BigInt::from(n).pow(2);
    let (q, r) = order.div_rem(&n2);
    if r != BigInt::from(0) {
        return Err(Error::NonIntegral {
            op: "cusp_count_bruteforce",
            value: format!("{order}/{n2}"),
        });
    }
    Ok(q * BigInt::from(field.class_number()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(d: i64, n: u32) -> FiniteRing {
        FiniteRing::new(&QuadField::new(d).unwrap(), n).unwrap()
    }

    #[test]
    fn sigma_is_ring_involution() {
        for (d, n) in [(-2, 3), (-7, 3), (-2, 5), (-5, 4), (-7, 9)] {
            let r = ring(d, n);
            for x in r.elements() {
                assert_eq!(r.sigma(r.sigma(x)), x);
                for y in r.elements() {
                    assert_eq!(r.sigma(r.mul(x, y)), r.mul(r.sigma(x), r.sigma(y)));
                    assert_eq!(r.sigma(r.add(x, y)), r.add(r.sigma(x), r.sigma(y)));
                }
            }
        }
    }

    #[test]
    fn involutions_on_small_matrices() {
        let r = ring(-2, 5);
        let id = r.identity();
        assert_eq!(r.sigma_mat(&id), id);
        // ω̄ = −ω, so τ fixes (1, ω; 0, 1)
        let m = Mat2 { a: r.one(), b: r.elem(0, 1), c: r.zero(), d: r.one() };
        assert_eq!(r.tau_mat(&m), m);
        assert_ne!(r.sigma_mat(&m), m);
    }

    #[test]
    fn involutions_square_to_identity_on_sl2() {
        for (d, n) in [(-2, 3), (-7, 3), (-2, 5)] {
            let r = ring(d, n);
            let group = r.sl2_elements();
            assert_eq!(group.len() as u64, r.sl2_order_exhaustive());
            for g in &group {
                for inv in [Involution::Sigma, Involution::Tau] {
                    let h = r.apply(inv, g);
                    assert_eq!(r.det(&h), r.one());
                    assert_eq!(r.apply(inv, &h), *g);
                }
            }
            // σ is a group homomorphism
            for g in group.iter().step_by(7) {
                for h in group.iter().step_by(11) {
                    assert_eq!(r.sigma_mat(&r.mat_mul(g, h)), r.mat_mul(&r.sigma_mat(g), &r.sigma_mat(h)));
                    assert_eq!(r.tau_mat(&r.mat_mul(g, h)), r.mat_mul(&r.tau_mat(g), &r.tau_mat(h)));
                }
            }
        }
    }

    #[test]
    fn sl2_order_examples() {
        assert_eq!(ring(-2, 3).sl2_order_exhaustive(), 576);
        assert_eq!(ring(-7, 3).sl2_order_exhaustive(), 720);
        let r = ring(-2, 2);
        let brute = r.sl2_elements().len() as u64;
        assert_eq!(r.sl2_order_exhaustive(), brute);
        assert_eq!(r.sl2_order_closed().unwrap(), BigInt::from(brute));
        // 2 ramified in Q(√−2): 2⁶(1 − 2⁻²) = 48
        assert_eq!(brute, 48);
    }

    #[test]
    fn sl2_order_exhaustive_agrees_with_closed_formula() {
        for d in [-2, -5, -7, -11, -6, -15] {
            for n in 2..=9 {
                let r = ring(d, n);
                let o = r.sl2_order().unwrap();
                assert_eq!(o.exhaustive_matches(), Some(true), "d={d} N={n}");
            }
        }
        assert_eq!(ring(-2, 10).sl2_order().unwrap().exhaustive, None);
    }

    #[test]
    fn projective_line_sizes() {
        assert_eq!(ring(-7, 3).projective_line().unwrap().len(), 10);
        assert_eq!(ring(-7, 9).projective_line().unwrap().len(), 90);
        // split: P¹(F₃ × F₃) = 4 · 4
        assert_eq!(ring(-2, 3).projective_line().unwrap().len(), 16);
        assert!(ring(-2, 6).projective_line().is_err());
    }

    #[test]
    fn projective_line_of_fixed_subring() {
        // σ-fixed points of P¹(F₉) are P¹(F₃)
        let r = ring(-7, 3);
        let fixed: Vec<_> = r
            .projective_line()
            .unwrap()
            .into_iter()
            .filter(|p| {
                let q = ProjPoint { x: r.sigma(p.x), y: r.sigma(p.y) };
                r.units().any(|u| r.mul(u, q.x) == p.x && r.mul(u, q.y) == p.y)
            })
            .collect();
        assert_eq!(fixed.len(), 4);
    }

    #[test]
    fn unimodular_pairs_count_cosets() {
        for (d, n) in [(-2, 3), (-7, 3), (-2, 5)] {
            let r = ring(d, n);
            let cols = r.unimodular_pairs().len() as u64;
            let order = r.sl2_order_exhaustive();
            assert_eq!(cols * (n as u64).pow(2), order, "d={d} N={n}");
            for &(x, y) in r.unimodular_pairs().iter().step_by(13) {
                assert!(r.is_unimodular(x, y));
            }
        }
    }

    #[test]
    fn sigma_fixed_coset_census() {
        for (d, n, expect) in [(-7, 3, 8), (-7, 9, 72), (-2, 3, 8), (-2, 5, 24), (-2, 9, 72), (-7, 5, 24)] {
            let c = ring(d, n).fixed_coset_count(Involution::Sigma).unwrap();
            assert_eq!(c.census, expect, "d={d} N={n}");
            assert!(c.matches);
        }
    }

    #[test]
    fn tau_census_is_reported_with_formula() {
        let c = ring(-2, 5).fixed_coset_count(Involution::Tau).unwrap();
        assert_eq!(c.formula, 4);
        assert_eq!(c.census, 24);
        assert!(!c.matches);
    }

    #[test]
    fn coset_census_preconditions() {
        assert!(ring(-5, 5).fixed_coset_count(Involution::Sigma).is_err());
        assert!(ring(-7, 4).fixed_coset_count(Involution::Sigma).is_err());
        assert!(ring(-7, 6).fixed_coset_count(Involution::Sigma).is_err());
    }

    #[test]
    fn cusp_count_bruteforce_examples() {
        let f = |d| QuadField::new(d).unwrap();
        assert_eq!(cusp_count_bruteforce(&f(-2), 3).unwrap(), BigInt::from(64));
        assert_eq!(cusp_count_bruteforce(&f(-7), 3).unwrap(), BigInt::from(80));
        assert_eq!(cusp_count_bruteforce(&f(-5), 3).unwrap(), BigInt::from(128));
        assert!(cusp_count_bruteforce(&f(-2), 2).is_err());
    }
}
