//! Lower bounds for cuspidal cohomology.
//!
//! Since `σ` acts on `H¹_cusp` with eigenvalues `±1`,
//! `dim H¹_cusp ≥ ½·|L − tr⁰ + tr¹_Eis − tr²_Eis|`. When `tr¹_Eis` is not known
//! exactly only `|tr¹_Eis| ≤ c(Γ)` is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eisenstein::{cusp_count, trace_sigma_h1_eis, trace_sigma_h2_eis, TraceValue};
use crate::error::{Error, Result};
use crate::exactmath::{euler_phi, pow2, rat_int};
use crate::lefschetz::{lefschetz_level_one, lefschetz_sigma_principal, lefschetz_sigma_prime_power, BracketVariant, Level};
use crate::quadfield::{QuadField, SplittingType};
use crate::Involution;

pub const SOURCE_LEFSCHETZ: &str = "principal-level Lefschetz formula (Rohlfs count)";
pub const SOURCE_LEFSCHETZ_PRIME_POWER: &str = "prime-power Lefschetz formula (Rohlfs count)";
pub const SOURCE_H0_TRIVIAL: &str = "H⁰ with trivial coefficients";
pub const SOURCE_H0_IRREDUCIBLE: &str = "H⁰ vanishes for irreducible coefficients";
pub const SOURCE_H1_SCZECH: &str = "Sczech/Ito cocycle trace";
pub const SOURCE_H1_DIMENSION: &str = "Eisenstein dimension c(Γ) bounds |tr¹|";
pub const SOURCE_H2: &str = "Harder-type H² Eisenstein trace";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Exact,
    WorstCase,
}

impl std::fmt::Display for BoundMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundMode::Exact => "exact",
            BoundMode::WorstCase => "worst_case",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub ingredient: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: i64,
    pub disc: i64,
    pub h: u64,
    pub t: u32,
    pub n: u64,
    pub k: u32,
    pub involution: Involution,
    pub lefschetz: BigInt,
    pub tr0: TraceValue,
    pub tr1_eis: TraceValue,
    pub tr2_eis: TraceValue,
    pub mode: BoundMode,
    pub bound: BigInt,
    pub provenance: Vec<Provenance>,
    pub warnings: Vec<String>,
}

fn prov(ingredient: &str, source: &str) -> Provenance {
    Provenance {
        ingredient: ingredient.into(),
        source: source.into(),
    }
}

/// Inert prime power levels over a class-number-one field, where the
/// degree-one trace is known exactly.
fn exact_h1_level(field: &QuadField, level: &Level) -> Option<(u64, u32)> {
    let (p, n) = level.factorization.as_prime_power()?;
    let inert = field.splitting_type(p).ok()? == SplittingType::Inert;
    (field.class_number() == 1 && inert).then_some((p, n))
}

/// Assembles `dim H¹_cusp(Γ(N), E_{k,k}) ≥ ½|L + tr¹ − tr² − tr⁰|`.
pub fn cusp_lower_bound(field: &QuadField, level: &Level, k: u32, inv: Involution) -> Result<BoundReport> {
    const OP: &str = "cusp_lower_bound";
    if inv == Involution::Tau {
        return Err(Error::pre(OP, "no principal-level Lefschetz formula is available for τ; use sigma"));
    }
    if level.n < 3 {
        return Err(Error::pre(OP, format!("N must be >= 3, got {}", level.n)));
    }
    let mut provenance = vec![prov("L", SOURCE_LEFSCHETZ)];
    let mut warnings = level.warnings.clone();
    let lefschetz = lefschetz_sigma_principal(field, level, k)?;
    if let Some((p, n)) = level.factorization.as_prime_power() {
        if p != 2 && !field.is_ramified(p) {
            let closed = lefschetz_sigma_prime_power(field, p, n, k)?;
            if closed != lefschetz {
                return Err(Error::Conformance {
                    op: OP,
                    text: format!("Lefschetz routes disagree: principal {lefschetz}, prime power {closed}"),
                });
            }
            provenance.push(prov("L", SOURCE_LEFSCHETZ_PRIME_POWER));
        }
    }
    let tr2 = trace_sigma_h2_eis(field, level.n, k)?;
    provenance.push(prov("tr2", SOURCE_H2));
    let tr0 = BigInt::from(u8::from(k == 0));
    provenance.push(prov("tr0", if k == 0 { SOURCE_H0_TRIVIAL } else { SOURCE_H0_IRREDUCIBLE }));
    let rest = &lefschetz - &tr2 - &tr0;

    let exact_h1 = if k == 0 { exact_h1_level(field, level) } else { None };
    let (tr1_eis, mode, bound) = match exact_h1 {
        Some((p, n)) => {
            let tr1 = trace_sigma_h1_eis(field, p, n)?;
            provenance.push(prov("tr1", SOURCE_H1_SCZECH));
            let total = &rest + &tr1;
            if total.is_odd() {
                return Err(Error::Conformance {
                    op: OP,
                    text: format!("L + tr¹ − tr² − tr⁰ = {total} is odd"),
                });
            }
            (TraceValue::exact(tr1), BoundMode::Exact, total.abs() / 2)
        }
        None => {
            let c = cusp_count(field, level.n)?;
            provenance.push(prov("tr1", SOURCE_H1_DIMENSION));
            let slack = rest.abs() - &c;
            let bound = if slack.is_positive() { slack.div_ceil(&BigInt::from(2)) } else { BigInt::zero() };
            warnings.push("tr¹_Eis replaced by the interval [−c, c]; bound is a worst case".into());
            (TraceValue::symmetric(c), BoundMode::WorstCase, bound)
        }
    };
    Ok(BoundReport {
        d: field.d(),
        disc: field.disc(),
        h: field.class_number(),
        t: field.t(),
        n: level.n,
        k,
        involution: inv,
        lefschetz,
        tr0: TraceValue::exact(tr0),
        tr1_eis,
        tr2_eis: TraceValue::exact(tr2),
        mode,
        bound,
        provenance,
        warnings,
    })
}

/// Trace of `σ` on `H¹(GL₂(O), E_{k,k})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2Trace {
    pub d: i64,
    pub k: u32,
    pub variant: BracketVariant,
    pub lefschetz_sigma: BigRational,
    pub lefschetz_tau: BigRational,
    pub value: BigRational,
    pub integral: bool,
    /// Odd weights lie outside the range where the bracket choice has been
    /// adjudicated.
    pub unadjudicated: bool,
}

/// `−¼(L(τ) + L(σ) + 2ᵗ − 4δ(k, 0))`.
pub fn gl2_trace_sigma1(field: &QuadField, k: u32, variant: BracketVariant) -> Gl2Trace {
    let ls = lefschetz_level_one(field, Involution::Sigma, k, variant).value;
    let lt = lefschetz_level_one(field, Involution::Tau, k, variant).value;
    let delta = rat_int(if k == 0 { 4 } else { 0 });
    let value = -(&ls + &lt + pow2(field.t() as i64) - delta) / rat_int(4);
    Gl2Trace {
        d: field.d(),
        k,
        variant,
        integral: value.is_integer(),
        lefschetz_sigma: ls,
        lefschetz_tau: lt,
        value,
        unadjudicated: k % 2 == 1,
    }
}

/// `dim H¹(GL₂(O), E_{k,k}) ≥ |tr(σ¹)|`.
pub fn gl2_lower_bound(field: &QuadField, k: u32, variant: BracketVariant) -> Result<BigInt> {
    let tr = gl2_trace_sigma1(field, k, variant);
    if !tr.integral {
        return Err(Error::NonIntegral {
            op: "gl2_lower_bound",
            value: tr.value.to_string(),
        });
    }
    Ok(tr.value.to_integer().abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// The scanned parameter: `n`, `k` or `d`.
    pub param: i64,
    pub value: BigInt,
    pub reference: BigInt,
    pub ratio: f64,
    pub mode: Option<BoundMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthScan {
    pub kind: String,
    pub rows: Vec<ScanRow>,
    pub min_ratio: f64,
    pub floor: f64,
    pub above_floor: bool,
}

fn ratio(a: &BigInt, b: &BigInt) -> f64 {
    BigRational::new(a.clone(), b.clone()).to_f64().unwrap_or(f64::NAN)
}

fn finish(kind: &str, rows: Vec<ScanRow>, floor: f64) -> GrowthScan {
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    GrowthScan {
        kind: kind.into(),
        above_floor: !rows.is_empty() && min_ratio >= floor,
        rows,
        min_ratio,
        floor,
    }
}

/// Bound at `Γ(pⁿ)` against `p^{3n}` for each `n`.
pub fn scan_level_exponent(field: &QuadField, p: u64, ns: &[u32], k: u32, floor: f64) -> Result<GrowthScan> {
    let mut rows = Vec::new();
    for &n in ns {
        let level = Level::new(field, p.pow(n))?;
        let report = cusp_lower_bound(field, &level, k, Involution::Sigma)?;
        let reference = BigInt::from(p).pow(3 * n);
        rows.push(ScanRow {
            param: n as i64,
            ratio: ratio(&report.bound, &reference),
            value: report.bound,
            reference,
            mode: Some(report.mode),
        });
    }
    Ok(finish("level_exponent", rows, floor))
}

/// `L(σ, Γ(N), E_{k,k})` against `k + 1` for each `k`.
pub fn scan_weight(field: &QuadField, n: u64, ks: &[u32], floor: f64) -> Result<GrowthScan> {
    let level = Level::new(field, n)?;
    let mut rows = Vec::new();
    for &k in ks {
        let l = lefschetz_sigma_principal(field, &level, k)?;
        let reference = BigInt::from(k + 1);
        rows.push(ScanRow {
            param: k as i64,
            ratio: ratio(&l, &reference).abs(),
            value: l,
            reference,
            mode: None,
        });
    }
    Ok(finish("weight", rows, floor))
}

/// `GL₂` bound against `φ(|D|)` over a list of fields.
pub fn scan_discriminant(ds: &[i64], k: u32, variant: BracketVariant) -> Result<GrowthScan> {
    let mut rows = Vec::new();
    for &d in ds {
        let field = QuadField::new(d)?;
        let bound = gl2_lower_bound(&field, k, variant)?;
        let reference = BigInt::from(euler_phi(-field.disc())?);
        rows.push(ScanRow {
            param: d,
            ratio: ratio(&bound, &reference),
            value: bound,
            reference,
            mode: None,
        });
    }
    Ok(finish("discriminant", rows, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    fn bound(d: i64, n: u64, k: u32) -> BoundReport {
        let f = field(d);
        cusp_lower_bound(&f, &Level::new(&f, n).unwrap(), k, Involution::Sigma).unwrap()
    }

    #[test]
    fn exact_examples() {
        for (n, want) in [(5, 12), (25, 1251), (125, 156251)] {
            let r = bound(-2, n, 0);
            assert_eq!(r.mode, BoundMode::Exact);
            assert_eq!(r.bound, BigInt::from(want), "N = {n}");
        }
        let r = bound(-2, 5, 0);
        assert_eq!(r.lefschetz, BigInt::from(-20));
        assert_eq!(r.tr1_eis, TraceValue::exact(-26));
        assert_eq!(r.tr2_eis, TraceValue::exact(-23));
        let sources: Vec<&str> = r.provenance.iter().map(|p| p.source.as_str()).collect();
        for s in [SOURCE_LEFSCHETZ, SOURCE_LEFSCHETZ_PRIME_POWER, SOURCE_H1_SCZECH, SOURCE_H2] {
            assert!(sources.contains(&s), "{s}");
        }
    }

    #[test]
    fn worst_case_example() {
        let r = bound(-7, 3, 2);
        assert_eq!(r.mode, BoundMode::WorstCase);
        assert_eq!(r.bound, BigInt::zero());
        assert_eq!(r.tr1_eis, TraceValue::symmetric(80.into()));
    }

    #[test]
    fn tau_and_small_levels_are_rejected() {
        let f = field(-2);
        let l = Level::new(&f, 5).unwrap();
        assert!(cusp_lower_bound(&f, &l, 0, Involution::Tau).is_err());
        let f = field(-5);
        let l = Level::new(&f, 5).unwrap();
        assert!(cusp_lower_bound(&f, &l, 0, Involution::Sigma).is_err());
    }

    #[test]
    fn worst_case_grows_with_weight() {
        // ½(|−20·41 + 24| − 624)
        let r = bound(-2, 5, 40);
        assert_eq!(r.mode, BoundMode::WorstCase);
        assert_eq!(r.bound, BigInt::from(86));
    }

    #[test]
    fn exact_mode_dominates_worst_case() {
        let f = field(-2);
        for n in [5u64, 25] {
            let level = Level::new(&f, n).unwrap();
            let exact = cusp_lower_bound(&f, &level, 0, Involution::Sigma).unwrap();
            let rest: BigInt = &exact.lefschetz - exact.tr2_eis.as_exact().unwrap() - 1;
            let slack = rest.abs() - cusp_count(&f, n).unwrap();
            let worst = if slack.is_positive() { slack.div_ceil(&BigInt::from(2)) } else { BigInt::zero() };
            assert!(exact.bound >= worst);
        }
    }

    #[test]
    fn gl2_examples() {
        for d in [-2, -5] {
            let t = gl2_trace_sigma1(&field(d), 0, BracketVariant::DEFAULT);
            assert_eq!(t.value, rat_int(0));
            assert_eq!(gl2_lower_bound(&field(d), 0, BracketVariant::DEFAULT).unwrap(), BigInt::zero());
        }
        for k in (0..=24).step_by(2) {
            assert!(gl2_trace_sigma1(&field(-2), k, BracketVariant::DEFAULT).integral, "k = {k}");
        }
        assert!(gl2_trace_sigma1(&field(-2), 1, BracketVariant::DEFAULT).unadjudicated);
    }

    #[test]
    fn level_exponent_scan() {
        let s = scan_level_exponent(&field(-2), 5, &[1, 2, 3], 0, 0.05).unwrap();
        let ratios: Vec<f64> = s.rows.iter().map(|r| r.ratio).collect();
        assert!((ratios[0] - 0.096).abs() < 1e-3);
        assert!((ratios[1] - 0.080).abs() < 1e-3);
        assert!((ratios[2] - 0.080).abs() < 1e-3);
        assert!(s.above_floor);
    }

    #[test]
    fn weight_scan_is_linear() {
        let ks: Vec<u32> = (0..=20).collect();
        let s = scan_weight(&field(-7), 3, &ks, 1.0).unwrap();
        assert!(s.rows.iter().all(|r| &r.value / &r.reference == BigInt::from(-2)));
        assert!(s.rows.iter().all(|r| (&r.value % &r.reference).is_zero()));
    }

    #[test]
    fn discriminant_scan_runs() {
        let ds: Vec<i64> = (-40..=-2)
            .filter(|&d| d != -3 && crate::exactmath::is_square_free(d))
            .collect();
        let s = scan_discriminant(&ds, 2, BracketVariant::DEFAULT).unwrap();
        assert_eq!(s.rows.len(), ds.len());
    }
}
