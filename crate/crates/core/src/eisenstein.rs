//! Cusp counts, boundary cohomology and the traces of `σ` and `τ` on
//! Eisenstein cohomology in degrees 0, 1 and 2.
//!
//! The degree-one trace at prime-power level over a class-number-one field is
//! also available numerically through the Sczech operator, see [`sczech`].

pub mod sczech;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{factorize, pow2, rat_int, require_integer, Factorization};
use crate::finitering::{CosetCensus, FiniteRing};
use crate::quadfield::{QuadField, SplittingType};
use crate::Involution;

fn require_level(op: &'static str, n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::pre(op, format!("N must be >= 3, got {n}")));
    }
    Ok(())
}

/// `c(Γ(N)) = h(K)·N⁴·∏_{𝔭|(N)}(1 − N𝔭⁻²)`.
pub fn cusp_count(field: &QuadField, n: u64) -> Result<BigInt> {
    const OP: &str = "cusp_count";
    require_level(OP, n)?;
    let norms = field.prime_ideal_norms_dividing(n as i64)?;
    let value = rat_int(BigInt::from(n).pow(4))
        * rat_int(field.class_number())
        * crate::exactmath::euler_factor(norms);
    require_integer(OP, &value)
}

/// Dimensions of `H^i(∂, E_{k,k})` for the Borel-Serre boundary of `Γ(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDims {
    pub h0: BigInt,
    pub h1: BigInt,
    pub h2: BigInt,
}

pub fn boundary_dims(field: &QuadField, n: u64, _k: u32) -> Result<BoundaryDims> {
    let c = cusp_count(field, n)?;
    Ok(BoundaryDims {
        h1: &c + &c,
        h0: c.clone(),
        h2: c,
    })
}

/// `dim H^i_Eis(Γ(N), E_{k,k}) = c(Γ(N))` for `i = 1, 2` and `k > 0`.
pub fn eis_dim(field: &QuadField, n: u64, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::pre(
            "eis_dim",
            "k must be > 0 (with trivial coefficients the Eisenstein dimensions depend on the degree)",
        ));
    }
    cusp_count(field, n)
}

fn delta0(k: u32) -> BigInt {
    BigInt::from(u8::from(k == 0))
}

/// Factorization of a level admissible for the degree-two traces: `N = 1` or
/// `N ≥ 3` with no ramified prime factor.
fn h2_level(op: &'static str, field: &QuadField, n: u64) -> Result<Factorization> {
    if n == 0 || n == 2 {
        return Err(Error::pre(op, format!("N must be 1 or >= 3, got {n}")));
    }
    let f = factorize(n as i64)?;
    if let Some(p) = f.primes().find(|&p| field.is_ramified(p)) {
        return Err(Error::pre(op, format!("every prime dividing N must be unramified in K; {p} ramifies")));
    }
    Ok(f)
}

fn h2_trace(op: &'static str, field: &QuadField, n: u64, k: u32, inv: Involution) -> Result<BigInt> {
    let f = h2_level(op, field, n)?;
    let prod: BigInt = f
        .factors()
        .iter()
        .map(|&(p, e)| {
            let p = BigInt::from(p);
            match inv {
                Involution::Sigma => p.pow(2 * e) - p.pow(2 * e - 2),
                Involution::Tau => p.pow(2 * e - 1) - p.pow(2 * e - 2),
            }
        })
        .product();
    let g = pow2(field.t() as i64 - 1).to_integer();
    Ok(-g * prod + delta0(k))
}

/// `tr(σ | H²_Eis(Γ(N), E_{k,k})) = −2^{t−1}·∏(p^{2n} − p^{2n−2}) + δ(0, k)`.
pub fn trace_sigma_h2_eis(field: &QuadField, n: u64, k: u32) -> Result<BigInt> {
    h2_trace("trace_sigma_h2_eis", field, n, k, Involution::Sigma)
}

/// `tr(τ | H²_Eis(Γ(N), E_{k,k})) = −2^{t−1}·∏(p^{2n−1} − p^{2n−2}) + δ(0, k)`.
pub fn trace_tau_h2_eis(field: &QuadField, n: u64, k: u32) -> Result<BigInt> {
    h2_trace("trace_tau_h2_eis", field, n, k, Involution::Tau)
}

/// The closed `τ` trace next to the value the coset census would give.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauCensusReport {
    pub d: i64,
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub formula_trace: BigInt,
    /// `−2^{t−1}·census + δ(0, k)`.
    pub census_trace: BigInt,
    pub census: CosetCensus,
    pub matches: bool,
}

/// Compares the `τ` trace at level `pⁿ` with the exhaustive count of
/// `τ`-fixed unipotent cosets. A mismatch is a diagnostic, not an error.
pub fn tau_census_report(field: &QuadField, p: u64, n: u32, k: u32) -> Result<TauCensusReport> {
    let level = p.checked_pow(n).filter(|&l| l <= u32::MAX as u64).ok_or_else(|| {
        Error::pre("tau_census_report", "level too large for the finite-ring census")
    })?;
    let formula_trace = trace_tau_h2_eis(field, level, k)?;
    let census = FiniteRing::new(field, level as u32)?.fixed_coset_count(Involution::Tau)?;
    let g = pow2(field.t() as i64 - 1).to_integer();
    let census_trace = -g * BigInt::from(census.census) + delta0(k);
    Ok(TauCensusReport {
        d: field.d(),
        p,
        n,
        k,
        matches: census_trace == formula_trace,
        formula_trace,
        census_trace,
        census,
    })
}

/// A trace known exactly, or only up to an interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceValue {
    Exact { value: BigInt },
    Interval { lo: BigInt, hi: BigInt },
}

impl TraceValue {
    pub fn exact(value: impl Into<BigInt>) -> Self {
        TraceValue::Exact { value: value.into() }
    }

    /// The symmetric interval `[−c, c]`.
    pub fn symmetric(c: BigInt) -> Self {
        TraceValue::Interval { lo: -c.clone(), hi: c }
    }

    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            TraceValue::Exact { value } => Some(value),
            TraceValue::Interval { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }
}

impl std::fmt::Display for TraceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceValue::Exact { value } => write!(f, "{value}"),
            TraceValue::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// Traces of `σ` on `H⁰`, `H¹_Eis` and `H²_Eis` of `SL₂(O)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelOneTraces {
    pub k: u32,
    pub tr0: TraceValue,
    pub tr1: TraceValue,
    pub tr2: TraceValue,
    pub notes: Vec<String>,
}

pub fn level_one_sigma_traces(field: &QuadField, k: u32) -> LevelOneTraces {
    let h = BigInt::from(field.class_number());
    let g = BigInt::from(field.two_torsion_count());
    if k == 0 {
        LevelOneTraces {
            k,
            tr0: TraceValue::exact(1),
            tr1: TraceValue::exact(-h),
            tr2: TraceValue::exact(1 - g),
            notes: vec![
                "H¹_Eis lies in the −1-eigenspace of conjugation on the boundary (Serre)".into(),
                "σ fixes exactly the 2-torsion ideal classes among the cusps (genus theory)".into(),
            ],
        }
    } else {
        LevelOneTraces {
            k,
            tr0: TraceValue::exact(0),
            tr1: TraceValue::symmetric(h),
            tr2: TraceValue::exact(-g),
            notes: vec![
                "H⁰ vanishes for irreducible nontrivial coefficients".into(),
                "tr¹ unknown exactly; |tr¹| ≤ dim H¹_Eis = h".into(),
            ],
        }
    }
}

/// `tr(σ | H¹_Eis(Γ(pⁿ), C))` for class number one and `p` inert:
/// `−(p² + 1)` for `n = 1`, `−(p^{2n} − p^{2n−2})` for `n > 1`.
pub fn trace_sigma_h1_eis(field: &QuadField, p: u64, n: u32) -> Result<BigInt> {
    const OP: &str = "trace_sigma_h1_eis";
    if field.class_number() != 1 {
        return Err(Error::pre(OP, format!("K must have class number one, h = {}", field.class_number())));
    }
    match field.splitting_type(p)? {
        SplittingType::Inert => {}
        other => return Err(Error::pre(OP, format!("p = {p} must be inert in K, it is {other}"))),
    }
    if n == 0 {
        return Err(Error::pre(OP, "n must be >= 1"));
    }
    let pb = BigInt::from(p);
    Ok(if n == 1 {
        -(&pb * &pb + BigInt::from(1))
    } else {
        -(pb.pow(2 * n) - pb.pow(2 * n - 2))
    })
}
