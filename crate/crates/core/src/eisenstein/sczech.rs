//! The action of `σ` on the formal span of the Sczech cocycles `Ψ(u, v)`,
//! `(u, v) ∈ ((1/N)O/O)² \ {(0, 0)}`, following Ito's transformation rule.
//!
//! Indices are stored as residues `(a₁, b₁, a₂, b₂)` mod `N` with
//! `u = (a₁ + b₁ω)/N` and `v = (a₂ + b₂ω)/N`. The operator has entries
//! `−1/(N²(N² − 1)) − φ(pairing)/N²` after `Ψ(0, 0)` is eliminated.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::QuadField;

/// Largest admissible matrix dimension `N⁴ − 1`.
pub const MAX_DIMENSION: usize = 10_000;

/// Tolerance of the construction-time periodicity check.
const PERIODICITY_TOL: f64 = 1e-12;

pub const TRACE_TOL: f64 = 1e-8;
pub const INVOLUTION_TOL: f64 = 1e-9;
pub const IMAGINARY_TOL: f64 = 1e-9;

/// Normalization of the additive character and the pairing it is applied to.
///
/// All variants evaluate `φ` at `N` times the pairing of the two index
/// vectors, so that the result depends only on the classes mod `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterVariant {
    /// `φ(z) = exp(2πi(z − z̄)/D)` on `s·v̄ − t·ū`.
    LiteralD,
    /// `φ(z) = exp(2πi(z − z̄)/√D)` on `s·v̄ − t·ū`.
    InverseDifferent,
    /// `φ(z) = exp(2πi(z − z̄)/√D)` on `s·v − t·u`.
    SymplecticInvdiff,
}

impl CharacterVariant {
    pub const ALL: [CharacterVariant; 3] = [
        CharacterVariant::LiteralD,
        CharacterVariant::InverseDifferent,
        CharacterVariant::SymplecticInvdiff,
    ];

    pub const DEFAULT: CharacterVariant = CharacterVariant::SymplecticInvdiff;

    pub fn name(self) -> &'static str {
        match self {
            CharacterVariant::LiteralD => "literal-d",
            CharacterVariant::InverseDifferent => "inverse-different",
            CharacterVariant::SymplecticInvdiff => "symplectic-invdiff",
        }
    }

    fn conjugates_pairing(self) -> bool {
        !matches!(self, CharacterVariant::SymplecticInvdiff)
    }

    /// `φ((a + bω)/N)`, which depends on `b` alone. With `z − z̄ = b·√D/N`
    /// the exponent is `2πi·b/N` under `√D` and the real number
    /// `2π·b/(N·√|D|)` under `D`.
    pub fn phi(self, field: &QuadField, b: i64, n: u32) -> Complex64 {
        match self {
            CharacterVariant::LiteralD => {
                let x = 2.0 * PI * b as f64 / (n as f64 * (-field.disc() as f64).sqrt());
                Complex64::new(x.exp(), 0.0)
            }
            _ => Complex64::from_polar(1.0, 2.0 * PI * b as f64 / n as f64),
        }
    }

    /// Largest deviation of `φ` from 1 at `0`, `1` and `ω`; the first two
    /// share `b = 0`.
    pub fn periodicity_defect(self, field: &QuadField, n: u32) -> f64 {
        [0, n as i64]
            .iter()
            .map(|&b| (self.phi(field, b, n) - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Display for CharacterVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CharacterVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal-d" | "literal_d" | "literal_D" => Ok(CharacterVariant::LiteralD),
            "inverse-different" | "inverse_different" => Ok(CharacterVariant::InverseDifferent),
            "symplectic-invdiff" | "symplectic_invdiff" => Ok(CharacterVariant::SymplecticInvdiff),
            other => Err(Error::pre(
                "character_variant",
                format!("unknown variant '{other}' (expected literal-d, inverse-different or symplectic-invdiff)"),
            )),
        }
    }
}

/// Dense `(N⁴ − 1)²` complex matrix of `σ`, row-major.
#[derive(Debug, Clone)]
pub struct SczechOperator {
    pub d: i64,
    pub n: u32,
    pub variant: CharacterVariant,
    pub indices: Vec<[u32; 4]>,
    entries: Vec<Complex64>,
}

/// `ω`-coefficient mod `N` of `x₁y₂ − x₂y₁` (or with `y` conjugated).
fn pairing(field: &QuadField, x: [u32; 4], y: [u32; 4], conjugate: bool, n: u32) -> i64 {
    let elem = |a: u32, b: u32| (a as i64, b as i64);
    let (x1, x2) = (elem(x[0], x[1]), elem(x[2], x[3]));
    let (mut y1, mut y2) = (elem(y[0], y[1]), elem(y[2], y[3]));
    if conjugate {
        let linear = field.omega().linear;
        y1 = (y1.0 + y1.1 * linear, -y1.1);
        y2 = (y2.0 + y2.1 * linear, -y2.1);
    }
    let p = field.mul(x1, y2);
    let q = field.mul(x2, y1);
    (p.1 - q.1).rem_euclid(n as i64)
}

/// Builds the operator after checking that `φ` is trivial on `O`.
pub fn sczech_operator(field: &QuadField, n: u32, variant: CharacterVariant) -> Result<SczechOperator> {
    const OP: &str = "sczech_operator";
    if n < 2 {
        return Err(Error::pre(OP, format!("N must be >= 2, got {n}")));
    }
    let dim = (n as usize).checked_pow(4).map(|x| x - 1).unwrap_or(usize::MAX);
    if dim > MAX_DIMENSION {
        return Err(Error::pre(OP, format!("N⁴ − 1 = {dim} exceeds the size guard {MAX_DIMENSION}")));
    }
    let defect = variant.periodicity_defect(field, n);
    if defect > PERIODICITY_TOL {
        return Err(Error::pre(
            OP,
            format!("character variant {variant} is not trivial on O (|φ − 1| = {defect:.3e}); it is ill-defined on classes mod O"),
        ));
    }
    let indices: Vec<[u32; 4]> = (1..=dim)
        .map(|mut i| {
            let mut r = [0u32; 4];
            for slot in r.iter_mut().rev() {
                *slot = (i % n as usize) as u32;
                i /= n as usize;
            }
            r
        })
        .collect();
    let n2 = (n as f64).powi(2);
    let constant = -1.0 / (n2 * (n2 - 1.0));
    let mut entries = Vec::with_capacity(dim * dim);
    let conjugate = variant.conjugates_pairing();
    for &row in &indices {
        for &col in &indices {
            let b = pairing(field, row, col, conjugate, n);
            entries.push(constant - variant.phi(field, b, n) / n2);
        }
    }
    Ok(SczechOperator {
        d: field.d(),
        n,
        variant,
        indices,
        entries,
    })
}

impl SczechOperator {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// `‖M² − I‖∞`, the largest absolute row sum.
    pub fn involution_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        let mut row = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            row.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
            for k in 0..n {
                let a = self.entries[i * n + k];
                let rk = &self.entries[k * n..(k + 1) * n];
                for (acc, &b) in row.iter_mut().zip(rk) {
                    *acc += a * b;
                }
            }
            row[i] -= 1.0;
            worst = worst.max(row.iter().map(|x| x.norm()).sum());
        }
        worst
    }

    /// Writes `i j re im` per entry, row-major.
    pub fn write_matrix<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[i * n + j];
                writeln!(w, "{i} {j} {:.16e} {:.16e}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SczechTrace {
    pub re: f64,
    pub im: f64,
    pub expected: f64,
    pub dim: usize,
}

/// Real part of the trace, with the imaginary part kept as a diagnostic.
pub fn sczech_trace(field: &QuadField, n: u32, variant: CharacterVariant) -> Result<SczechTrace> {
    let m = sczech_operator(field, n, variant)?;
    let t = m.trace();
    let n2 = (n as f64).powi(2);
    Ok(SczechTrace {
        re: t.re,
        im: t.im,
        expected: -(n2 + 1.0),
        dim: m.dim(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: u32,
    pub trace_re: f64,
    pub trace_im: f64,
    pub involution_defect: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantCheck {
    pub variant: CharacterVariant,
    pub well_defined: bool,
    pub diagnostic: Option<String>,
    pub levels: Vec<LevelCheck>,
    pub passes_all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SczechAdjudication {
    pub d: i64,
    pub checks: Vec<VariantCheck>,
    pub selected: Option<CharacterVariant>,
}

/// Runs every variant over the given levels and selects the first one that
/// is well defined, involutive and has trace `−(N² + 1)` at all of them.
pub fn adjudicate_variants(field: &QuadField, levels: &[u32]) -> Result<SczechAdjudication> {
    let mut checks = Vec::new();
    for variant in CharacterVariant::ALL {
        let mut check = VariantCheck {
            variant,
            well_defined: true,
            diagnostic: None,
            levels: Vec::new(),
            passes_all: true,
        };
        for &n in levels {
            let m = match sczech_operator(field, n, variant) {
                Ok(m) => m,
                Err(e @ Error::Precondition { .. }) if variant.periodicity_defect(field, n) > PERIODICITY_TOL => {
                    check.well_defined = false;
                    check.diagnostic = Some(e.to_string());
                    check.passes_all = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            let t = m.trace();
            let defect = m.involution_defect();
            let expected = -((n as f64).powi(2) + 1.0);
            let passes = (t.re - expected).abs() < TRACE_TOL && t.im.abs() < IMAGINARY_TOL && defect < INVOLUTION_TOL;
            check.passes_all &= passes;
            check.levels.push(LevelCheck {
                n,
                trace_re: t.re,
                trace_im: t.im,
                involution_defect: defect,
                passes,
            });
        }
        checks.push(check);
    }
    let selected = checks.iter().find(|c| c.passes_all).map(|c| c.variant);
    Ok(SczechAdjudication {
        d: field.d(),
        checks,
        selected,
    })
}
