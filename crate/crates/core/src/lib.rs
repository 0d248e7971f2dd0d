//! Exact arithmetic for the cohomology of Bianchi groups.
//!
//! The crate evaluates Lefschetz numbers of the complex conjugation `σ` and
//! its twist `τ` on `SL₂(O)` and its principal congruence subgroups `Γ(N)`,
//! the traces of these involutions on Eisenstein cohomology, and the lower
//! bounds for cuspidal cohomology that follow. Every closed formula is paired
//! with a brute-force oracle over the finite rings `O/(N)`.
//!
//! Module map:
//! - [`exactmath`]: factorization, residue symbols, the 2-adic Hilbert symbol
//! - [`quadfield`]: invariants of `Q(√d)`
//! - [`finitering`]: `O/(N)`, `SL₂(O/(N))`, projective lines, coset censuses
//! - [`lefschetz`]: Lefschetz number formulas
//! - [`eisenstein`]: cusp counts, Eisenstein traces, the Sczech operator
//! - [`bounds`]: cuspidal lower bounds and growth scans
//! - [`cli`]: command-line surface

pub mod bounds;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod exactmath;
pub mod finitering;
pub mod lefschetz;
pub mod quadfield;

pub use error::{Error, Result};

/// The two involutions studied throughout: complex conjugation and its
/// twist by conjugation with `diag(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Involution {
    Sigma,
    Tau,
}

impl Involution {
    pub fn name(self) -> &'static str {
        match self {
            Involution::Sigma => "sigma",
            Involution::Tau => "tau",
        }
    }
}

impl std::fmt::Display for Involution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Involution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(Involution::Sigma),
            "tau" => Ok(Involution::Tau),
            other => Err(Error::pre("involution", format!("unknown involution '{other}' (expected sigma or tau)"))),
        }
    }
}
