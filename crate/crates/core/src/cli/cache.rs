//! Optional on-disk memo of class numbers and `SL₂(O/(N))` orders.
//!
//! Enabled by pointing `BIANCHI_CACHE_DIR` at a directory. Entries are small
//! json files keyed by `(d, N)`.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finitering::FiniteRing;
use crate::quadfield::{reduced_forms, QuadField};

pub const CACHE_ENV: &str = "BIANCHI_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    d: i64,
    #[serde(rename = "N")]
    n: Option<u32>,
    value: String,
}

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env() -> Self {
        Cache {
            dir: std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        }
    }

    pub fn at(dir: impl AsRef<Path>) -> Self {
        Cache {
            dir: Some(dir.as_ref().to_path_buf()),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn memo(&self, name: String, d: i64, n: Option<u32>, compute: impl FnOnce() -> Result<String>) -> Result<String> {
        let Some(dir) = &self.dir else { return compute() };
        let path = dir.join(name);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(e) = serde_json::from_str::<Entry>(&text) {
                if e.d == d && e.n == n {
                    return Ok(e.value);
                }
            }
        }
        let value = compute()?;
        std::fs::create_dir_all(dir)?;
        let entry = Entry { d, n, value: value.clone() };
        std::fs::write(&path, serde_json::to_string(&entry).expect("entry serializes"))?;
        Ok(value)
    }

    /// Number of reduced forms of the field discriminant.
    pub fn class_number(&self, field: &QuadField) -> Result<u64> {
        let d = field.d();
        let v = self.memo(format!("classnumber_d{d}.json"), d, None, || {
            Ok(reduced_forms(field.disc()).len().to_string())
        })?;
        Ok(v.parse().expect("cached class number is an integer"))
    }

    /// `#SL₂(O/(N))`, counted exhaustively when the ring is small enough.
    pub fn sl2_order(&self, field: &QuadField, n: u32) -> Result<BigInt> {
        let d = field.d();
        let v = self.memo(format!("sl2_d{d}_N{n}.json"), d, Some(n), || {
            let order = FiniteRing::new(field, n)?.sl2_order()?;
            Ok(order.exhaustive.map(BigInt::from).unwrap_or(order.closed).to_string())
        })?;
        Ok(v.parse().expect("cached order is an integer"))
    }
}
