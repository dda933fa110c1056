//! Tower configuration: TOML schema and validation.
//!
//! ```toml
//! p = 2
//! alpha = 1.0
//! levels = [[1, 1], [1, 2], [1, 4]]   # (e_n, f_n) pairs, absolute vs K_1
//! seed = 42                            # optional
//! enum_cap = 1048576                   # optional, max M(n) for enumeration
//! max_field_level = 4                  # optional, deepest exact-arithmetic level
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerConfig {
    pub p: u64,
    pub alpha: f64,
    /// (e_n, f_n) pairs; the first must be (1, 1).
    pub levels: Vec<(u64, u64)>,
    pub seed: Option<u64>,
    pub enum_cap: Option<u64>,
    pub max_field_level: Option<usize>,
}

impl TowerConfig {
    pub fn new(p: u64, alpha: f64, levels: Vec<(u64, u64)>) -> Self {
        TowerConfig {
            p,
            alpha,
            levels,
            seed: None,
            enum_cap: None,
            max_field_level: None,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Config(format!("p = {} is not prime", self.p)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Config(format!("alpha = {} must be > 0", self.alpha)));
        }
        if self.levels.is_empty() {
            return Err(Error::Config("levels must be nonempty".into()));
        }
        for &(e, f) in &self.levels {
            if e == 0 || f == 0 {
                return Err(Error::Config("level indices must be positive".into()));
            }
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
