//! Budgets and shared run configuration.

use thiserror::Error;

/// Size limits for chain-space construction. The binding quantity for bar
/// complexes is `dim X * (dim A)^N`.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum admissible top chain dimension.
    pub max_chain_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_chain_dim: 2_000_000,
        }
    }
}

#[derive(Debug, Error, Clone)]
#[error("budget exceeded building {what}: requires {required} > budget {budget}")]
pub struct BudgetExceeded {
    pub what: String,
    pub required: usize,
    pub budget: usize,
}

impl Budget {
    pub fn check(&self, what: &str, required: Option<usize>) -> Result<(), BudgetExceeded> {
        match required {
            Some(r) if r <= self.max_chain_dim => Ok(()),
            Some(r) => Err(BudgetExceeded {
                what: what.to_string(),
                required: r,
                budget: self.max_chain_dim,
            }),
            None => Err(BudgetExceeded {
                what: what.to_string(),
                required: usize::MAX,
                budget: self.max_chain_dim,
            }),
        }
    }
}

/// `dim_x * dim_a^n`, `None` on overflow.
pub fn chain_dim(dim_x: usize, dim_a: usize, n: usize) -> Option<usize> {
    let mut acc = dim_x;
    for _ in 0..n {
        acc = acc.checked_mul(dim_a)?;
    }
    Some(acc)
}

/// Shared run configuration for pipeline commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// truncation degree N (homology exact for k <= N-1)
    pub degree: usize,
    pub cap_nilpotency: usize,
    pub cap_pd: usize,
    pub field_override: Option<crate::scalar::Field>,
    pub budget: Budget,
    /// chain-dimension limit above which reports skip the bar-level
    /// sequence verification (the tables still come from resolutions)
    pub jz_bar_limit: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            degree: 6,
            cap_nilpotency: 8,
            cap_pd: 8,
            field_override: None,
            budget: Budget::default(),
            jz_bar_limit: 200_000,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.degree < 2 {
            return Err("degree must be at least 2".into());
        }
        if self.cap_nilpotency < 1 || self.cap_pd < 1 {
            return Err("caps must be at least 1".into());
        }
        Ok(())
    }
}
