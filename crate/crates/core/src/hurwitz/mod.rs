//! Public entry points for leaky completed-cycles Hurwitz numbers.

mod cache;
mod cmr;
mod disconnected;
mod onepart;

pub use cache::{CacheRecord, HurwitzCache};
pub use cmr::{aut_factor, cmr_leaky_r1, torus_correction, AutNormalization};
pub use disconnected::{connected_cached, disconnected_hurwitz};
pub use onepart::{one_part_closed_genus0, one_part_connected_series};

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{HurwitzError, Result};
use crate::oracle::oracle_disconnected;
use crate::partition::Partition;
use crate::rational::Rational;

/// A single number to compute.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzQuery {
    pub mu: Partition,
    pub nu: Partition,
    pub k: i64,
    pub r: u32,
    pub s: usize,
    pub connected: bool,
}

impl HurwitzQuery {
    pub fn new(mu: Partition, nu: Partition, k: i64, r: u32, s: usize, connected: bool) -> Result<Self> {
        if r == 0 {
            return Err(HurwitzError::InvalidArgument("r must be positive".into()));
        }
        Ok(HurwitzQuery { mu, nu, k, r, s, connected })
    }

    /// `|mu| = |nu| + s k`; unbalanced queries have value 0.
    pub fn is_balanced(&self) -> bool {
        self.mu.size() == self.nu.size() + self.s as i64 * self.k
    }

    pub fn genus(&self) -> Rational {
        genus_of(self.r, self.s, self.mu.len(), self.nu.len())
    }

    /// The same number seen from the other side: `(nu, mu, -k)`.
    pub fn dual(&self) -> HurwitzQuery {
        HurwitzQuery {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            k: -self.k,
            ..self.clone()
        }
    }
}

impl fmt::Display for HurwitzQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h{}[mu={}, nu={}, k={}, r={}, s={}]",
            if self.connected { "°" } else { "" },
            self.mu,
            self.nu,
            self.k,
            self.r,
            self.s
        )
    }
}

/// `(r s + 2 - m - n)/2`, half-integral when the parity is off.
pub fn genus_of(r: u32, s: usize, m: usize, n: usize) -> Rational {
    let twice = i64::from(r) * s as i64 + 2 - m as i64 - n as i64;
    Rational::new(BigInt::from(twice), BigInt::from(2))
}

/// `s = (2g - 2 + m + n)/r` when that is a non-negative integer.
pub fn insertions_for_genus(g: u32, r: u32, m: usize, n: usize) -> Option<usize> {
    let numerator = 2 * i64::from(g) - 2 + m as i64 + n as i64;
    (numerator >= 0 && r > 0 && numerator % i64::from(r) == 0).then(|| (numerator / i64::from(r)) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Engine,
    InclusionExclusion,
    ClosedForm,
    Oracle,
    Cache,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Engine => "engine",
            Method::InclusionExclusion => "inclusion-exclusion",
            Method::ClosedForm => "closed-form",
            Method::Oracle => "oracle",
            Method::Cache => "cache",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzResult {
    pub value: Rational,
    pub query: HurwitzQuery,
    pub method: Method,
    pub millis: u128,
}

/// Connected numbers come from the tree, disconnected ones by assembling
/// connected blocks.
pub fn compute(query: &HurwitzQuery) -> Result<HurwitzResult> {
    let start = Instant::now();
    let (value, method) = if query.connected {
        (
            connected_cached(&query.mu, &query.nu, query.k, query.r, query.s)?,
            Method::Engine,
        )
    } else {
        (
            disconnected_hurwitz(&query.mu, &query.nu, query.k, query.r, query.s)?,
            Method::InclusionExclusion,
        )
    };
    Ok(HurwitzResult {
        value,
        query: query.clone(),
        method,
        millis: start.elapsed().as_millis(),
    })
}

/// Disconnected value from explicit fermion states.
pub fn compute_with_oracle(query: &HurwitzQuery) -> Result<HurwitzResult> {
    if query.connected {
        return Err(HurwitzError::InvalidArgument(
            "the state-space evaluation yields disconnected numbers only".into(),
        ));
    }
    let start = Instant::now();
    let value = oracle_disconnected(&query.mu, &query.nu, query.k, query.r, query.s)?;
    Ok(HurwitzResult {
        value,
        query: query.clone(),
        method: Method::Oracle,
        millis: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn genus_bookkeeping() {
        assert_eq!(genus_of(1, 2, 1, 3), int(0));
        assert_eq!(genus_of(2, 2, 1, 1), int(2));
        assert_eq!(genus_of(1, 1, 1, 1), frac(1, 2));
        assert_eq!(insertions_for_genus(0, 1, 1, 3), Some(2));
        assert_eq!(insertions_for_genus(1, 2, 1, 2), None);
    }
}
