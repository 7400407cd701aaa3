//! Operator labels, the commutation tree, and connected Hurwitz numbers.

mod disconnected;
mod dot;
mod engine;
mod label;

pub use disconnected::disconnected_vev_series;
pub use dot::tree_to_dot;
pub use engine::{connected_vev_series, enumerate_paths, OpSequence, PathAccumulator, PathCensus};
pub use label::{commutator, Commutator, EOpLabel, EdgeWeight, Origin};

use crate::error::{HurwitzError, Result};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::series::{CapVector, MAX_CAP, MAX_VARS};

/// Caps `(r+1, .., r+1)` for `s` insertions, checked against series limits.
pub fn insertion_caps(r: u32, s: usize) -> Result<CapVector> {
    if s > MAX_VARS {
        return Err(HurwitzError::InvalidArgument(format!(
            "{s} insertions exceed the supported {MAX_VARS}"
        )));
    }
    if r == 0 || r + 1 > MAX_CAP {
        return Err(HurwitzError::InvalidArgument(format!("r = {r} is outside 1..={}", MAX_CAP - 1)));
    }
    Ok(CapVector::uniform(s, r + 1))
}

/// Connected number `h°(mu, nu; k, r, s)` straight from the commutation tree.
pub fn connected_hurwitz(mu: &Partition, nu: &Partition, k: i64, r: u32, s: usize) -> Result<Rational> {
    let caps = insertion_caps(r, s)?;
    if mu.size() != nu.size() + s as i64 * k || mu.len() + nu.len() == 0 {
        return Ok(Rational::default());
    }
    let odd_degree = (r as usize * s + mu.len() + nu.len()) % 2 == 1;
    if odd_degree || r as usize * s + 2 < mu.len() + nu.len() {
        return Ok(Rational::default());
    }
    let ops = OpSequence::hurwitz(mu, nu, k, s);
    let series = connected_vev_series(&ops, &caps);
    let top = series.coefficient_at(caps.as_slice())?;
    Ok(top / Rational::from_integer(mu.product() * nu.product()))
}
