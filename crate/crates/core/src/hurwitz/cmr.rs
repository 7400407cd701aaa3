//! Numbers with the torus-corrected insertion
//! `M_{-k} = [z^2] E_{-k}(z) - ((k^2 - 1)/24) alpha_{-k}`.
//!
//! The `M`'s commute with each other but the two summands do not, so the
//! expansion runs over the subset `R` of insertion slots that take the
//! `alpha_{-k}` term. A slot in `R` keeps its operator `E_{-k}(z_p)` but is
//! read at `z_p^0`, where it equals `alpha_{-k}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{connected_vev_series, disconnected_vev_series, insertion_caps, OpSequence};
use crate::partition::Partition;
use crate::rational::{frac, Rational};
use crate::series::CapVector;

/// Automorphism convention for the corrected numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutNormalization {
    /// Same prefactor `1/(prod mu prod nu)` as the completed numbers.
    Raw,
    /// Additionally divided by `|Aut mu| |Aut nu|`.
    Cmr,
}

/// `(k^2 - 1)/24`.
pub fn torus_correction(k: i64) -> Rational {
    frac(k * k - 1, 24)
}

/// `r = 1` number with every insertion replaced by `M_{-k}`.
pub fn cmr_leaky_r1(
    mu: &Partition,
    nu: &Partition,
    k: i64,
    s: usize,
    connected: bool,
    normalization: AutNormalization,
) -> Result<Rational> {
    insertion_caps(1, s)?;
    if mu.size() != nu.size() + s as i64 * k {
        return Ok(Rational::zero());
    }
    let ops = OpSequence::hurwitz(mu, nu, k, s);
    let weight = -torus_correction(k);
    // alpha_0 vanishes on the charge-zero sector.
    let subsets: u32 = if k == 0 || weight.is_zero() { 1 } else { 1 << s };
    let mut total = Rational::zero();
    for replaced in 0..subsets {
        let caps = CapVector::new((0..s).map(|p| if replaced >> p & 1 == 1 { 0 } else { 2 }).collect());
        let series = if connected {
            connected_vev_series(&ops, &caps)
        } else {
            disconnected_vev_series(&ops, &caps)
        };
        let top = series.coefficient_at(caps.as_slice())?;
        if top.is_zero() {
            continue;
        }
        let mut term = top;
        for _ in 0..replaced.count_ones() {
            term *= &weight;
        }
        total += term;
    }
    let mut denominator = mu.product() * nu.product();
    if normalization == AutNormalization::Cmr {
        denominator *= mu.aut_order() * nu.aut_order();
    }
    Ok(total / Rational::from_integer(denominator))
}

/// Factor relating the two conventions: `raw = factor * cmr`.
pub fn aut_factor(mu: &Partition, nu: &Partition) -> BigInt {
    mu.aut_order() * nu.aut_order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{connected_cached, disconnected_hurwitz};
    use crate::oracle::{vacuum_expectation, FockOperator};
    use crate::rational::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn correction_coefficients() {
        assert_eq!(torus_correction(3), frac(1, 3));
        assert_eq!(torus_correction(1), int(0));
        assert_eq!(torus_correction(-1), int(0));
    }

    #[test]
    fn unit_leak_matches_completed_numbers() {
        for (mu, nu, k, s) in [(p(&[3, 1]), p(&[1, 1]), 1, 2), (p(&[2]), p(&[2, 2]), -1, 2), (p(&[4]), p(&[2, 1]), 1, 1)] {
            let raw = cmr_leaky_r1(&mu, &nu, k, s, false, AutNormalization::Raw).unwrap();
            assert_eq!(raw, disconnected_hurwitz(&mu, &nu, k, 1, s).unwrap());
            let cmr = cmr_leaky_r1(&mu, &nu, k, s, true, AutNormalization::Cmr).unwrap();
            let completed = connected_cached(&mu, &nu, k, 1, s).unwrap();
            assert_eq!(cmr * Rational::from_integer(aut_factor(&mu, &nu)), completed);
        }
    }

    /// Expands every `M_{-k}` by hand on explicit fermion states.
    fn oracle_cmr(mu: &Partition, nu: &Partition, k: i64, s: usize) -> Rational {
        let c = torus_correction(k);
        let mut total = Rational::zero();
        for replaced in 0..(1u32 << s) {
            let mut ops: Vec<FockOperator> = mu.parts().iter().map(|&x| FockOperator::Alpha(i64::from(x))).collect();
            for slot in 0..s {
                ops.push(if replaced >> slot & 1 == 1 {
                    FockOperator::Alpha(-k)
                } else {
                    FockOperator::InsertionCoeff { leak: k, power: 2 }
                });
            }
            ops.extend(nu.parts().iter().map(|&x| FockOperator::Alpha(-i64::from(x))));
            let mut term = vacuum_expectation(&ops, 40).unwrap();
            for _ in 0..replaced.count_ones() {
                term *= -&c;
            }
            total += term;
        }
        total / Rational::from_integer(mu.product() * nu.product())
    }

    #[test]
    fn correction_matches_state_space_expansion() {
        for (mu, nu, k, s) in [(p(&[5]), p(&[1, 1]), 3, 1), (p(&[4, 3]), p(&[1]), 3, 2), (p(&[2]), p(&[2, 2, 2]), -2, 2), (p(&[6, 1]), p(&[1]), 2, 3)] {
            let engine = cmr_leaky_r1(&mu, &nu, k, s, false, AutNormalization::Raw).unwrap();
            assert_eq!(engine, oracle_cmr(&mu, &nu, k, s), "mu={mu} nu={nu} k={k} s={s}");
        }
    }
}
