//! Disconnected numbers assembled from connected blocks.
//!
//! The labelled parts of `mu` and `nu` are split into blocks, each holding
//! at least one part, and the `s` interchangeable insertions are dealt to
//! the blocks by counts. The block containing the first remaining part is
//! chosen first, so each set partition is produced once.

use std::collections::HashMap;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::fock::connected_hurwitz;
use crate::partition::Partition;
use crate::rational::{binomial, Rational};

type ConnectedKey = (Partition, Partition, i64, u32, usize);

fn connected_cache() -> &'static DashMap<ConnectedKey, Rational> {
    static CACHE: OnceLock<DashMap<ConnectedKey, Rational>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// [`connected_hurwitz`] behind a process-wide memo table.
pub fn connected_cached(mu: &Partition, nu: &Partition, k: i64, r: u32, s: usize) -> Result<Rational> {
    let key = (mu.clone(), nu.clone(), k, r, s);
    if let Some(hit) = connected_cache().get(&key) {
        return Ok(hit.clone());
    }
    let value = connected_hurwitz(mu, nu, k, r, s)?;
    connected_cache().insert(key, value.clone());
    Ok(value)
}

/// Multiset as `(value, multiplicity)`, values decreasing.
type Multiset = Vec<(u32, usize)>;

fn to_multiset(p: &Partition) -> Multiset {
    crate::partition::multiplicities(p.parts())
}

fn expand(m: &Multiset) -> Vec<u32> {
    m.iter().flat_map(|&(v, c)| std::iter::repeat_n(v, c)).collect()
}

/// Every sub-multiset of `m` with the number of labelled subsets realising
/// it. With `forced = Some(v)` one specific copy of `v` must be chosen.
fn sub_multisets(m: &Multiset, forced: Option<u32>) -> Vec<(Multiset, Multiset, BigInt)> {
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for &(v, c) in m {
        let must = usize::from(forced == Some(v));
        let mut next = Vec::with_capacity(out.len() * (c + 1));
        for (taken, left, weight) in &out {
            for t in must..=c {
                let ways = binomial((c - must) as u64, (t - must) as u64);
                let mut taken = taken.clone();
                let mut left = left.clone();
                if t > 0 {
                    taken.push((v, t));
                }
                if t < c {
                    left.push((v, c - t));
                }
                next.push((taken, left, weight * ways));
            }
        }
        out = next;
    }
    out
}

fn size_of(m: &Multiset) -> i64 {
    m.iter().map(|&(v, c)| i64::from(v) * c as i64).sum()
}

struct Assembler {
    k: i64,
    r: u32,
    memo: HashMap<(Multiset, Multiset, usize), Rational>,
}

impl Assembler {
    fn total(&mut self, mu: &Multiset, nu: &Multiset, s: usize) -> Result<Rational> {
        if mu.is_empty() && nu.is_empty() {
            return Ok(if s == 0 { Rational::one() } else { Rational::zero() });
        }
        if size_of(mu) != size_of(nu) + s as i64 * self.k {
            return Ok(Rational::zero());
        }
        let key = (mu.clone(), nu.clone(), s);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let (mu_forced, nu_forced) = match mu.first() {
            Some(&(v, _)) => (Some(v), None),
            None => (None, Some(nu[0].0)),
        };
        let mut acc = Rational::zero();
        for (mu_block, mu_rest, mu_ways) in sub_multisets(mu, mu_forced) {
            for (nu_block, nu_rest, nu_ways) in sub_multisets(nu, nu_forced) {
                let imbalance = size_of(&mu_block) - size_of(&nu_block);
                for s_block in 0..=s {
                    if imbalance != s_block as i64 * self.k {
                        continue;
                    }
                    let rest = self.total(&mu_rest, &nu_rest, s - s_block)?;
                    if rest.is_zero() {
                        continue;
                    }
                    let block_mu = Partition::new(expand(&mu_block))?;
                    let block_nu = Partition::new(expand(&nu_block))?;
                    let block = connected_cached(&block_mu, &block_nu, self.k, self.r, s_block)?;
                    if block.is_zero() {
                        continue;
                    }
                    let ways = &mu_ways * &nu_ways * binomial(s as u64, s_block as u64);
                    acc += block * rest * Rational::from_integer(ways);
                }
            }
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

/// Disconnected `h(mu, nu; k, r, s)`.
pub fn disconnected_hurwitz(mu: &Partition, nu: &Partition, k: i64, r: u32, s: usize) -> Result<Rational> {
    crate::fock::insertion_caps(r, s)?;
    let mut assembler = Assembler {
        k,
        r,
        memo: HashMap::new(),
    };
    assembler.total(&to_multiset(mu), &to_multiset(nu), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_multiset_weights_count_labelled_subsets() {
        let m: Multiset = vec![(3, 2), (1, 3)];
        let all = sub_multisets(&m, None);
        let total: BigInt = all.iter().map(|(_, _, w)| w.clone()).sum();
        assert_eq!(total, BigInt::from(32));
        let forced = sub_multisets(&m, Some(3));
        let total: BigInt = forced.iter().map(|(_, _, w)| w.clone()).sum();
        assert_eq!(total, BigInt::from(16));
    }
}
