//! Brute-force evaluation of vacuum expectations on explicit fermion states.
//!
//! States of the charge-zero sector are stored as occupation bitmasks over a
//! window of half-integer slots `±1/2, ±3/2, .., ±(B - 1/2)`; every slot below
//! the window is occupied and every slot above it is empty. Half-integers are
//! carried doubled, so slot `x` is the odd integer `2x`.
//!
//! Nothing here shares code with the commutation engine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{HurwitzError, Result};
use crate::partition::Partition;
use crate::rational::{factorial, Rational};

/// Largest supported window: `2B` slots must fit the mask.
pub const MAX_BOUND: i64 = 64;

/// A basis vector of the charge-zero sector inside a window of bound `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FermionState {
    occupied: u128,
    bound: i64,
}

fn half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

impl FermionState {
    pub fn vacuum(bound: i64) -> Result<Self> {
        if !(1..=MAX_BOUND).contains(&bound) {
            return Err(HurwitzError::WindowOverflow {
                slot: format!("window of {bound} slots per side"),
                bound: MAX_BOUND,
            });
        }
        Ok(FermionState {
            occupied: (1u128 << bound) - 1,
            bound,
        })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Mask index of a doubled half-integer, if inside the window.
    fn index(&self, doubled: i64) -> Option<u32> {
        debug_assert!(doubled % 2 != 0);
        let idx = (doubled + 2 * self.bound - 1) / 2;
        (0..2 * self.bound).contains(&idx).then_some(idx as u32)
    }

    /// Occupation of any slot, including the implicit regions.
    pub fn is_occupied(&self, doubled: i64) -> bool {
        match self.index(doubled) {
            Some(i) => self.occupied >> i & 1 == 1,
            None => doubled < 0,
        }
    }

    /// Occupied positive slots (doubled), increasing.
    pub fn particles(&self) -> Vec<i64> {
        self.slots().filter(|&d| d > 0 && self.is_occupied(d)).collect()
    }

    /// Empty negative slots (doubled), increasing.
    pub fn holes(&self) -> Vec<i64> {
        self.slots().filter(|&d| d < 0 && !self.is_occupied(d)).collect()
    }

    fn slots(&self) -> impl DoubleEndedIterator<Item = i64> {
        let b = self.bound;
        (0..2 * b).map(move |i| 2 * i - 2 * b + 1)
    }

    /// Size of the corresponding partition.
    pub fn energy(&self) -> i64 {
        let up: i64 = self.particles().iter().sum();
        let down: i64 = self.holes().iter().map(|h| -h).sum();
        (up + down) / 2
    }

    /// The partition `lambda` with `v_lambda` equal to this state.
    pub fn partition(&self) -> Partition {
        // lambda_i = s_i + i - 1/2 over the occupied slots s_1 > s_2 > ..
        let occupied: Vec<i64> = self.slots().rev().filter(|&d| self.is_occupied(d)).collect();
        let parts: Vec<u32> = occupied
            .iter()
            .enumerate()
            .map(|(i, &d)| (d + 2 * i as i64 + 1) / 2)
            .take_while(|&p| p > 0)
            .map(|p| p as u32)
            .collect();
        Partition::new(parts).expect("positive parts")
    }

    fn toggled(&self, doubled: i64) -> FermionState {
        let i = self.index(doubled).expect("inside window");
        FermionState {
            occupied: self.occupied ^ (1u128 << i),
            bound: self.bound,
        }
    }

    fn occupied_between(&self, a: i64, b: i64) -> u32 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (Some(lo), Some(hi)) = (self.index(lo), self.index(hi)) else {
            unreachable!("both endpoints inside window")
        };
        if hi <= lo + 1 {
            return 0;
        }
        let width = hi - lo - 1;
        let mask = ((1u128 << width) - 1) << (lo + 1);
        (self.occupied & mask).count_ones()
    }

    fn overflow(&self, doubled: i64) -> HurwitzError {
        HurwitzError::WindowOverflow {
            slot: half(doubled),
            bound: self.bound,
        }
    }
}

impl fmt::Display for FermionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.partition())
    }
}

/// Finite linear combination of basis states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateCombination {
    terms: BTreeMap<FermionState, Rational>,
}

impl StateCombination {
    pub fn basis(state: FermionState) -> Self {
        let mut out = Self::default();
        out.add(state, Rational::one());
        out
    }

    pub fn vacuum(bound: i64) -> Result<Self> {
        Ok(Self::basis(FermionState::vacuum(bound)?))
    }

    pub fn add(&mut self, state: FermionState, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(state).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&state);
        }
    }

    pub fn add_combination(&mut self, other: &StateCombination, c: &Rational) {
        for (state, v) in &other.terms {
            self.add(*state, v * c);
        }
    }

    pub fn coefficient(&self, state: &FermionState) -> Rational {
        self.terms.get(state).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vacuum_coefficient(&self, bound: i64) -> Result<Rational> {
        Ok(self.coefficient(&FermionState::vacuum(bound)?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FermionState, &Rational)> {
        self.terms.iter()
    }
}

/// `E_{i,j}` on a basis state, with `i, j` given doubled.
///
/// Off the diagonal this moves the fermion at `j` to `i`, with sign
/// `(-1)^(occupied slots strictly between)`. On the diagonal it acts by
/// `[j occupied] - [j < 0]`, which kills the vacuum.
pub fn apply_e(state: &FermionState, i: i64, j: i64) -> Result<StateCombination> {
    for slot in [i, j] {
        if slot % 2 == 0 {
            return Err(HurwitzError::InvalidArgument(format!("{} is not a half-integer", half(slot))));
        }
        if state.index(slot).is_none() {
            return Err(state.overflow(slot));
        }
    }
    let mut out = StateCombination::default();
    if i == j {
        let value = i64::from(state.is_occupied(j)) - i64::from(j < 0);
        out.add(*state, Rational::from_integer(BigInt::from(value)));
        return Ok(out);
    }
    if let Some((moved, sign)) = hop(state, i, j) {
        out.add(moved, Rational::from_integer(BigInt::from(sign)));
    }
    Ok(out)
}

/// Off-diagonal `E_{i,j}` with both slots inside the window.
fn hop(state: &FermionState, i: i64, j: i64) -> Option<(FermionState, i64)> {
    if !state.is_occupied(j) || state.is_occupied(i) {
        return None;
    }
    let sign = if state.occupied_between(i, j).is_multiple_of(2) { 1 } else { -1 };
    Some((state.toggled(j).toggled(i), sign))
}

/// `sum_w c(w) E_{w - shift, w}` with `shift != 0`; `c` takes doubled `w`.
fn apply_shift<F>(x: &StateCombination, shift: i64, weight: F) -> Result<StateCombination>
where
    F: Fn(i64) -> Rational,
{
    debug_assert!(shift != 0);
    let mut out = StateCombination::default();
    let Some((first, _)) = x.iter().next() else {
        return Ok(out);
    };
    let b = first.bound;
    // Weights depend on the source slot only.
    let weights: Vec<Rational> = first.slots().map(&weight).collect();
    let below: Vec<(i64, bool)> = (1..=shift.abs())
        .map(|m| {
            let source = -(2 * b - 1) - 2 * m;
            (source, !weight(source).is_zero())
        })
        .collect();
    for (state, coeff) in x.iter() {
        // Sources below the window are occupied; any that land on an empty
        // slot inside it cannot be represented.
        for &(source, live) in &below {
            let target = source - 2 * shift;
            if live && state.index(target).is_some() && !state.is_occupied(target) {
                return Err(state.overflow(source));
            }
        }
        for (source, w) in state.slots().zip(&weights) {
            if !state.is_occupied(source) {
                continue;
            }
            let target = source - 2 * shift;
            if state.index(target).is_none() {
                if target > 0 && !w.is_zero() {
                    return Err(state.overflow(target));
                }
                continue;
            }
            if w.is_zero() {
                continue;
            }
            if let Some((moved, sign)) = hop(state, target, source) {
                let c = w * coeff;
                out.add(moved, if sign > 0 { c } else { -c });
            }
        }
    }
    Ok(out)
}

/// `alpha_n = sum_k E_{k-n,k}` for `n != 0`.
pub fn apply_alpha(x: &StateCombination, n: i64) -> Result<StateCombination> {
    if n == 0 {
        return Err(HurwitzError::InvalidArgument("alpha_0 is not used".into()));
    }
    apply_shift(x, n, |_| Rational::one())
}

fn power_over_factorial(value: &Rational, j: u32) -> Rational {
    let mut p = Rational::one();
    for _ in 0..j {
        p *= value;
    }
    p / Rational::from_integer(factorial(u64::from(j)))
}

/// `[z^j] E_{-k}(z) = sum_w (w + k/2)^j / j! E_{w+k,w}`. For `k = 0` the tilde
/// operator `sum_w w^j / j! E_{w,w}` is applied instead.
pub fn apply_insertion_coeff(x: &StateCombination, k: i64, j: u32) -> Result<StateCombination> {
    if k == 0 {
        let mut out = StateCombination::default();
        for (state, coeff) in x.iter() {
            let mut eigen = Rational::zero();
            for w in state.slots() {
                let occupation = i64::from(state.is_occupied(w)) - i64::from(w < 0);
                if occupation != 0 {
                    let wr = Rational::new(BigInt::from(w), BigInt::from(2));
                    eigen += power_over_factorial(&wr, j) * BigInt::from(occupation);
                }
            }
            out.add(*state, eigen * coeff);
        }
        return Ok(out);
    }
    apply_shift(x, -k, |w| {
        let wr = Rational::new(BigInt::from(w + k), BigInt::from(2));
        power_over_factorial(&wr, j)
    })
}

/// Operators understood by [`vacuum_expectation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockOperator {
    Alpha(i64),
    /// `[z^power] E_{-leak}(z)`, tilde when `leak = 0`.
    InsertionCoeff { leak: i64, power: u32 },
}

/// `<0| O_1 .. O_N |0>`, applying the operators right to left.
pub fn vacuum_expectation(ops: &[FockOperator], bound: i64) -> Result<Rational> {
    let mut x = StateCombination::vacuum(bound)?;
    for op in ops.iter().rev() {
        x = match *op {
            FockOperator::Alpha(n) => apply_alpha(&x, n)?,
            FockOperator::InsertionCoeff { leak, power } => apply_insertion_coeff(&x, leak, power)?,
        };
        if x.is_zero() {
            return Ok(Rational::zero());
        }
    }
    x.vacuum_coefficient(bound)
}

/// Window large enough for every intermediate state of a Hurwitz VEV.
pub fn hurwitz_window(nu: &Partition, k: i64, r: u32, s: usize) -> i64 {
    nu.size() + s as i64 * (k.abs() + i64::from(r) + 2) + 2
}

/// Disconnected `h(mu, nu; k, r, s)` on explicit states.
pub fn oracle_disconnected(mu: &Partition, nu: &Partition, k: i64, r: u32, s: usize) -> Result<Rational> {
    if mu.size() != nu.size() + s as i64 * k {
        return Ok(Rational::zero());
    }
    let mut ops: Vec<FockOperator> = mu.parts().iter().map(|&p| FockOperator::Alpha(i64::from(p))).collect();
    ops.extend((0..s).map(|_| FockOperator::InsertionCoeff { leak: k, power: r + 1 }));
    ops.extend(nu.parts().iter().map(|&p| FockOperator::Alpha(-i64::from(p))));
    let vev = vacuum_expectation(&ops, hurwitz_window(nu, k, r, s))?;
    Ok(vev / Rational::from_integer(mu.product() * nu.product()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vacuum() -> FermionState {
        FermionState::vacuum(6).unwrap()
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_kills_vacuum() {
        for d in [-11, -3, -1, 1, 5, 11] {
            assert!(apply_e(&vacuum(), d, d).unwrap().is_zero());
        }
    }

    #[test]
    fn single_box() {
        let out = apply_e(&vacuum(), 1, -1).unwrap();
        let (state, c) = out.iter().next().unwrap();
        assert_eq!(state.partition(), p(&[1]));
        assert_eq!(*c, int(1));
        assert_eq!(state.particles(), vec![1]);
        assert_eq!(state.holes(), vec![-1]);
        assert!(apply_e(&vacuum(), -1, 1).unwrap().is_zero());
    }

    #[test]
    fn window_overflow_is_reported() {
        assert!(matches!(apply_e(&vacuum(), 13, -1), Err(HurwitzError::WindowOverflow { .. })));
        let x = StateCombination::vacuum(2).unwrap();
        assert!(matches!(apply_alpha(&x, -5), Err(HurwitzError::WindowOverflow { .. })));
    }

    #[test]
    fn alpha_creation_and_annihilation() {
        let vac = StateCombination::vacuum(6).unwrap();
        let one = apply_alpha(&vac, -1).unwrap();
        assert_eq!(one, apply_e(&vacuum(), 1, -1).unwrap());
        let back = apply_alpha(&one, 1).unwrap();
        assert_eq!(back.vacuum_coefficient(6).unwrap(), int(1));
        assert!(apply_alpha(&vac, 2).unwrap().is_zero());
    }

    #[test]
    fn alpha_minus_two_gives_hook_difference() {
        // alpha_{-2}|0> = v_(2) - v_(1,1)
        let x = apply_alpha(&StateCombination::vacuum(6).unwrap(), -2).unwrap();
        let by_shape: BTreeMap<Partition, Rational> = x.iter().map(|(s, c)| (s.partition(), c.clone())).collect();
        assert_eq!(by_shape.get(&p(&[2])), Some(&int(1)));
        assert_eq!(by_shape.get(&p(&[1, 1])), Some(&int(-1)));
        assert_eq!(by_shape.len(), 2);
    }

    #[test]
    fn tilde_insertion_kills_vacuum() {
        let vac = StateCombination::vacuum(6).unwrap();
        for j in 0..4 {
            assert!(apply_insertion_coeff(&vac, 0, j).unwrap().is_zero());
        }
    }

    #[test]
    fn leading_insertion_coefficient_is_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let mut x = StateCombination::vacuum(10).unwrap();
            for _ in 0..rng.gen_range(1..4) {
                x = apply_alpha(&x, -rng.gen_range(1..3)).unwrap();
            }
            assert_eq!(apply_insertion_coeff(&x, 1, 0).unwrap(), apply_alpha(&x, -1).unwrap());
        }
    }

    #[test]
    fn insertion_on_single_box() {
        // [z^2] E_{-1} on v_(1): the moves 1/2 -> 3/2 and -3/2 -> -1/2 land on
        // v_(2) and v_(1,1), weights (1/2 + 1/2)^2/2 and (-3/2 + 1/2)^2/2.
        let x = apply_alpha(&StateCombination::vacuum(6).unwrap(), -1).unwrap();
        let y = apply_insertion_coeff(&x, 1, 2).unwrap();
        let by_shape: BTreeMap<Partition, Rational> = y.iter().map(|(s, c)| (s.partition(), c.clone())).collect();
        assert_eq!(by_shape.get(&p(&[2])), Some(&frac(1, 2)));
        assert_eq!(by_shape.get(&p(&[1, 1])), Some(&frac(1, 2)));
        assert_eq!(y.vacuum_coefficient(6).unwrap(), int(0));
    }

    #[test]
    fn alpha_commutators_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut x = StateCombination::vacuum(12).unwrap();
            for _ in 0..rng.gen_range(0..3) {
                x = apply_alpha(&x, -rng.gen_range(1..3)).unwrap();
            }
            let a = rng.gen_range(1..4);
            for b in [-a, -a - 1, a] {
                let ab = apply_alpha(&apply_alpha(&x, b).unwrap(), a).unwrap();
                let ba = apply_alpha(&apply_alpha(&x, a).unwrap(), b).unwrap();
                let mut diff = ab.clone();
                diff.add_combination(&ba, &int(-1));
                let mut expected = StateCombination::default();
                if a + b == 0 {
                    expected.add_combination(&x, &int(a));
                }
                assert_eq!(diff, expected);
            }
        }
    }

    #[test]
    fn operators_shift_energy() {
        let mut x = StateCombination::vacuum(12).unwrap();
        x = apply_alpha(&x, -3).unwrap();
        for (state, _) in apply_insertion_coeff(&x, 2, 3).unwrap().iter() {
            assert_eq!(state.energy(), 5);
        }
        for (state, _) in apply_insertion_coeff(&x, -1, 2).unwrap().iter() {
            assert_eq!(state.energy(), 2);
        }
        for (state, _) in apply_alpha(&x, -2).unwrap().iter() {
            assert_eq!(state.energy(), 5);
        }
    }

    #[test]
    fn oracle_values() {
        assert_eq!(oracle_disconnected(&p(&[1]), &p(&[1]), 0, 1, 0).unwrap(), int(1));
        assert_eq!(oracle_disconnected(&p(&[5]), &p(&[1, 1, 1]), 1, 1, 2).unwrap(), int(9));
        assert_eq!(oracle_disconnected(&p(&[3]), &p(&[3]), 1, 1, 1).unwrap(), int(0));
    }

    #[test]
    fn oracle_single_insertion_vev() {
        // <alpha_5 [z^2]E_{-1} alpha_{-2} alpha_{-2}> = 20
        let ops = [
            FockOperator::Alpha(5),
            FockOperator::InsertionCoeff { leak: 1, power: 2 },
            FockOperator::Alpha(-2),
            FockOperator::Alpha(-2),
        ];
        assert_eq!(vacuum_expectation(&ops, 12).unwrap(), int(20));
    }
}
