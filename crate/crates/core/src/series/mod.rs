//! Truncated multivariate power series with exact rational coefficients.
//!
//! A [`TruncSeries`] lives in a fixed number of formal variables `z_1..z_s`,
//! each carrying its own cap: any monomial whose exponent in some `z_i`
//! exceeds `caps[i]` is discarded. The quotient by that monomial ideal is a
//! ring, so sums and products commute with truncation and every result is
//! exact up to the caps.
//!
//! Invariants:
//! - no stored monomial exceeds the caps
//! - zero coefficients are never stored

mod linear;
mod sigma;

pub use linear::LinearForm;
pub use sigma::{sigma_ratio_series, sigma_series, sigma_unit_coefficients};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{HurwitzError, Result};
use crate::rational::{display, int, Rational};

/// Maximum number of formal variables a series may carry.
pub const MAX_VARS: usize = 8;
/// Maximum per-variable cap. Keeps packed exponent sums free of carries.
pub const MAX_CAP: u32 = 127;

/// Per-variable truncation degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CapVector(Vec<u32>);

impl CapVector {
    pub fn new(caps: Vec<u32>) -> Self {
        assert!(caps.len() <= MAX_VARS, "at most {MAX_VARS} formal variables");
        assert!(caps.iter().all(|&c| c <= MAX_CAP), "caps are limited to {MAX_CAP}");
        CapVector(caps)
    }

    pub fn uniform(vars: usize, cap: u32) -> Self {
        Self::new(vec![cap; vars])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Sum of caps over the variables in `vars`.
    pub fn total_over(&self, vars: VarSet) -> u32 {
        vars.iter().map(|v| self.0[v]).sum()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn all_vars(&self) -> VarSet {
        VarSet::range(self.len())
    }
}

/// A set of variable indices, stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn singleton(var: usize) -> Self {
        VarSet(1 << var)
    }

    /// `{0, 1, .., n-1}`.
    pub fn range(n: usize) -> Self {
        if n >= 32 {
            VarSet(u32::MAX)
        } else {
            VarSet((1u32 << n) - 1)
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, var: usize) -> bool {
        self.0 & (1 << var) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersects(self, other: VarSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VarSet(iter.into_iter().fold(0, |acc, v| acc | (1 << v)))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|v| format!("z{}", v + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Exponent vector packed eight bits per variable, `z_1` in the low byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let packed = exps.iter().enumerate().fold(0u64, |acc, (i, &e)| {
            assert!(e <= MAX_CAP, "exponent {e} exceeds {MAX_CAP}");
            acc | (u64::from(e) << (8 * i))
        });
        Monomial(packed)
    }

    pub fn var(var: usize, exp: u32) -> Self {
        assert!(var < MAX_VARS && exp <= MAX_CAP);
        Monomial(u64::from(exp) << (8 * var))
    }

    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> (8 * var)) & 0xff) as u32
    }

    pub fn exponents(self, vars: usize) -> Vec<u32> {
        (0..vars).map(|v| self.exponent(v)).collect()
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|v| self.exponent(v)).sum()
    }

    /// Product of monomials. Callers keep both factors within caps, so no
    /// byte carries into its neighbour.
    fn times(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    fn fits(self, caps: &CapVector) -> bool {
        let n = caps.len();
        if n < MAX_VARS && self.0 >> (8 * n) != 0 {
            return false;
        }
        caps.as_slice()
            .iter()
            .enumerate()
            .all(|(v, &cap)| self.exponent(v) <= cap)
    }
}

/// Truncated multivariate power series over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    caps: CapVector,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncSeries {
    pub fn zero(caps: &CapVector) -> Self {
        TruncSeries {
            caps: caps.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational, caps: &CapVector) -> Self {
        let mut s = Self::zero(caps);
        s.insert(Monomial::ONE, c);
        s
    }

    pub fn one(caps: &CapVector) -> Self {
        Self::constant(Rational::one(), caps)
    }

    /// The series `c * z_var`, or zero when the cap of `z_var` is 0.
    pub fn monomial(var: usize, c: Rational, caps: &CapVector) -> Self {
        let mut s = Self::zero(caps);
        if caps.get(var) >= 1 {
            s.insert(Monomial::var(var, 1), c);
        }
        s
    }

    /// Builds a series from raw terms, dropping anything beyond the caps.
    pub fn from_terms<I>(terms: I, caps: &CapVector) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut s = Self::zero(caps);
        for (exps, c) in terms {
            assert_eq!(exps.len(), caps.len());
            if exps.iter().zip(caps.as_slice()).all(|(e, c)| e <= c) {
                s.add_term(Monomial::from_exponents(&exps), c);
            }
        }
        s
    }

    pub fn caps(&self) -> &CapVector {
        &self.caps
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(Monomial::ONE)
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `z^exponents`. Asking for a monomial the caps have
    /// truncated away is an error, since that data no longer exists.
    pub fn coefficient_at(&self, exponents: &[u32]) -> Result<Rational> {
        if exponents.len() != self.caps.len() {
            return Err(HurwitzError::ArityMismatch {
                expected: self.caps.len(),
                got: exponents.len(),
            });
        }
        for (var, (&exponent, &cap)) in exponents.iter().zip(self.caps.as_slice()).enumerate() {
            if exponent > cap {
                return Err(HurwitzError::BeyondCap { var: var + 1, exponent, cap });
            }
        }
        Ok(self.coefficient(Monomial::from_exponents(exponents)))
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if !c.is_zero() && m.fits(&self.caps) {
            self.terms.insert(m, c);
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn assert_same_caps(&self, other: &TruncSeries) {
        assert_eq!(self.caps, other.caps, "series with different caps");
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        if c.is_zero() {
            return Self::zero(&self.caps);
        }
        TruncSeries {
            caps: self.caps.clone(),
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &TruncSeries) {
        self.assert_same_caps(other);
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn mul_ref(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_same_caps(other);
        let mut out = Self::zero(&self.caps);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.times(*mb);
                if m.fits(&self.caps) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Sets every variable outside `keep` to zero.
    pub fn restrict_to(&self, keep: VarSet) -> TruncSeries {
        let drop: Vec<usize> = (0..self.caps.len()).filter(|v| !keep.contains(*v)).collect();
        TruncSeries {
            caps: self.caps.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| drop.iter().all(|&v| m.exponent(v) == 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// True when every stored monomial has total degree of the given parity.
    pub fn has_parity(&self, odd: bool) -> bool {
        self.terms.keys().all(|m| (m.total_degree() % 2 == 1) == odd)
    }

    /// Substitutes the linear form into a univariate power series given by
    /// its coefficients `c_0, c_1, ..`, truncating to `caps`.
    pub fn compose_univariate(coeffs: &[Rational], form: &LinearForm, caps: &CapVector) -> TruncSeries {
        let line = form.to_series(caps);
        // Horner: c_0 + L (c_1 + L (c_2 + ...)).
        let mut acc = TruncSeries::zero(caps);
        for c in coeffs.iter().rev() {
            acc = acc.mul_ref(&line);
            acc.add_term(Monomial::ONE, c.clone());
        }
        acc
    }
}

/// Inverse of a series with nonzero constant term, up to caps.
pub fn invert_unit_series(u: &TruncSeries) -> Result<TruncSeries> {
    let c0 = u.constant_term();
    if c0.is_zero() {
        return Err(HurwitzError::NonUnit);
    }
    let caps = u.caps().clone();
    let inv_c0 = c0.recip();
    // u = c0 (1 + w) with w in the maximal ideal; 1/(1+w) = sum (-w)^j and
    // w^j vanishes once j exceeds the total cap.
    let mut w = u.scale(&inv_c0);
    w.terms.remove(&Monomial::ONE);
    let minus_w = -w;
    let mut v = TruncSeries::one(&caps);
    for _ in 0..caps.total() {
        let mut next = minus_w.mul_ref(&v);
        next.add_term(Monomial::ONE, Rational::one());
        if next == v {
            break;
        }
        v = next;
    }
    Ok(v.scale(&inv_c0))
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs.clone());
        out
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.mul_ref(rhs)
    }
}

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scale(&int(-1))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", display(c))?;
            for v in 0..self.caps.len() {
                match m.exponent(v) {
                    0 => {}
                    1 => write!(f, "*z{}", v + 1)?,
                    e => write!(f, "*z{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn caps1(c: u32) -> CapVector {
        CapVector::new(vec![c])
    }

    #[test]
    fn coefficient_reads_and_errors() {
        let caps = caps1(3);
        let s = TruncSeries::from_terms([(vec![1], int(1)), (vec![3], frac(1, 24))], &caps);
        assert_eq!(s.coefficient_at(&[3]).unwrap(), frac(1, 24));
        assert_eq!(s.coefficient_at(&[2]).unwrap(), int(0));
        assert_eq!(TruncSeries::zero(&caps).coefficient_at(&[1]).unwrap(), int(0));

        let short = TruncSeries::zero(&caps1(2));
        assert_eq!(
            short.coefficient_at(&[3]),
            Err(HurwitzError::BeyondCap { var: 1, exponent: 3, cap: 2 })
        );
        assert!(matches!(
            short.coefficient_at(&[1, 1]),
            Err(HurwitzError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn products_close_over_caps() {
        let caps = CapVector::new(vec![2, 1]);
        let a = TruncSeries::from_terms([(vec![1, 0], int(1)), (vec![0, 1], int(1))], &caps);
        let sq = a.mul_ref(&a);
        // (z1 + z2)^2 = z1^2 + 2 z1 z2, z2^2 is cut.
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.coefficient_at(&[1, 1]).unwrap(), int(2));
        assert_eq!(sq.coefficient_at(&[2, 0]).unwrap(), int(1));
        let cube = sq.mul_ref(&a);
        assert_eq!(cube.coefficient_at(&[2, 1]).unwrap(), int(3));
        assert_eq!(cube.len(), 1);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let caps = caps1(2);
        let a = TruncSeries::from_terms([(vec![1], int(2))], &caps);
        let b = TruncSeries::from_terms([(vec![1], int(-2))], &caps);
        assert!((&a + &b).is_zero());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn invert_identity() {
        let caps = caps1(4);
        assert_eq!(invert_unit_series(&TruncSeries::one(&caps)).unwrap(), TruncSeries::one(&caps));
    }

    #[test]
    fn invert_one_plus_z2_over_24() {
        // Expected values from the geometric series 1/(1+x) = 1 - x + x^2,
        // x = z^2/24, checked by multiplying back below.
        let caps = caps1(4);
        let u = TruncSeries::from_terms([(vec![0], int(1)), (vec![2], frac(1, 24))], &caps);
        let v = invert_unit_series(&u).unwrap();
        let expected = TruncSeries::from_terms(
            [(vec![0], int(1)), (vec![2], frac(-1, 24)), (vec![4], frac(1, 576))],
            &caps,
        );
        assert_eq!(v, expected);
        assert_eq!(u.mul_ref(&v), TruncSeries::one(&caps));
    }

    #[test]
    fn invert_rejects_non_units() {
        let caps = caps1(3);
        let u = TruncSeries::from_terms([(vec![1], int(1)), (vec![3], frac(1, 24))], &caps);
        assert_eq!(invert_unit_series(&u), Err(HurwitzError::NonUnit));
    }

    #[test]
    fn invert_multivariate_mixed_caps() {
        let caps = CapVector::new(vec![3, 1, 0]);
        let u = TruncSeries::from_terms(
            [
                (vec![0, 0, 0], int(3)),
                (vec![1, 0, 0], int(1)),
                (vec![1, 1, 0], frac(-2, 5)),
                (vec![2, 1, 0], int(7)),
            ],
            &caps,
        );
        let v = invert_unit_series(&u).unwrap();
        assert_eq!(u.mul_ref(&v), TruncSeries::one(&caps));
    }

    #[test]
    fn varset_basics() {
        let s: VarSet = [0usize, 2].into_iter().collect();
        assert_eq!(s.len(), 2);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(s.to_string(), "{z1,z3}");
        assert_eq!(VarSet::range(3).bits(), 0b111);
        assert!(s.intersects(VarSet::singleton(0)));
    }
}
