//! The leaky completed-cycles cut-and-join operator on power-sum
//! polynomials, and the check `dG/dβ = Q G` degree by degree in β.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{HurwitzError, Result};
use crate::hurwitz::disconnected_hurwitz;
use crate::partition::{multiplicities, partitions_of, Partition};
use crate::rational::{display, factorial, Rational};
use crate::series::{invert_unit_series, sigma_series, CapVector, LinearForm, TruncSeries};

/// `p_λ = p_{λ_1} ⋯ p_{λ_m}`.
pub type PMonomial = Partition;

/// Finite linear combination of power-sum monomials; zero terms absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PPolynomial {
    terms: BTreeMap<PMonomial, Rational>,
}

impl PPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: PMonomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn add_term(&mut self, m: PMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: &PMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
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

    pub fn iter(&self) -> impl Iterator<Item = (&PMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&mut self, other: &PPolynomial) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl fmt::Display for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let text: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m.parts().iter().map(|p| format!("p{p}")).collect();
                if vars.is_empty() {
                    display(c)
                } else {
                    format!("{}*{}", display(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", text.join(" + "))
    }
}

fn aut(parts: &[u32]) -> BigInt {
    multiplicities(parts).into_iter().map(|(_, c)| factorial(c as u64)).product()
}

/// Coefficient of `p_A ∂_B` in `Q`: `[z^{r+1}] Πς(az) Πς(bz) / ς(z)`
/// over `|Aut A| |Aut B| Π_{a∈A} a`.
pub fn q_weight(a: &[u32], b: &[u32], k: i64, r: u32) -> Result<Rational> {
    let (sa, sb): (i64, i64) = (a.iter().map(|&x| i64::from(x)).sum(), b.iter().map(|&x| i64::from(x)).sum());
    if sa != sb + k {
        return Err(HurwitzError::EnergyMismatch {
            produced: sa,
            expected: sb + k,
        });
    }
    if a.iter().chain(b).any(|&x| x == 0) {
        return Err(HurwitzError::InvalidArgument("parts must be positive".into()));
    }
    let n = a.len() + b.len();
    if n == 0 {
        return Err(HurwitzError::InvalidArgument("Q has no term with A and B both empty".into()));
    }
    if n % 2 != r as usize % 2 || n > r as usize + 2 {
        return Ok(Rational::zero());
    }
    // Πς(cz) = z^n Π c S(cz), then divide by ς(z) = z S(z).
    let caps = CapVector::new(vec![r + 2]);
    let mut product = TruncSeries::one(&caps);
    for &c in a.iter().chain(b) {
        product = product.mul_ref(&sigma_series(&LinearForm::from_pairs([(0, i64::from(c))]), &caps));
    }
    let unit = sigma_series(&LinearForm::var(0), &CapVector::new(vec![r + 3]));
    let unit = TruncSeries::from_terms(
        unit.terms().filter(|(m, _)| m.total_degree() >= 1).map(|(m, c)| (vec![m.total_degree() - 1], c.clone())),
        &caps,
    );
    let quotient = product.mul_ref(&invert_unit_series(&unit)?);
    let top = quotient.coefficient_at(&[r + 2])?;
    let a_prod: BigInt = a.iter().map(|&x| BigInt::from(x)).product();
    Ok(top / Rational::from_integer(aut(a) * aut(b) * a_prod))
}

/// Sub-multisets `B` of `parts` with the deletion count `Π λ_v! / (λ_v - B_v)!`.
fn deletions(parts: &[u32]) -> Vec<(Vec<u32>, Vec<u32>, BigInt)> {
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for (v, c) in multiplicities(parts) {
        let mut next = Vec::new();
        for (taken, kept, weight) in &out {
            for t in 0..=c {
                let mut taken = taken.clone();
                let mut kept = kept.clone();
                taken.extend(std::iter::repeat_n(v, t));
                kept.extend(std::iter::repeat_n(v, c - t));
                let falling = factorial(c as u64) / factorial((c - t) as u64);
                next.push((taken, kept, weight * falling));
            }
        }
        out = next;
    }
    out
}

/// `Q_{k,r+1} f`: each monomial loses a sub-multiset `B` of its parts and
/// gains a multiset `A` with `ΣA = ΣB + k`.
pub fn apply_q(f: &PPolynomial, k: i64, r: u32) -> Result<PPolynomial> {
    let max_factors = r as usize + 2;
    let pieces: Vec<PPolynomial> = f
        .terms
        .par_iter()
        .map(|(lambda, c)| -> Result<PPolynomial> {
            let mut out = PPolynomial::zero();
            for (b, kept, count) in deletions(lambda.parts()) {
                if b.len() > max_factors {
                    continue;
                }
                let target = b.iter().map(|&x| i64::from(x)).sum::<i64>() + k;
                if target < 0 {
                    continue;
                }
                for a in partitions_of(target as u32) {
                    if a.len() + b.len() == 0 || a.len() + b.len() > max_factors {
                        continue;
                    }
                    let w = q_weight(a.parts(), &b, k, r)?;
                    if w.is_zero() {
                        continue;
                    }
                    let mut parts = kept.clone();
                    parts.extend_from_slice(a.parts());
                    let m = Partition::new(parts)?;
                    out.add_term(m, c * w * Rational::from_integer(count.clone()));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut total = PPolynomial::zero();
    for piece in &pieces {
        total.add(piece);
    }
    Ok(total)
}

/// `G_s = Σ_μ h(μ, ν; k, r, s) / |Aut μ| p_μ`, disconnected numbers.
pub fn hurwitz_generating_slice(nu: &Partition, k: i64, r: u32, s: usize) -> Result<PPolynomial> {
    let size = nu.size() + s as i64 * k;
    if size < 0 {
        return Ok(PPolynomial::zero());
    }
    let values: Vec<(Partition, Rational)> = partitions_of(size as u32)
        .into_par_iter()
        .map(|mu| {
            let h = disconnected_hurwitz(&mu, nu, k, r, s)?;
            let h = h / Rational::from_integer(mu.aut_order());
            Ok((mu, h))
        })
        .collect::<Result<_>>()?;
    let mut out = PPolynomial::zero();
    for (mu, h) in values {
        out.add_term(mu, h);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CutJoinMismatch {
    pub monomial: PMonomial,
    /// Coefficient of `G_s`.
    pub expected: Rational,
    /// Coefficient of `Q G_{s-1}`.
    pub actual: Rational,
}

#[derive(Clone, Debug)]
pub struct CutJoinReport {
    pub nu: Partition,
    pub k: i64,
    pub r: u32,
    pub s: usize,
    /// Monomials compared (union of both supports).
    pub compared: usize,
    pub mismatches: Vec<CutJoinMismatch>,
}

impl CutJoinReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for CutJoinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nu={} k={} r={} s={} compared={} mismatches={}",
            self.nu,
            self.k,
            self.r,
            self.s,
            self.compared,
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            write!(f, "\n  p{} expected={} actual={}", m.monomial, display(&m.expected), display(&m.actual))?;
        }
        Ok(())
    }
}

/// Compares `Q G_{s-1}` with `G_s` coefficient by coefficient.
pub fn verify_cut_and_join(nu: &Partition, k: i64, r: u32, s: usize) -> Result<CutJoinReport> {
    if s == 0 {
        return Err(HurwitzError::InvalidArgument("the check needs s >= 1".into()));
    }
    let previous = hurwitz_generating_slice(nu, k, r, s - 1)?;
    let expected = hurwitz_generating_slice(nu, k, r, s)?;
    let actual = apply_q(&previous, k, r)?;
    let mut support: Vec<&PMonomial> = expected.terms.keys().chain(actual.terms.keys()).collect();
    support.sort();
    support.dedup();
    let mismatches = support
        .iter()
        .filter_map(|m| {
            let (e, a) = (expected.coefficient(m), actual.coefficient(m));
            (e != a).then(|| CutJoinMismatch {
                monomial: (*m).clone(),
                expected: e,
                actual: a,
            })
        })
        .collect();
    Ok(CutJoinReport {
        nu: nu.clone(),
        k,
        r,
        s,
        compared: support.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn join_and_cut_weights() {
        // [z^2] ς(2z)ς(z)^2/ς(z) = [z^2] ς(2z)ς(z) = 2, over |Aut B| = 2 and a = 2.
        assert_eq!(q_weight(&[2], &[1, 1], 0, 1).unwrap(), frac(1, 2));
        // Same series, now over |Aut A| = 2 and Πa = 1.
        assert_eq!(q_weight(&[1, 1], &[2], 0, 1).unwrap(), int(1));
        assert_eq!(q_weight(&[1, 1], &[1], 1, 1).unwrap(), frac(1, 2));
    }

    #[test]
    fn weight_constraints() {
        assert!(q_weight(&[1], &[1, 1], 1, 1).is_err());
        assert!(q_weight(&[], &[], 0, 1).is_err());
        // Two factors against r = 1: parity mismatch.
        assert!(q_weight(&[3], &[1], 2, 1).unwrap().is_zero());
        assert!(!q_weight(&[3], &[1], 2, 2).unwrap().is_zero());
    }

    #[test]
    fn pure_creation_from_one() {
        let one = PPolynomial::monomial(Partition::empty(), int(1));
        let out = apply_q(&one, 2, 1).unwrap();
        // [z^2] ς(2z)/ς(z) = 1/4, over a = 2.
        assert_eq!(out.coefficient(&p(&[2])), frac(1, 8));
        // Two factors do not survive at r = 1.
        assert!(out.coefficient(&p(&[1, 1])).is_zero());
    }

    #[test]
    fn join_of_two_ones() {
        let f = PPolynomial::monomial(p(&[1, 1]), int(1));
        let out = apply_q(&f, 0, 1).unwrap();
        // weight 1/2, deletion count 2.
        assert_eq!(out.coefficient(&p(&[2])), int(1));
        assert!(apply_q(&PPolynomial::zero(), 1, 1).unwrap().is_zero());
    }

    #[test]
    fn energy_grading() {
        let mut f = PPolynomial::monomial(p(&[3, 1]), int(2));
        f.add_term(p(&[2, 2]), frac(-1, 3));
        for (m, _) in apply_q(&f, 3, 2).unwrap().iter() {
            assert_eq!(m.size(), 4 + 3);
        }
    }

    #[test]
    fn small_equations_hold() {
        for (nu, k, r) in [(vec![1], 1, 1), (vec![1, 1], 0, 1), (vec![2], 2, 2)] {
            let report = verify_cut_and_join(&p(&nu), k, r, 1).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.compared > 0);
        }
    }
}
