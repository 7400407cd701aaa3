use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{display, int, Rational};

/// Exact polynomial in `mu_1..mu_m, nu_1..nu_n`, with `k` eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberPoly {
    pub m: usize,
    pub n: usize,
    /// Degree bound `(r+1)s + 1 - m - n`; negative means the zero polynomial.
    pub degree_bound: i64,
    /// Exponent vector (length `m + n`) to coefficient; zero terms omitted.
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

/// Exponent vectors of total degree at most `deg` in `vars` variables,
/// ordered by degree.
pub fn monomials_up_to(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=deg {
        let mut current = vec![0u32; vars];
        homogeneous(0, d, &mut current, &mut out);
    }
    out
}

fn homogeneous(pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= current.len() {
        if let Some(last) = current.last_mut() {
            *last = left;
            out.push(current.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        homogeneous(pos + 1, left - e, current, out);
    }
    current[pos] = 0;
}

pub fn monomial_value(exps: &[u32], coords: &[i64]) -> Rational {
    let mut acc = num_bigint::BigInt::one();
    for (&e, &x) in exps.iter().zip(coords) {
        acc *= num_bigint::BigInt::from(x).pow(e);
    }
    Rational::from_integer(acc)
}

impl ChamberPoly {
    pub fn zero(m: usize, n: usize, degree_bound: i64) -> Self {
        ChamberPoly {
            m,
            n,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at coordinates `(mu.., nu..)`.
    pub fn eval(&self, coords: &[i64]) -> Rational {
        assert_eq!(coords.len(), self.m + self.n, "coordinate count");
        self.terms
            .iter()
            .map(|(exps, c)| c * monomial_value(exps, coords))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Total degrees of the nonzero homogeneous components.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|e| e.iter().sum()).collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.degrees().into_iter().next_back()
    }

    /// Homogeneous components only in degrees `D, D-2, D-4, ..`.
    pub fn is_parity_gapped(&self) -> bool {
        self.degrees()
            .iter()
            .all(|&d| i64::from(d) <= self.degree_bound && (self.degree_bound - i64::from(d)) % 2 == 0)
    }

    pub fn sub(&self, other: &ChamberPoly) -> ChamberPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry -= c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        ChamberPoly { terms, ..self.clone() }
    }

    fn var_name(&self, i: usize) -> String {
        if i < self.m {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - self.m + 1)
        }
    }
}

/// Monomials in `x_i` (parts of mu) and `y_j` (parts of nu), highest degree first.
impl fmt::Display for ChamberPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<u32>(), (*e).clone())));
        for (idx, (exps, c)) in ordered.into_iter().enumerate() {
            let negative = c < &Rational::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.var_name(i) } else { format!("{}^{e}", self.var_name(i)) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", display(&magnitude))?;
            } else if magnitude == int(1) {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", display(&magnitude), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn monomial_counts() {
        // C(deg + vars, vars)
        assert_eq!(monomials_up_to(3, 4).len(), 35);
        assert_eq!(monomials_up_to(2, 5).len(), 21);
        assert_eq!(monomials_up_to(4, 0), vec![vec![0; 4]]);
    }

    #[test]
    fn eval_and_display() {
        let mut p = ChamberPoly::zero(1, 1, 3);
        p.terms.insert(vec![2, 1], frac(1, 2));
        p.terms.insert(vec![0, 1], int(-3));
        assert_eq!(p.eval(&[2, 5]), int(10 - 15));
        assert_eq!(p.to_string(), "1/2*x1^2*y1 - 3*y1");
        assert!(p.is_parity_gapped());
        p.terms.insert(vec![0, 0], int(1));
        assert!(!p.is_parity_gapped());
    }
}
