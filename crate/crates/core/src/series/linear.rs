use std::collections::BTreeMap;
use std::fmt;

use super::{CapVector, TruncSeries, VarSet};
use crate::rational::int;

/// Integer linear form `sum c_i z_i`, stored sparsely (no zero entries).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: BTreeMap<usize, i64>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(var: usize) -> Self {
        Self::from_pairs([(var, 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Self {
        let mut form = Self::zero();
        for (v, c) in pairs {
            form.add_to(v, c);
        }
        form
    }

    /// `c * z_V` where `z_V` is the sum of the variables in `vars`.
    pub fn sum_over(vars: VarSet, c: i64) -> Self {
        Self::from_pairs(vars.iter().map(|v| (v, c)))
    }

    fn add_to(&mut self, var: usize, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(var).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&var);
        }
    }

    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (&v, &c) in &other.coeffs {
            out.add_to(v, c);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> LinearForm {
        if k == 0 {
            return Self::zero();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(&v, &c)| (v, c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, var: usize) -> i64 {
        self.coeffs.get(&var).copied().unwrap_or(0)
    }

    pub fn support(&self) -> VarSet {
        self.coeffs.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&v, &c)| (v, c))
    }

    /// If the form is `e * z_V` for a single integer `e`, returns `(e, V)`.
    pub fn as_uniform(&self) -> Option<(i64, VarSet)> {
        let mut values = self.coeffs.values();
        let first = *values.next()?;
        values.all(|&c| c == first).then(|| (first, self.support()))
    }

    pub(crate) fn to_series(&self, caps: &CapVector) -> TruncSeries {
        let mut s = TruncSeries::zero(caps);
        for (&v, &c) in &self.coeffs {
            s.add_assign_ref(&TruncSeries::monomial(v, int(c), caps));
        }
        s
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&v, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let sep = if i > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            let space = if i > 0 { " " } else { "" };
            if mag == 1 {
                write!(f, "{sep}{sign}{space}z{}", v + 1)?;
            } else {
                write!(f, "{sep}{sign}{space}{mag}z{}", v + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_form_is_distinguishable() {
        let f = LinearForm::from_pairs([(0, 2), (0, -2)]);
        assert!(f.is_zero());
        assert_eq!(f, LinearForm::zero());
        assert!(!LinearForm::var(1).is_zero());
    }

    #[test]
    fn uniform_detection() {
        let f = LinearForm::sum_over([0usize, 2].into_iter().collect(), 3);
        assert_eq!(f.as_uniform(), Some((3, [0usize, 2].into_iter().collect())));
        assert_eq!(LinearForm::from_pairs([(0, 1), (1, 2)]).as_uniform(), None);
        assert_eq!(LinearForm::zero().as_uniform(), None);
    }

    #[test]
    fn display() {
        assert_eq!(LinearForm::from_pairs([(1, 5), (0, 2)]).to_string(), "2z1 + 5z2");
        assert_eq!(LinearForm::from_pairs([(0, -1), (2, -3)]).to_string(), "-z1 - 3z3");
        assert_eq!(LinearForm::zero().to_string(), "0");
    }
}
