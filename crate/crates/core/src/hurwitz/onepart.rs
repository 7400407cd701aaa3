use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{HurwitzError, Result};
use crate::fock::insertion_caps;
use crate::partition::Partition;
use crate::rational::{factorial, Rational};
use crate::series::{sigma_ratio_series, sigma_series, LinearForm, TruncSeries, VarSet};

/// Connected `h°((d), nu; k, r, s)` for `k > 0` from the closed product
///
/// `1/(d prod nu) [z^(r+1)..] ς(z_[s])^-1 prod_p ς((d - p k) z_p + k z_[p]) prod_j ς(nu_j z_[s])`,
///
/// where `z_[p] = z_1 + .. + z_p`. The reciprocal is absorbed into one
/// factor of the form `ς(e z_[s])` as the ratio `ς(e z_[s])/ς(z_[s])`.
pub fn one_part_connected_series(d: u32, nu: &Partition, k: i64, r: u32, s: usize) -> Result<Rational> {
    if k <= 0 {
        return Err(HurwitzError::NonPositiveLeak(k));
    }
    let caps = insertion_caps(r, s)?;
    let d = i64::from(d);
    if d != nu.size() + s as i64 * k || d == 0 {
        return Ok(Rational::zero());
    }
    let all = VarSet::range(s);
    let mut product = TruncSeries::one(&caps);
    let mut folded = false;
    let fold = |e: i64, product: &mut TruncSeries| {
        *product = product.mul_ref(&sigma_ratio_series(e, all, &caps));
    };
    for &part in nu.parts() {
        if !folded {
            fold(i64::from(part), &mut product);
            folded = true;
        } else {
            product = product.mul_ref(&sigma_series(&LinearForm::sum_over(all, i64::from(part)), &caps));
        }
    }
    for p in 1..=s {
        // (d - p k) z_p + k z_[p]
        let form = LinearForm::sum_over(VarSet::range(p), k).plus(&LinearForm::from_pairs([(p - 1, d - p as i64 * k)]));
        if !folded && p == s {
            // Empty nu forces d = s k, and the last factor is ς(k z_[s]).
            fold(k, &mut product);
            folded = true;
        } else {
            product = product.mul_ref(&sigma_series(&form, &caps));
        }
    }
    if !folded {
        return Ok(Rational::zero());
    }
    let top = product.coefficient_at(caps.as_slice())?;
    Ok(top / Rational::from_integer(BigInt::from(d) * nu.product()))
}

/// `((m-1)!/2^(m-2)) prod_{p=1}^{m-2} (2d - p k)`, the genus-zero one-part
/// number with `m` parts on the other side (`r = 1`, `s = m - 1`).
pub fn one_part_closed_genus0(d: u32, m: usize, k: i64) -> Result<Rational> {
    if m < 2 {
        return Err(HurwitzError::InvalidArgument(format!(
            "the closed form needs at least 2 parts, got {m}"
        )));
    }
    let mut value = Rational::new(factorial(m as u64 - 1), BigInt::from(2).pow(m as u32 - 2));
    for p in 1..=(m as i64 - 2) {
        value *= Rational::from_integer(BigInt::from(2 * i64::from(d) - p * k));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_anchors() {
        assert_eq!(one_part_closed_genus0(5, 3, 1).unwrap(), int(9));
        assert_eq!(one_part_closed_genus0(7, 4, 1).unwrap(), int(234));
        assert_eq!(one_part_closed_genus0(5, 4, 1).unwrap(), int(108));
        for k in -3..=3 {
            assert_eq!(one_part_closed_genus0(5, 2, k).unwrap(), int(1));
        }
        assert!(one_part_closed_genus0(5, 1, 1).is_err());
    }

    #[test]
    fn product_formula_values() {
        assert_eq!(one_part_connected_series(5, &p(&[1, 1, 1]), 1, 1, 2).unwrap(), int(9));
        assert_eq!(one_part_connected_series(4, &p(&[2, 1]), 1, 1, 1).unwrap(), int(1));
        assert_eq!(one_part_connected_series(7, &p(&[1, 1, 1, 1]), 1, 1, 3).unwrap(), int(234));
    }

    #[test]
    fn product_formula_guards() {
        assert_eq!(
            one_part_connected_series(5, &p(&[1]), 0, 1, 2),
            Err(HurwitzError::NonPositiveLeak(0))
        );
        assert_eq!(one_part_connected_series(6, &p(&[1, 1, 1]), 1, 1, 2).unwrap(), int(0));
    }
}
