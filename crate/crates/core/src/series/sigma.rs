//! Expansions of `ς(x) = 2 sinh(x/2)` and of the ratios `ς(e x) / ς(x)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use parking_lot::RwLock;

use super::{invert_unit_series, CapVector, LinearForm, TruncSeries, VarSet};
use crate::rational::{factorial, int, Rational};

/// Coefficients of `S(x) = ς(x)/x = sum x^{2m} / (4^m (2m+1)!)` up to `x^deg`.
pub fn sigma_unit_coefficients(deg: u32) -> Vec<Rational> {
    (0..=deg)
        .map(|j| {
            if j % 2 == 1 {
                return Rational::zero();
            }
            let m = u64::from(j / 2);
            let den = BigInt::from(4u32).pow(m as u32) * factorial(2 * m + 1);
            Rational::new(BigInt::from(1), den)
        })
        .collect()
}

fn sigma_coefficients(deg: u32) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    if deg > 0 {
        out.extend(sigma_unit_coefficients(deg - 1));
    }
    out
}

/// Taylor expansion of `ς(form)`, truncated to `caps`.
pub fn sigma_series(form: &LinearForm, caps: &CapVector) -> TruncSeries {
    if form.is_zero() {
        return TruncSeries::zero(caps);
    }
    let deg = caps.total_over(form.support());
    TruncSeries::compose_univariate(&sigma_coefficients(deg), form, caps)
}

type RatioCache = RwLock<HashMap<(i64, u32), Arc<Vec<Rational>>>>;

fn ratio_cache() -> &'static RatioCache {
    static CACHE: OnceLock<RatioCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Univariate coefficients of `ς(e x)/ς(x) = e S(e x) / S(x)` up to `x^deg`.
fn ratio_coefficients(e: i64, deg: u32) -> Arc<Vec<Rational>> {
    if let Some(hit) = ratio_cache().read().get(&(e, deg)) {
        return hit.clone();
    }
    let caps = CapVector::new(vec![deg]);
    let unit = sigma_unit_coefficients(deg);
    let scaled_unit: Vec<(Vec<u32>, Rational)> = unit
        .iter()
        .enumerate()
        .map(|(j, c)| (vec![j as u32], c * int(e).pow(j as i32)))
        .collect();
    let plain_unit: Vec<(Vec<u32>, Rational)> =
        unit.into_iter().enumerate().map(|(j, c)| (vec![j as u32], c)).collect();
    let numerator = TruncSeries::from_terms(scaled_unit, &caps);
    let denominator = TruncSeries::from_terms(plain_unit, &caps);
    let inverse = invert_unit_series(&denominator).expect("S(x) has constant term 1");
    let ratio = numerator.mul_ref(&inverse).scale(&int(e));
    let coeffs: Vec<Rational> = (0..=deg)
        .map(|j| ratio.coefficient_at(&[j]).expect("within cap"))
        .collect();
    let coeffs = Arc::new(coeffs);
    ratio_cache().write().insert((e, deg), coeffs.clone());
    coeffs
}

/// Power series of `ς(e z_V)/ς(z_V)`, with `z_V` the sum of the variables
/// in `vars`. The quotient is holomorphic at the origin, so no Laurent terms
/// ever appear; `e = 0` gives the zero series.
pub fn sigma_ratio_series(e: i64, vars: VarSet, caps: &CapVector) -> TruncSeries {
    if e == 0 {
        return TruncSeries::zero(caps);
    }
    let deg = caps.total_over(vars);
    let coeffs = ratio_coefficients(e, deg);
    TruncSeries::compose_univariate(&coeffs, &LinearForm::sum_over(vars, 1), caps)
}
