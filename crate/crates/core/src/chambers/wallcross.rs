use num_traits::Zero;

use super::{LatticePoint, Wall};
use crate::error::{HurwitzError, Result};
use crate::fock::{disconnected_vev_series, insertion_caps, EOpLabel, OpSequence};
use crate::partition::Partition;
use crate::rational::{binomial, int, Rational};
use crate::series::{invert_unit_series, sigma_ratio_series, CapVector, TruncSeries, VarSet};

/// One slot of a VEV shape: `alpha_e`, or `E_{-k}(z_var)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeItem {
    Alpha(i64),
    Insertion(usize),
}

/// Full (disconnected) VEV of the operators in `shape`, insertions carrying
/// energy `-k` (tilde variant when `k = 0`).
pub fn disconnected_series(shape: &[ShapeItem], k: i64, caps: &CapVector) -> TruncSeries {
    if shape.is_empty() {
        return TruncSeries::one(caps);
    }
    let labels = shape
        .iter()
        .map(|item| match *item {
            ShapeItem::Alpha(e) => EOpLabel::alpha(e),
            ShapeItem::Insertion(var) => EOpLabel::insertion(-k, var, k == 0),
        })
        .collect();
    disconnected_vev_series(&OpSequence::new(labels), caps)
}

/// `S(z_V)/S(d z_V)` with `S(x) = ς(x)/x`.
fn reduced_ratio(d: i64, vars: VarSet, caps: &CapVector) -> Result<TruncSeries> {
    if vars.is_empty() {
        return Ok(TruncSeries::one(caps));
    }
    // ς(d x)/ς(x) = d S(dx)/S(x).
    let direct = sigma_ratio_series(d, vars, caps).scale(&int(d).recip());
    invert_unit_series(&direct)
}

fn pick(parts: &[i64], set: u32, inside: bool) -> Vec<i64> {
    parts
        .iter()
        .enumerate()
        .filter(|(i, _)| (set >> i & 1 == 1) == inside)
        .map(|(_, &x)| x)
        .collect()
}

fn subsets_of_size(s: usize, t: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << s).filter(move |m| m.count_ones() as usize == t)
}

/// Difference `h|c1 - h|c2` of the polynomials on the two sides of `wall`,
/// `c1` being the side with `delta > 0`, evaluated at `p` from the product
/// of two smaller VEVs, each carrying an extra part `delta`.
///
/// The series for the VEVs are polynomial in the chamber of `p`, so `p`
/// should sit next to the wall on the side where the value is wanted.
pub fn wall_crossing_series(wall: &Wall, p: &LatticePoint, r: u32, s: usize) -> Result<Rational> {
    let delta = wall.delta(p);
    if delta == 0 {
        return Err(HurwitzError::ZeroDelta);
    }
    if wall.t > s {
        return Ok(Rational::zero());
    }
    let caps = insertion_caps(r, s)?;
    let all = VarSet::range(s);
    let outer = sigma_ratio_series(delta, all, &caps);
    let (mu_in, mu_out) = (pick(&p.mu, wall.i_set, true), pick(&p.mu, wall.i_set, false));
    let (nu_in, nu_out) = (pick(&p.nu, wall.j_set, true), pick(&p.nu, wall.j_set, false));
    let norm: Rational = p.mu.iter().chain(&p.nu).map(|&x| int(x)).product::<Rational>() * int(delta * delta);

    let mut total = TruncSeries::zero(&caps);
    for k_set in subsets_of_size(s, wall.t) {
        let inside = VarSet::from_bits(k_set);
        let outside = VarSet::from_bits(all.bits() & !k_set);
        // <alpha_{mu_I} E(z_K) alpha_{-nu_J} alpha_{-delta}>
        let mut left: Vec<ShapeItem> = mu_in.iter().map(|&x| ShapeItem::Alpha(x)).collect();
        left.extend(inside.iter().map(ShapeItem::Insertion));
        left.extend(nu_in.iter().map(|&x| ShapeItem::Alpha(-x)));
        left.push(ShapeItem::Alpha(-delta));
        // <alpha_delta alpha_{mu_I^c} E(z_K^c) alpha_{-nu_J^c}>
        let mut right = vec![ShapeItem::Alpha(delta)];
        right.extend(mu_out.iter().map(|&x| ShapeItem::Alpha(x)));
        right.extend(outside.iter().map(ShapeItem::Insertion));
        right.extend(nu_out.iter().map(|&x| ShapeItem::Alpha(-x)));

        let h_left = disconnected_series(&left, p.k, &caps);
        if h_left.is_zero() {
            continue;
        }
        let h_right = disconnected_series(&right, p.k, &caps);
        if h_right.is_zero() {
            continue;
        }
        let term = reduced_ratio(delta, inside, &caps)?
            .mul_ref(&reduced_ratio(delta, outside, &caps)?)
            .mul_ref(&outer)
            .mul_ref(&h_left)
            .mul_ref(&h_right);
        total.add_assign_ref(&term);
    }
    Ok(total.coefficient_at(caps.as_slice())? / norm)
}

/// Genus-zero form: `C(m+n-2, |I|+|J|-1) * delta * h°(mu_I, nu_J + delta)
/// * h°(mu_{I^c} + delta, nu_{J^c})`, with `|I|+|J|-1` and
/// `|I^c|+|J^c|-1` insertions. Requires `r = 1`, `s = m + n - 2`.
pub fn wall_crossing_genus0(wall: &Wall, p: &LatticePoint) -> Result<Rational> {
    let (m, n) = (p.m(), p.n());
    if m + n < 2 {
        return Err(HurwitzError::InvalidArgument("genus zero needs m + n >= 2".into()));
    }
    let delta = wall.delta(p);
    if delta == 0 {
        return Ok(Rational::zero());
    }
    let (mu_in, mu_out) = (pick(&p.mu, wall.i_set, true), pick(&p.mu, wall.i_set, false));
    let (nu_in, nu_out) = (pick(&p.nu, wall.j_set, true), pick(&p.nu, wall.j_set, false));
    let s_left = (mu_in.len() + nu_in.len()).checked_sub(1);
    let s_right = (mu_out.len() + nu_out.len()).checked_sub(1);
    let (Some(s_left), Some(s_right)) = (s_left, s_right) else {
        return Ok(Rational::zero());
    };
    // An extra part delta of the wrong sign has no Hurwitz number.
    if delta < 0 {
        return Err(HurwitzError::InvalidArgument(format!(
            "genus-zero wall crossing needs delta > 0, got {delta}"
        )));
    }
    let to_partition = |parts: Vec<i64>| Partition::new(parts.into_iter().map(|x| x as u32).collect());
    let mut nu_left = nu_in.clone();
    nu_left.push(delta);
    let mut mu_right = mu_out.clone();
    mu_right.push(delta);
    let left = crate::hurwitz::connected_cached(&to_partition(mu_in)?, &to_partition(nu_left)?, p.k, 1, s_left)?;
    if left.is_zero() {
        return Ok(left);
    }
    let right = crate::hurwitz::connected_cached(&to_partition(mu_right)?, &to_partition(nu_out)?, p.k, 1, s_right)?;
    let choose = binomial((m + n - 2) as u64, s_left as u64);
    Ok(Rational::from_integer(choose) * int(delta) * left * right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_shape_is_one() {
        let caps = CapVector::uniform(2, 2);
        assert_eq!(disconnected_series(&[], 1, &caps), TruncSeries::one(&caps));
    }

    #[test]
    fn unbalanced_shape_vanishes() {
        let caps = CapVector::uniform(1, 2);
        let shape = [ShapeItem::Alpha(3), ShapeItem::Insertion(0), ShapeItem::Alpha(-1)];
        assert!(disconnected_series(&shape, 1, &caps).is_zero());
    }

    #[test]
    fn shape_matches_hurwitz_number() {
        // d = nu_1 + nu_2 + k with one insertion.
        let caps = CapVector::uniform(1, 2);
        let shape = [
            ShapeItem::Alpha(6),
            ShapeItem::Insertion(0),
            ShapeItem::Alpha(-3),
            ShapeItem::Alpha(-2),
        ];
        let series = disconnected_series(&shape, 1, &caps);
        let mu = Partition::new(vec![6]).unwrap();
        let nu = Partition::new(vec![3, 2]).unwrap();
        let h = crate::hurwitz::disconnected_hurwitz(&mu, &nu, 1, 1, 1).unwrap();
        assert_eq!(series.coefficient_at(&[2]).unwrap(), h * int(36));
        assert!(!series.coefficient_at(&[2]).unwrap().is_zero());
    }

    #[test]
    fn delta_zero_rejected() {
        let p = LatticePoint::new(vec![4, 3], vec![3, 2], 2).unwrap();
        let w = Wall::new(&[1], &[1], 1);
        assert!(matches!(wall_crossing_series(&w, &p, 1, 2), Err(HurwitzError::ZeroDelta)));
        assert!(wall_crossing_genus0(&w, &p).unwrap().is_zero());
    }

    #[test]
    fn oversized_t_is_empty() {
        let p = LatticePoint::new(vec![5, 2], vec![3, 2], 2).unwrap();
        let w = Wall { t: 3, ..Wall::new(&[1], &[1], 0) };
        assert!(wall_crossing_series(&w, &p, 1, 2).unwrap().is_zero());
    }
}
