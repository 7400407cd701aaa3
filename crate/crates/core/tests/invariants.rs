use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use proptest::prelude::*;

use leaky_hurwitz::chambers::{
    arrangement, fit_chamber_polynomial, sign_vector, wall_crossing_genus0, wall_crossing_series, LatticePoint,
};
use leaky_hurwitz::fock::connected_hurwitz;
use leaky_hurwitz::hurwitz::{connected_cached, disconnected_hurwitz, one_part_closed_genus0, one_part_connected_series};
use leaky_hurwitz::oracle::oracle_disconnected;
use leaky_hurwitz::{Partition, Rational};

fn part(v: Vec<u32>) -> Partition {
    Partition::new(v).unwrap()
}

/// `(mu, nu, k, s)` with `|mu| = |nu| + s k`; the last part of `mu` absorbs
/// the balance.
fn balanced(max_len: usize, max_part: u32, max_s: usize, max_k: i64) -> impl Strategy<Value = (Partition, Partition, i64, usize)> {
    (
        prop::collection::vec(1..=max_part, 0..max_len),
        prop::collection::vec(1..=max_part, 1..=max_len),
        -max_k..=max_k,
        0..=max_s,
    )
        .prop_filter_map("unbalanced", move |(mut mu, nu, k, s)| {
            let last = nu.iter().map(|&x| i64::from(x)).sum::<i64>() + s as i64 * k
                - mu.iter().map(|&x| i64::from(x)).sum::<i64>();
            if last <= 0 || last > 3 * i64::from(max_part) {
                return None;
            }
            mu.push(last as u32);
            Some((part(mu), part(nu), k, s))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_oracle((mu, nu, k, s) in balanced(3, 4, 2, 2), r in 1u32..=2) {
        prop_assert_eq!(disconnected_hurwitz(&mu, &nu, k, r, s).unwrap(), oracle_disconnected(&mu, &nu, k, r, s).unwrap());
    }

    #[test]
    fn duality((mu, nu, k, s) in balanced(3, 6, 3, 3), r in 1u32..=2) {
        prop_assert_eq!(connected_cached(&mu, &nu, k, r, s).unwrap(), connected_cached(&nu, &mu, -k, r, s).unwrap());
        prop_assert_eq!(disconnected_hurwitz(&mu, &nu, k, r, s).unwrap(), disconnected_hurwitz(&nu, &mu, -k, r, s).unwrap());
    }

    #[test]
    fn odd_degree_vanishes((mu, nu, k, s) in balanced(3, 6, 3, 3), r in 1u32..=3) {
        prop_assume!((r as usize * s + mu.len() + nu.len()) % 2 == 1);
        prop_assert!(connected_hurwitz(&mu, &nu, k, r, s).unwrap().is_zero());
        prop_assert!(disconnected_hurwitz(&mu, &nu, k, r, s).unwrap().is_zero());
    }

    #[test]
    fn cache_agrees_with_tree((mu, nu, k, s) in balanced(3, 5, 2, 3), r in 1u32..=2) {
        prop_assert_eq!(connected_cached(&mu, &nu, k, r, s).unwrap(), connected_hurwitz(&mu, &nu, k, r, s).unwrap());
    }

    #[test]
    fn one_part_series_matches_closed_form(m in 2usize..=5, k in 1i64..=3, extra in prop::collection::vec(1u32..=4, 5)) {
        let s = m - 1;
        let nu = part(extra[..m].to_vec());
        let d = nu.size() + s as i64 * k;
        let d = d as u32;
        let closed = one_part_closed_genus0(d, m, k).unwrap();
        prop_assert_eq!(&one_part_connected_series(d, &nu, k, 1, s).unwrap(), &closed);
        prop_assert_eq!(connected_cached(&part(vec![d]), &nu, k, 1, s).unwrap(), closed);
    }

    #[test]
    fn genus_zero_homogeneity((mu, nu, k, s) in balanced(3, 4, 4, 2), scale in 2u32..=3) {
        prop_assume!(s + 2 == mu.len() + nu.len());
        let base = connected_cached(&mu, &nu, k, 1, s).unwrap();
        let scaled = connected_cached(&mu.scaled(scale), &nu.scaled(scale), k * i64::from(scale), 1, s).unwrap();
        let factor = Rational::from_integer(BigInt::from(scale)).pow(s as i32 - 1);
        prop_assert_eq!(scaled, base * factor);
    }
}

fn generic_point(mu: Vec<i64>, nu: Vec<i64>, s: usize) -> Option<LatticePoint> {
    let p = LatticePoint::new(mu, nu, s).ok()?;
    sign_vector(&p, s).is_generic().then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chamber_lemma(
        mu in prop::collection::vec(1i64..=30, 1..=3),
        nu in prop::collection::vec(1i64..=30, 1..=3),
        s in 1usize..=3,
        r in 1u32..=2,
    ) {
        prop_assume!(mu.len() + nu.len() <= 5);
        let Some(p) = generic_point(mu, nu, s) else { return Ok(()) };
        prop_assert_eq!(p.connected_value(r, s).unwrap(), p.disconnected_value(r, s).unwrap());
    }

    #[test]
    fn genus_zero_wall_crossing(
        mu in prop::collection::vec(1i64..=25, 1..=3),
        nu in prop::collection::vec(1i64..=25, 1..=3),
        pick in 0usize..64,
    ) {
        let (m, n) = (mu.len(), nu.len());
        prop_assume!(m + n >= 3);
        let s = m + n - 2;
        let Some(p) = generic_point(mu, nu, s) else { return Ok(()) };
        let walls: Vec<_> = arrangement(m, n, s).into_iter().filter(|w| w.delta(&p) > 0).collect();
        prop_assume!(!walls.is_empty());
        let wall = walls[pick % walls.len()];
        prop_assert_eq!(wall_crossing_series(&wall, &p, 1, s).unwrap(), wall_crossing_genus0(&wall, &p).unwrap());
    }
}

/// The two sides of `k = 0` carry different polynomials: duality swaps
/// `x` and `y`, and the `k > 0` polynomial is not symmetric. They still
/// agree on `k = 0` itself.
#[test]
fn leak_sign_separates_chambers() {
    let plus = fit_chamber_polynomial(&LatticePoint::new(vec![30], vec![8], 2).unwrap(), 2, 2).unwrap();
    let minus = fit_chamber_polynomial(&LatticePoint::new(vec![8], vec![30], 2).unwrap(), 2, 2).unwrap();
    assert_ne!(plus.poly, minus.poly);
    for (x, y) in [(30i64, 8i64), (41, 3), (17, 5)] {
        assert_eq!(plus.poly.eval(&[x, y]), minus.poly.eval(&[y, x]));
    }
    let probe = LatticePoint::new(vec![12], vec![12], 2).unwrap();
    assert_eq!(probe.k, 0);
    assert_eq!(plus.poly.eval(&probe.coordinates()), minus.poly.eval(&probe.coordinates()));
    assert_ne!(plus.poly.eval(&[30, 9]), minus.poly.eval(&[30, 9]));
}
