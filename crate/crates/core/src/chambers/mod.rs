//! Hyperplane arrangement, chamber polynomials and wall crossing.
//!
//! Points carry labelled parts: `mu_1..mu_m`, `nu_1..nu_n` in the order
//! given, plus the leak `k`. A hyperplane is `mu_I - nu_J - t k = 0`.

mod fit;
mod linalg;
mod poly;
mod wallcross;

pub use fit::{fit_chamber_polynomial, fit_chamber_polynomial_with, ChamberFit, FitOptions};
pub use linalg::{solve, RowReducer};
pub use poly::ChamberPoly;
pub use wallcross::{
    disconnected_series, wall_crossing_genus0, wall_crossing_series, ShapeItem,
};

use std::fmt;

use serde::Serialize;

use crate::error::{HurwitzError, Result};
use crate::partition::Partition;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint {
    pub mu: Vec<i64>,
    pub nu: Vec<i64>,
    pub k: i64,
}

impl LatticePoint {
    /// Point with `k = (|mu| - |nu|)/s`; fails unless that is an integer.
    pub fn new(mu: Vec<i64>, nu: Vec<i64>, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(HurwitzError::InvalidArgument("chambers need s >= 1".into()));
        }
        if mu.iter().chain(&nu).any(|&x| x <= 0) {
            return Err(HurwitzError::InvalidArgument("parts must be positive".into()));
        }
        let excess: i64 = mu.iter().sum::<i64>() - nu.iter().sum::<i64>();
        if excess % s as i64 != 0 {
            return Err(HurwitzError::EnergyMismatch {
                produced: mu.iter().sum(),
                expected: nu.iter().sum::<i64>() + excess / s as i64 * s as i64,
            });
        }
        Ok(LatticePoint {
            mu,
            nu,
            k: excess / s as i64,
        })
    }

    pub fn m(&self) -> usize {
        self.mu.len()
    }

    pub fn n(&self) -> usize {
        self.nu.len()
    }

    /// Coordinates `(mu_1, .., mu_m, nu_1, .., nu_n)`.
    pub fn coordinates(&self) -> Vec<i64> {
        self.mu.iter().chain(&self.nu).copied().collect()
    }

    pub fn from_coordinates(coords: &[i64], m: usize, s: usize) -> Result<Self> {
        Self::new(coords[..m].to_vec(), coords[m..].to_vec(), s)
    }

    pub fn partitions(&self) -> (Partition, Partition) {
        let to = |v: &[i64]| Partition::new(v.iter().map(|&x| x as u32).collect()).expect("positive parts");
        (to(&self.mu), to(&self.nu))
    }

    /// Connected number at this point.
    pub fn connected_value(&self, r: u32, s: usize) -> Result<Rational> {
        let (mu, nu) = self.partitions();
        crate::hurwitz::connected_cached(&mu, &nu, self.k, r, s)
    }

    pub fn disconnected_value(&self, r: u32, s: usize) -> Result<Rational> {
        let (mu, nu) = self.partitions();
        crate::hurwitz::disconnected_hurwitz(&mu, &nu, self.k, r, s)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "mu=({}) nu=({}) k={}", join(&self.mu), join(&self.nu), self.k)
    }
}

/// Hyperplane `mu_I - nu_J - t k = 0`, with index sets as bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wall {
    pub i_set: u32,
    pub j_set: u32,
    pub t: usize,
}

impl Wall {
    /// `i`, `j` are 1-based indices.
    pub fn new(i: &[usize], j: &[usize], t: usize) -> Self {
        let mask = |ix: &[usize]| ix.iter().fold(0u32, |acc, &x| acc | 1 << (x - 1));
        Wall {
            i_set: mask(i),
            j_set: mask(j),
            t,
        }
    }

    /// `delta = mu_I - nu_J - t k`.
    pub fn delta(&self, p: &LatticePoint) -> i64 {
        let pick = |v: &[i64], set: u32| -> i64 {
            v.iter().enumerate().filter(|(i, _)| set >> i & 1 == 1).map(|(_, x)| x).sum()
        };
        pick(&p.mu, self.i_set) - pick(&p.nu, self.j_set) - self.t as i64 * p.k
    }

    /// Both index sets nonempty and proper.
    pub fn is_interior(&self, m: usize, n: usize) -> bool {
        let full = |len: usize| (1u32 << len) - 1;
        self.i_set != 0 && self.j_set != 0 && self.i_set != full(m) && self.j_set != full(n)
    }

    pub fn i_indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.i_set >> b & 1 == 1).collect()
    }

    pub fn j_indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.j_set >> b & 1 == 1).collect()
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |ix: Vec<usize>| ix.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "W({{{}}},{{{}}},{})", set(self.i_indices()), set(self.j_indices()), self.t)
    }
}

/// Interior walls: `I`, `J` nonempty proper, `t = 0..=s`.
pub fn interior_walls(m: usize, n: usize, s: usize) -> Vec<Wall> {
    arrangement(m, n, s).into_iter().filter(|w| w.is_interior(m, n)).collect()
}

/// Every hyperplane `mu_I - nu_J - t k = 0` that is not identically zero
/// and is not the hyperplane `k = 0`. Besides the interior walls this
/// includes those with `I` or `J` empty or full: in the leaky setting a
/// sub-collection of parts on one side can balance against insertions.
pub fn arrangement(m: usize, n: usize, s: usize) -> Vec<Wall> {
    let (full_i, full_j) = ((1u32 << m) - 1, (1u32 << n) - 1);
    let mut out = Vec::new();
    for i_set in 0..=full_i {
        for j_set in 0..=full_j {
            let i_trivial = i_set == 0 || i_set == full_i;
            let j_trivial = j_set == 0 || j_set == full_j;
            if i_trivial && j_trivial {
                continue;
            }
            for t in 0..=s {
                out.push(Wall { i_set, j_set, t });
            }
        }
    }
    out
}

/// Signs of `delta` over the whole arrangement, plus the sign of `k`.
///
/// The polynomials on the two sides of `k = 0` differ in general (for
/// `m = n = 1` they are exchanged by `x <-> y`), so `k = 0` is treated as
/// one more wall.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    pub entries: Vec<(Wall, i8)>,
    pub leak_sign: i8,
}

impl SignVector {
    pub fn sign(&self, wall: &Wall) -> Option<i8> {
        self.entries.iter().find(|(w, _)| w == wall).map(|&(_, s)| s)
    }

    /// True when the point lies on no hyperplane and `k != 0`.
    pub fn is_generic(&self) -> bool {
        self.leak_sign != 0 && self.entries.iter().all(|&(_, s)| s != 0)
    }

    /// Walls the point lies on.
    pub fn zeros(&self) -> Vec<Wall> {
        self.entries.iter().filter(|(_, s)| *s == 0).map(|(w, _)| *w).collect()
    }
}

/// One character per arrangement wall (`+`, `-`, `0`), then the sign of `k`.
impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = |s: i8| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        };
        let walls: String = self.entries.iter().map(|(_, s)| ch(*s)).collect();
        write!(f, "{walls} k{}", ch(self.leak_sign))
    }
}

/// Uniform draw of positive parts up to `max_part`, retried until `k` is
/// integral and the point avoids every wall.
pub fn random_generic_point<R: rand::Rng>(m: usize, n: usize, s: usize, max_part: i64, rng: &mut R) -> LatticePoint {
    loop {
        let mu: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=max_part)).collect();
        let nu: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_part)).collect();
        if let Ok(p) = LatticePoint::new(mu, nu, s) {
            if sign_vector(&p, s).is_generic() {
                return p;
            }
        }
    }
}

/// Generic points on each side of `wall`, `(delta > 0, delta < 0)`, in the
/// two chambers adjacent to `on_wall`: every other sign agrees with
/// `on_wall`. Displacements have entries in `-2..=2`, smallest first. When
/// `k` is fixed the parallel walls `t` and `t +- 1` can sit one unit apart,
/// so the displacement is allowed to change `k`.
pub fn straddle(wall: &Wall, on_wall: &LatticePoint, s: usize) -> Option<(LatticePoint, LatticePoint)> {
    let base = on_wall.coordinates();
    let m = on_wall.m();
    let reference = sign_vector(on_wall, s);
    let adjacent = |p: &LatticePoint| {
        let signs = sign_vector(p, s);
        signs.is_generic()
            && signs.leak_sign == reference.leak_sign
            && signs.entries.iter().zip(&reference.entries).all(|((_, a), (_, b))| *b == 0 || a == b)
    };
    let mut moves: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..base.len() {
        moves = moves
            .into_iter()
            .flat_map(|v| {
                (-2..=2).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    moves.sort_by_key(|v| (v.iter().map(|d| d.abs()).sum::<i64>(), v.clone()));
    let mut up = None;
    let mut down = None;
    for d in moves.iter().filter(|d| d.iter().any(|&x| x != 0)) {
        let coords: Vec<i64> = base.iter().zip(d).map(|(a, b)| a + b).collect();
        let Ok(p) = LatticePoint::from_coordinates(&coords, m, s) else {
            continue;
        };
        let delta = wall.delta(&p);
        if delta > 0 && up.is_none() && adjacent(&p) {
            up = Some(p);
        } else if delta < 0 && down.is_none() && adjacent(&p) {
            down = Some(p);
        }
        if up.is_some() && down.is_some() {
            break;
        }
    }
    up.zip(down)
}

/// Complement of a wall: `delta` changes sign, the hyperplane is the same.
pub fn complement_wall(wall: &Wall, m: usize, n: usize, s: usize) -> Wall {
    Wall {
        i_set: !wall.i_set & ((1u32 << m) - 1),
        j_set: !wall.j_set & ((1u32 << n) - 1),
        t: s - wall.t,
    }
}

pub fn sign_vector(p: &LatticePoint, s: usize) -> SignVector {
    SignVector {
        entries: arrangement(p.m(), p.n(), s)
            .into_iter()
            .map(|w| (w, w.delta(p).signum() as i8))
            .collect(),
        leak_sign: p.k.signum() as i8,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(mu: &[i64], nu: &[i64], s: usize) -> LatticePoint {
        LatticePoint::new(mu.to_vec(), nu.to_vec(), s).unwrap()
    }

    #[test]
    fn wall_signs() {
        let w = Wall::new(&[1], &[1], 1);
        assert_eq!(sign_vector(&point(&[5, 2], &[3, 2], 2), 2).sign(&w), Some(1));
        assert_eq!(sign_vector(&point(&[4, 3], &[4, 1], 2), 2).sign(&w), Some(-1));
        assert_eq!(sign_vector(&point(&[4, 3], &[3, 2], 2), 2).sign(&w), Some(0));
        assert_eq!(w.to_string(), "W({1},{1},1)");
    }

    #[test]
    fn arrangement_sizes() {
        // I, J nonempty proper: 2 * 2 choices, t = 0..=2.
        assert_eq!(interior_walls(2, 2, 2).len(), 12);
        assert!(interior_walls(1, 1, 2).is_empty());
        // 16 pairs, minus the 4 with both sides trivial.
        assert_eq!(arrangement(2, 2, 2).len(), 12 * 3);
    }

    #[test]
    fn walls_come_in_complementary_pairs() {
        let p = point(&[9, 17], &[8, 14], 2);
        for w in arrangement(2, 2, 2) {
            assert_eq!(complement_wall(&w, 2, 2, 2).delta(&p), -w.delta(&p));
        }
    }

    #[test]
    fn straddling_points() {
        let on = point(&[27, 12], &[9, 24], 2);
        let w = Wall::new(&[1], &[2], 1);
        assert_eq!(w.delta(&on), 0);
        assert_eq!(sign_vector(&on, 2).zeros().len(), 2);
        let (up, down) = straddle(&w, &on, 2).unwrap();
        assert!(w.delta(&up) > 0 && w.delta(&down) < 0);
    }

    #[test]
    fn leak_must_be_integral() {
        assert!(LatticePoint::new(vec![4], vec![1], 2).is_err());
        assert_eq!(point(&[5], &[1, 1, 1], 2).k, 1);
        assert_eq!(point(&[1], &[2, 3], 2).k, -2);
    }
}
