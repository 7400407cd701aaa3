use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::linalg::{solve, RowReducer};
use super::poly::{monomial_value, monomials_up_to, ChamberPoly};
use super::{sign_vector, LatticePoint, SignVector};
use crate::error::{HurwitzError, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub seed: u64,
    /// Fresh in-chamber points checked after solving.
    pub held_out: usize,
    /// Candidate points drawn before giving up.
    pub max_candidates: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            seed: 0x5eed,
            held_out: 5,
            max_candidates: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChamberFit {
    pub poly: ChamberPoly,
    /// Interpolation nodes with their values.
    pub samples: Vec<(LatticePoint, Rational)>,
    /// Held-out points, all reproduced exactly.
    pub held_out: Vec<(LatticePoint, Rational)>,
}

pub fn fit_chamber_polynomial(base: &LatticePoint, r: u32, s: usize) -> Result<ChamberFit> {
    fit_chamber_polynomial_with(base, r, s, &FitOptions::default())
}

/// Draws points `c * base + e` with `|e_i| <= c` for growing `c`, keeping
/// those with positive parts, integral `k` and the sign vector of `base`.
struct Sampler<'a> {
    base: &'a LatticePoint,
    s: usize,
    target: SignVector,
    rng: ChaCha8Rng,
    drawn: usize,
    seen: BTreeSet<Vec<i64>>,
}

impl Sampler<'_> {
    fn next(&mut self, limit: usize) -> Option<LatticePoint> {
        let coords = self.base.coordinates();
        let m = self.base.m();
        while self.drawn < limit {
            self.drawn += 1;
            let scale = 1 + (self.drawn / 64) as i64 % 12;
            let candidate: Vec<i64> = coords
                .iter()
                .map(|&x| scale * x + self.rng.gen_range(-scale..=scale))
                .collect();
            if candidate.iter().any(|&x| x <= 0) || self.seen.contains(&candidate) {
                continue;
            }
            let Ok(point) = LatticePoint::from_coordinates(&candidate, m, self.s) else {
                continue;
            };
            if sign_vector(&point, self.s) != self.target {
                continue;
            }
            self.seen.insert(candidate);
            return Some(point);
        }
        None
    }
}

/// Interpolates the chamber polynomial through exact values.
///
/// All monomials of degree at most `D = (r+1)s + 1 - m - n` in the parts are
/// fitted; parity of the result is left to the caller to inspect.
pub fn fit_chamber_polynomial_with(base: &LatticePoint, r: u32, s: usize, options: &FitOptions) -> Result<ChamberFit> {
    let (m, n) = (base.m(), base.n());
    let signs = sign_vector(base, s);
    if !signs.is_generic() {
        return Err(HurwitzError::InvalidArgument(format!("{base} lies on a wall")));
    }
    let bound = (i64::from(r) + 1) * s as i64 + 1 - (m + n) as i64;
    if bound < 0 {
        return Ok(ChamberFit {
            poly: ChamberPoly::zero(m, n, bound),
            samples: Vec::new(),
            held_out: Vec::new(),
        });
    }
    let monomials = monomials_up_to(m + n, bound as u32);
    let mut sampler = Sampler {
        base,
        s,
        target: signs,
        rng: ChaCha8Rng::seed_from_u64(options.seed),
        drawn: 0,
        seen: BTreeSet::new(),
    };

    let row_of = |p: &LatticePoint| -> Vec<Rational> {
        let coords = p.coordinates();
        monomials.iter().map(|e| monomial_value(e, &coords)).collect()
    };
    let mut reducer = RowReducer::default();
    let mut nodes = Vec::new();
    while nodes.len() < monomials.len() {
        let Some(point) = sampler.next(options.max_candidates) else {
            return Err(HurwitzError::FitFailed(format!(
                "only {} of {} independent in-chamber points found near {base}",
                nodes.len(),
                monomials.len()
            )));
        };
        if reducer.try_add(&row_of(&point)) {
            nodes.push(point);
        }
    }
    let mut held = Vec::new();
    while held.len() < options.held_out {
        let Some(point) = sampler.next(options.max_candidates) else {
            return Err(HurwitzError::FitFailed(format!("no held-out points left near {base}")));
        };
        held.push(point);
    }

    let value = |p: &LatticePoint| p.disconnected_value(r, s);
    let node_values: Vec<Rational> = nodes.par_iter().map(value).collect::<Result<_>>()?;
    let held_values: Vec<Rational> = held.par_iter().map(value).collect::<Result<_>>()?;

    let matrix: Vec<Vec<Rational>> = nodes.iter().map(row_of).collect();
    let coeffs = solve(&matrix, &node_values)
        .ok_or_else(|| HurwitzError::FitFailed("interpolation system is singular".into()))?;
    let mut poly = ChamberPoly::zero(m, n, bound);
    for (e, c) in monomials.into_iter().zip(coeffs) {
        if c != Rational::default() {
            poly.terms.insert(e, c);
        }
    }
    for (p, actual) in held.iter().zip(&held_values) {
        let fitted = poly.eval(&p.coordinates());
        if &fitted != actual {
            return Err(HurwitzError::HeldOutMismatch {
                point: p.to_string(),
                fitted: fitted.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(ChamberFit {
        poly,
        samples: nodes.into_iter().zip(node_values).collect(),
        held_out: held.into_iter().zip(held_values).collect(),
    })
}
