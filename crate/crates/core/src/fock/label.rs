use std::fmt;

use crate::error::{HurwitzError, Result};
use crate::rational::{int, Rational};
use crate::series::{LinearForm, VarSet};

/// Where a label came from. Diagnostic only: evaluation ignores it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Alpha,
    Insertion,
    Merged,
}

/// An operator `E_n(z_K)` in flight: energy `n`, attached variables `K`.
///
/// `corrected == false` marks the tilde variant, which lacks the central
/// term at zero energy and so annihilates the vacuum from both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EOpLabel {
    pub energy: i64,
    pub zvars: VarSet,
    pub corrected: bool,
    pub origin: Origin,
}

impl EOpLabel {
    /// `alpha_n = E_n(0)`.
    pub fn alpha(energy: i64) -> Self {
        assert!(energy != 0, "alpha_0 is not part of the operator algebra used here");
        EOpLabel {
            energy,
            zvars: VarSet::EMPTY,
            corrected: true,
            origin: Origin::Alpha,
        }
    }

    pub fn insertion(energy: i64, var: usize, tilde: bool) -> Self {
        EOpLabel {
            energy,
            zvars: VarSet::singleton(var),
            corrected: !tilde,
            origin: Origin::Insertion,
        }
    }

    pub fn is_alpha(&self) -> bool {
        self.zvars.is_empty()
    }

    /// Evaluation key; drops the origin tag.
    pub(crate) fn key(&self) -> (i64, u32, bool) {
        (self.energy, self.zvars.bits(), self.corrected)
    }
}

impl fmt::Display for EOpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_alpha() {
            return write!(f, "α[{}]", self.energy);
        }
        let name = if self.corrected { "E" } else { "Ẽ" };
        write!(f, "{name}[{}]{}", self.energy, self.zvars)
    }
}

/// A factor on a tree edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeWeight {
    /// `ς(form)`.
    Sigma(LinearForm),
    /// Central scalar of an `[alpha_a, alpha_-a]` commutator.
    Scalar(Rational),
}

impl fmt::Display for EdgeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeWeight::Sigma(form) => write!(f, "ς({form})"),
            EdgeWeight::Scalar(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Commutator {
    /// Scalar multiple of the identity.
    Identity(EdgeWeight),
    /// `ς(form) E_{a+b}(z_{A ∪ B})`.
    Operator { weight: EdgeWeight, label: EOpLabel },
    /// Vanishes identically.
    Zero,
}

/// `[E_a(z_A), E_b(z_B)] = ς(a z_B - b z_A) E_{a+b}(z_A + z_B)`, and
/// `[alpha_a, alpha_b] = a δ_{a+b,0}`. The tilde flag plays no role since
/// the two variants differ by a central term.
pub fn commutator(left: &EOpLabel, right: &EOpLabel) -> Result<Commutator> {
    if left.zvars.intersects(right.zvars) {
        return Err(HurwitzError::OverlappingVariables(format!("{} and {}", left.zvars, right.zvars)));
    }
    if left.is_alpha() && right.is_alpha() {
        return Ok(if left.energy + right.energy == 0 {
            Commutator::Identity(EdgeWeight::Scalar(int(left.energy)))
        } else {
            Commutator::Zero
        });
    }
    let form = LinearForm::sum_over(right.zvars, left.energy).plus(&LinearForm::sum_over(left.zvars, -right.energy));
    if form.is_zero() {
        return Ok(Commutator::Zero);
    }
    Ok(Commutator::Operator {
        weight: EdgeWeight::Sigma(form),
        label: EOpLabel {
            energy: left.energy + right.energy,
            zvars: left.zvars.union(right.zvars),
            corrected: true,
            origin: Origin::Merged,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(energy: i64, vars: &[usize]) -> EOpLabel {
        EOpLabel {
            energy,
            zvars: vars.iter().copied().collect(),
            corrected: true,
            origin: Origin::Insertion,
        }
    }

    #[test]
    fn alpha_pairs() {
        assert_eq!(
            commutator(&EOpLabel::alpha(3), &EOpLabel::alpha(-3)).unwrap(),
            Commutator::Identity(EdgeWeight::Scalar(int(3)))
        );
        assert_eq!(commutator(&EOpLabel::alpha(3), &EOpLabel::alpha(-2)).unwrap(), Commutator::Zero);
    }

    #[test]
    fn two_insertions() {
        let Commutator::Operator { weight, label } = commutator(&op(5, &[0]), &op(-2, &[1])).unwrap() else {
            panic!("expected an operator");
        };
        assert_eq!(weight, EdgeWeight::Sigma(LinearForm::from_pairs([(0, 2), (1, 5)])));
        assert_eq!(label.energy, 3);
        assert_eq!(label.zvars, [0usize, 1].into_iter().collect());
        assert!(label.corrected);
        assert_eq!(label.origin, Origin::Merged);
    }

    #[test]
    fn alpha_with_insertion() {
        let Commutator::Operator { weight, label } = commutator(&EOpLabel::alpha(2), &op(-1, &[0])).unwrap() else {
            panic!("expected an operator");
        };
        assert_eq!(weight, EdgeWeight::Sigma(LinearForm::from_pairs([(0, 2)])));
        assert_eq!((label.energy, label.zvars), (1, VarSet::singleton(0)));
    }

    #[test]
    fn tilde_does_not_change_commutator() {
        let tilde = EOpLabel::insertion(0, 0, true);
        let plain = EOpLabel::insertion(0, 0, false);
        let a = EOpLabel::alpha(-4);
        assert_eq!(commutator(&tilde, &a).unwrap(), commutator(&plain, &a).unwrap());
    }

    #[test]
    fn zero_energy_pair_commutes() {
        assert_eq!(commutator(&op(0, &[0]), &op(0, &[1])).unwrap(), Commutator::Zero);
    }

    #[test]
    fn overlapping_variables_rejected() {
        assert!(matches!(
            commutator(&op(1, &[0, 1]), &op(-1, &[1])),
            Err(HurwitzError::OverlappingVariables(_))
        ));
    }
}
