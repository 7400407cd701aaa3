//! Connected vacuum expectation values by the coarse commutation tree.
//!
//! A node is a sequence of operator labels. Its children come from the
//! leftmost negative-energy label at position `p >= 1`: the cancelling
//! child replaces positions `p-1, p` by their commutator (the edge carries
//! the structure constant), the passing child swaps them. Zero-energy
//! labels are skipped when locating `p`. A negative label at position 0
//! kills the branch since it annihilates the covacuum.
//!
//! Only histories ending in exactly one terminal factor are kept. Because
//! edge weights multiply, the contribution below a node depends on the
//! node's sequence alone and is memoized by it.

use std::collections::BTreeMap;

use dashmap::DashMap;
use num_traits::One;

use super::label::{commutator, Commutator, EOpLabel, EdgeWeight};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::series::{sigma_ratio_series, sigma_series, CapVector, LinearForm, TruncSeries, VarSet};

/// Sequences at least this long evaluate their two children in parallel.
const PARALLEL_MIN_LEN: usize = 7;

/// Ordered operator product `O_1 O_2 ... O_N` inside `<0| . |0>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpSequence {
    labels: Vec<EOpLabel>,
    total_energy: i64,
}

impl OpSequence {
    pub fn new(labels: Vec<EOpLabel>) -> Self {
        let total_energy = labels.iter().map(|l| l.energy).sum();
        OpSequence { labels, total_energy }
    }

    /// `alpha_{mu_1} .. alpha_{mu_m} E_{-k}(z_1) .. E_{-k}(z_s) alpha_{-nu_1} .. alpha_{-nu_n}`,
    /// with tilde insertions when `k = 0`.
    pub fn hurwitz(mu: &Partition, nu: &Partition, k: i64, s: usize) -> Self {
        let mut labels: Vec<EOpLabel> = mu.parts().iter().map(|&p| EOpLabel::alpha(i64::from(p))).collect();
        labels.extend((0..s).map(|p| EOpLabel::insertion(-k, p, k == 0)));
        labels.extend(nu.parts().iter().map(|&p| EOpLabel::alpha(-i64::from(p))));
        Self::new(labels)
    }

    pub fn labels(&self) -> &[EOpLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_energy(&self) -> i64 {
        self.total_energy
    }

    pub fn zvars(&self) -> VarSet {
        zvars_of(&self.labels)
    }
}

fn zvars_of(labels: &[EOpLabel]) -> VarSet {
    labels.iter().fold(VarSet::EMPTY, |acc, l| acc.union(l.zvars))
}

type SeqKey = Vec<(i64, u32, bool)>;

fn key_of(labels: &[EOpLabel]) -> SeqKey {
    labels.iter().map(EOpLabel::key).collect()
}

/// Position of the leftmost negative-energy label.
pub(crate) fn leftmost_negative(labels: &[EOpLabel]) -> Option<usize> {
    labels.iter().position(|l| l.energy < 0)
}

pub(crate) fn swapped(labels: &[EOpLabel], p: usize) -> Vec<EOpLabel> {
    let mut next = labels.to_vec();
    next.swap(p - 1, p);
    next
}

pub(crate) fn merged(labels: &[EOpLabel], p: usize, label: EOpLabel) -> Vec<EOpLabel> {
    let mut next = Vec::with_capacity(labels.len() - 1);
    next.extend_from_slice(&labels[..p - 1]);
    next.push(label);
    next.extend_from_slice(&labels[p + 1..]);
    next
}

/// `ς(e z_K)/ς(z_K)` for the final merge onto a single zero-energy label
/// `E_0(z_K)`, whose vacuum expectation is `1/ς(z_K)`.
pub(crate) fn terminal_fold(form: &LinearForm, zvars: VarSet, caps: &CapVector) -> TruncSeries {
    let (e, vars) = form.as_uniform().expect("a zero-energy merge has a uniform structure constant");
    debug_assert_eq!(vars, zvars);
    sigma_ratio_series(e, zvars, caps)
}

struct ConnectedEvaluator<'a> {
    caps: &'a CapVector,
    memo: DashMap<SeqKey, TruncSeries>,
}

impl ConnectedEvaluator<'_> {
    fn eval(&self, labels: &[EOpLabel]) -> TruncSeries {
        let caps = self.caps;
        if labels.len() < 2 {
            // A lone label here is tilde or carries energy; a corrected
            // zero-energy survivor only arises through the fold below.
            return TruncSeries::zero(caps);
        }
        // Every merge but the last contributes an odd ς-factor of degree >= 1.
        if labels.len() - 2 > caps.total_over(zvars_of(labels)) as usize {
            return TruncSeries::zero(caps);
        }
        let Some(p) = leftmost_negative(labels) else {
            // Two or more terminal factors.
            return TruncSeries::zero(caps);
        };
        if p == 0 {
            return TruncSeries::zero(caps);
        }
        let key = key_of(labels);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let cancel = || self.cancel_child(labels, p);
        let pass = || self.eval(&swapped(labels, p));
        let (mut value, passed) = if labels.len() >= PARALLEL_MIN_LEN {
            rayon::join(cancel, pass)
        } else {
            (cancel(), pass())
        };
        value.add_assign_ref(&passed);
        self.memo.insert(key, value.clone());
        value
    }

    fn cancel_child(&self, labels: &[EOpLabel], p: usize) -> TruncSeries {
        let caps = self.caps;
        let outcome = commutator(&labels[p - 1], &labels[p]).expect("tree labels carry disjoint variables");
        match outcome {
            Commutator::Zero => TruncSeries::zero(caps),
            Commutator::Identity(EdgeWeight::Scalar(c)) => {
                if labels.len() == 2 {
                    TruncSeries::constant(c, caps)
                } else {
                    // A separate identity factor: the history is disconnected.
                    TruncSeries::zero(caps)
                }
            }
            Commutator::Identity(EdgeWeight::Sigma(_)) => unreachable!("identities carry scalars"),
            Commutator::Operator { weight, label } => {
                let EdgeWeight::Sigma(form) = weight else {
                    unreachable!("operator commutators carry ς-factors")
                };
                if labels.len() == 2 {
                    return terminal_fold(&form, label.zvars, caps);
                }
                let rest = self.eval(&merged(labels, p, label));
                if rest.is_zero() {
                    return rest;
                }
                sigma_series(&form, caps).mul_ref(&rest)
            }
        }
    }
}

/// Connected VEV `<O_1 .. O_N>°` as a power series truncated to `caps`.
pub fn connected_vev_series(ops: &OpSequence, caps: &CapVector) -> TruncSeries {
    if ops.total_energy() != 0 || ops.is_empty() {
        return TruncSeries::zero(caps);
    }
    let evaluator = ConnectedEvaluator {
        caps,
        memo: DashMap::new(),
    };
    evaluator.eval(ops.labels())
}

/// Running state along one root-to-leaf path of the tree.
#[derive(Clone, Debug)]
pub struct PathAccumulator {
    pub product: TruncSeries,
    pub scalar: Rational,
    /// Terminal factors emitted so far (zero-energy survivors and identities).
    pub factor_count: usize,
}

impl PathAccumulator {
    fn start(caps: &CapVector) -> Self {
        PathAccumulator {
            product: TruncSeries::one(caps),
            scalar: Rational::one(),
            factor_count: 0,
        }
    }

    fn value(&self) -> TruncSeries {
        self.product.scale(&self.scalar)
    }
}

/// Outcome of walking every path of the tree without memoization.
#[derive(Clone, Debug)]
pub struct PathCensus {
    /// Sum over the single-factor paths; equals [`connected_vev_series`].
    pub connected: TruncSeries,
    /// Number of paths reaching a terminal, by terminal-factor count.
    pub paths_by_factor_count: BTreeMap<usize, usize>,
    /// Paths killed by a negative label reaching the left end.
    pub dead_paths: usize,
}

/// Plain depth-first enumeration of all paths. Exponential; meant for
/// cross-checking the memoized evaluator and for diagnostics.
pub fn enumerate_paths(ops: &OpSequence, caps: &CapVector) -> PathCensus {
    let mut census = PathCensus {
        connected: TruncSeries::zero(caps),
        paths_by_factor_count: BTreeMap::new(),
        dead_paths: 0,
    };
    if ops.total_energy() == 0 && !ops.is_empty() {
        walk(ops.labels().to_vec(), PathAccumulator::start(caps), caps, &mut census);
    }
    census
}

fn record(census: &mut PathCensus, acc: &PathAccumulator, value: Option<TruncSeries>) {
    *census.paths_by_factor_count.entry(acc.factor_count).or_default() += 1;
    if acc.factor_count == 1 {
        if let Some(v) = value {
            census.connected.add_assign_ref(&v);
        }
    }
}

fn walk(labels: Vec<EOpLabel>, acc: PathAccumulator, caps: &CapVector, census: &mut PathCensus) {
    if labels.is_empty() {
        let value = acc.value();
        record(census, &acc, Some(value));
        return;
    }
    let Some(p) = leftmost_negative(&labels) else {
        let mut acc = acc;
        acc.factor_count += labels.len();
        // Multi-factor terminal values are never needed, and a tilde
        // survivor has no identity component.
        record(census, &acc, None);
        return;
    };
    if p == 0 {
        census.dead_paths += 1;
        return;
    }
    match commutator(&labels[p - 1], &labels[p]).expect("disjoint variables") {
        Commutator::Zero => {}
        Commutator::Identity(EdgeWeight::Scalar(c)) => {
            let mut next = acc.clone();
            next.scalar *= c;
            next.factor_count += 1;
            let mut rest = labels.clone();
            rest.drain(p - 1..=p);
            walk(rest, next, caps, census);
        }
        Commutator::Identity(EdgeWeight::Sigma(_)) => unreachable!(),
        Commutator::Operator { weight, label } => {
            let EdgeWeight::Sigma(form) = weight else { unreachable!() };
            let mut next = acc.clone();
            if labels.len() == 2 {
                next.product = next.product.mul_ref(&terminal_fold(&form, label.zvars, caps));
                next.factor_count += 1;
                let value = next.value();
                record(census, &next, Some(value));
            } else {
                next.product = next.product.mul_ref(&sigma_series(&form, caps));
                walk(merged(&labels, p, label), next, caps, census);
            }
        }
    }
    walk(swapped(&labels, p), acc, caps, census);
}
