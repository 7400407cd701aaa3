use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::HurwitzError;
use crate::rational::factorial;

/// Integer partition with positive parts, stored in non-increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(mut parts: Vec<u32>) -> Result<Self, HurwitzError> {
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(HurwitzError::InvalidArgument(format!(
                "part {} is zero; parts must be positive",
                pos + 1
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().map(|&p| i64::from(p)).sum()
    }

    pub fn product(&self) -> BigInt {
        self.0.iter().map(|&p| BigInt::from(p)).product()
    }

    /// Order of the automorphism group: product of multiplicity factorials.
    pub fn aut_order(&self) -> BigInt {
        multiplicities(&self.0)
            .into_iter()
            .map(|(_, c)| factorial(c as u64))
            .product()
    }

    pub fn scaled(&self, factor: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * factor).collect())
    }

    pub fn divisible_by(&self, factor: u32) -> bool {
        self.0.iter().all(|&p| p % factor == 0)
    }

    pub fn with_part(&self, part: u32) -> Partition {
        let mut parts = self.0.clone();
        parts.push(part);
        Partition::new(parts).expect("positive parts")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = HurwitzError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", text.join(","))
    }
}

/// Parses `5,2,2`; the empty string is the empty partition.
impl FromStr for Partition {
    type Err = HurwitzError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for (i, piece) in text.split(',').enumerate() {
            let piece = piece.trim();
            let part: u32 = piece.parse().map_err(|_| {
                HurwitzError::InvalidArgument(format!("part {} ({piece:?}) is not a positive integer", i + 1))
            })?;
            parts.push(part);
        }
        Partition::new(parts)
    }
}

/// `(value, multiplicity)` pairs in order of first appearance.
pub fn multiplicities(parts: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &p in parts {
        match out.iter_mut().find(|(v, _)| *v == p) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_partitions(n, n, None, &mut current, &mut out);
    out
}

/// Partitions of `n` with exactly `len` parts.
pub fn partitions_with_length(n: u32, len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_partitions(n, n, Some(len), &mut current, &mut out);
    out
}

fn extend_partitions(
    remaining: u32,
    max_part: u32,
    len: Option<usize>,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        if len.is_none_or(|l| l == current.len()) {
            out.push(Partition(current.clone()));
        }
        return;
    }
    if let Some(l) = len {
        let slots = l.saturating_sub(current.len()) as u32;
        if slots == 0 || slots > remaining || u64::from(slots) * u64::from(max_part) < u64::from(remaining) {
            return;
        }
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        extend_partitions(remaining - part, part, len, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_partition_numbers() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions_with_length(7, 3).len(), 4);
        assert!(partitions_with_length(2, 3).is_empty());
        assert_eq!(partitions_with_length(0, 0), vec![Partition::empty()]);
    }

    #[test]
    fn parsing_reports_position() {
        assert_eq!("2, 5,2".parse::<Partition>().unwrap().parts(), &[5, 2, 2]);
        let err = "3,x".parse::<Partition>().unwrap_err().to_string();
        assert!(err.contains("part 2"), "{err}");
        let err = "3,0".parse::<Partition>().unwrap_err().to_string();
        assert!(err.contains("part 2"), "{err}");
        assert!("".parse::<Partition>().unwrap().is_empty());
    }

    #[test]
    fn automorphisms() {
        let p = Partition::new(vec![2, 1, 2, 2, 1]).unwrap();
        assert_eq!(p.aut_order(), BigInt::from(12));
        assert_eq!(p.size(), 8);
        assert_eq!(p.to_string(), "(2,2,2,1,1)");
    }
}
