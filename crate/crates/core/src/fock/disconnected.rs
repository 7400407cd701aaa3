use std::collections::HashMap;

use super::engine::{connected_vev_series, OpSequence};
use super::label::EOpLabel;
use crate::series::{CapVector, TruncSeries};

struct BlockAssembler<'a> {
    labels: &'a [EOpLabel],
    caps: &'a CapVector,
    blocks: HashMap<u64, TruncSeries>,
    rests: HashMap<u64, TruncSeries>,
}

impl BlockAssembler<'_> {
    fn energy(&self, mask: u64) -> i64 {
        (0..self.labels.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.labels[i].energy)
            .sum()
    }

    fn block(&mut self, mask: u64) -> TruncSeries {
        if let Some(hit) = self.blocks.get(&mask) {
            return hit.clone();
        }
        let ops = OpSequence::new(
            (0..self.labels.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.labels[i])
                .collect(),
        );
        let value = connected_vev_series(&ops, self.caps);
        self.blocks.insert(mask, value.clone());
        value
    }

    fn rest(&mut self, remaining: u64) -> TruncSeries {
        if remaining == 0 {
            return TruncSeries::one(self.caps);
        }
        if self.energy(remaining) != 0 {
            return TruncSeries::zero(self.caps);
        }
        if let Some(hit) = self.rests.get(&remaining) {
            return hit.clone();
        }
        let first = remaining & remaining.wrapping_neg();
        let others = remaining ^ first;
        let mut acc = TruncSeries::zero(self.caps);
        let mut sub = others;
        loop {
            let block = sub | first;
            if self.energy(block) == 0 {
                let connected = self.block(block);
                if !connected.is_zero() {
                    let rest = self.rest(remaining ^ block);
                    acc.add_assign_ref(&connected.mul_ref(&rest));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        self.rests.insert(remaining, acc.clone());
        acc
    }
}

/// Full VEV `<O_1 .. O_N>` as the sum over set partitions of the operators
/// of products of connected VEVs, each block keeping the original order.
pub fn disconnected_vev_series(ops: &OpSequence, caps: &CapVector) -> TruncSeries {
    assert!(ops.len() <= 64, "at most 64 operators");
    let mut assembler = BlockAssembler {
        labels: ops.labels(),
        caps,
        blocks: HashMap::new(),
        rests: HashMap::new(),
    };
    let all = if ops.len() == 64 { u64::MAX } else { (1u64 << ops.len()) - 1 };
    assembler.rest(all)
}
