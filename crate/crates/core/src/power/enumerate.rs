//! Exhaustive Gray-code enumeration backend.
//!
//! One pass over all `2^n` coalitions. Neighboring coalitions in Gray
//! order differ by one member, so every criterion sum updates in O(1)
//! per step. Swings are counted with a per-coalition scan of the winning
//! coalition's members: member `i` is decisive iff removing it breaks a
//! criterion, i.e. its weight exceeds that criterion's slack.
//!
//! The subset space is partitioned by the high-order membership bits and
//! chunks run in parallel; per-chunk counts merge by integer addition,
//! so results are independent of the worker count.

use rayon::prelude::*;

use crate::error::Result;
use crate::game::{Council, VotingRule};
use crate::power::{
    check_exact_capacity, report_from_counts, CompiledRule, PowerBackend, PowerReport,
};

/// Exact total Banzhaf counts and efficiency by full enumeration.
pub fn banzhaf_enumeration(council: &Council, rule: &VotingRule) -> Result<PowerReport> {
    check_exact_capacity(council)?;
    let compiled = CompiledRule::compile(council, rule)?;
    let (tb, winning) = enumerate_counts(&compiled);
    Ok(report_from_counts(
        council,
        rule,
        PowerBackend::Enumeration,
        tb,
        winning,
    ))
}

pub(crate) struct EnumAccumulator {
    pub tb: Vec<u64>,
    pub winning: u64,
}

impl EnumAccumulator {
    fn new(n: usize) -> Self {
        EnumAccumulator {
            tb: vec![0; n],
            winning: 0,
        }
    }

    fn merge(mut self, other: EnumAccumulator) -> Self {
        for (a, b) in self.tb.iter_mut().zip(other.tb) {
            *a += b;
        }
        self.winning += other.winning;
        self
    }
}

/// Number of high-order bits fixed per parallel chunk.
pub(crate) fn split_bits(n: usize) -> usize {
    // Keep inner loops long enough to amortize chunk setup while giving
    // the scheduler plenty of chunks.
    n.saturating_sub(16).min(10)
}

pub(crate) fn enumerate_counts(compiled: &CompiledRule) -> (Vec<u64>, u64) {
    let n = compiled.n;
    let split = split_bits(n);
    let acc = (0u32..1u32 << split)
        .into_par_iter()
        .fold(
            || EnumAccumulator::new(n),
            |mut acc, chunk| {
                scan_chunk(compiled, chunk, n - split, &mut acc);
                acc
            },
        )
        .reduce(|| EnumAccumulator::new(n), EnumAccumulator::merge);
    (acc.tb, acc.winning)
}

/// Walks all coalitions whose high bits equal `chunk`, in Gray order
/// over the `low_bits` low positions.
fn scan_chunk(compiled: &CompiledRule, chunk: u32, low_bits: usize, acc: &mut EnumAccumulator) {
    let k = compiled.criteria.len();
    debug_assert!(k <= 8);
    let mut sums = [0u64; 8];
    let sums = &mut sums[..k];

    let high = chunk << low_bits;
    let mut size: usize = high.count_ones() as usize;
    let mut bits = high;
    {
        let mut m = high;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            for (s, c) in sums.iter_mut().zip(&compiled.criteria) {
                *s += c.weights[i];
            }
            m &= m - 1;
        }
    }

    visit(compiled, bits, size, sums, acc);
    for t in 1u32..(1u32 << low_bits) {
        let flip = t.trailing_zeros() as usize;
        let bit = 1u32 << flip;
        if bits & bit == 0 {
            bits |= bit;
            size += 1;
            for (s, c) in sums.iter_mut().zip(&compiled.criteria) {
                *s += c.weights[flip];
            }
        } else {
            bits &= !bit;
            size -= 1;
            for (s, c) in sums.iter_mut().zip(&compiled.criteria) {
                *s -= c.weights[flip];
            }
        }
        visit(compiled, bits, size, sums, acc);
    }
}

#[inline]
fn visit(compiled: &CompiledRule, bits: u32, size: usize, sums: &[u64], acc: &mut EnumAccumulator) {
    let criteria_ok = compiled.criteria_hold(sums);
    if !(criteria_ok || compiled.override_wins(size)) {
        return;
    }
    acc.winning += 1;
    if size == 0 {
        return; // the empty coalition can win only by quota-zero rules
    }
    if compiled.override_wins(size - 1) {
        // Any single removal still wins by the complement override.
        return;
    }
    if !criteria_ok {
        // Won through the override alone; every removal loses.
        let mut m = bits;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            acc.tb[i] += 1;
            m &= m - 1;
        }
        return;
    }
    // Member i is decisive iff its weight exceeds some criterion's slack.
    let mut m = bits;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        let decisive = compiled
            .criteria
            .iter()
            .zip(sums)
            .any(|(c, &s)| c.weights[i] > s - c.threshold);
        if decisive {
            acc.tb[i] += 1;
        }
        m &= m - 1;
    }
}
