//! Subset-sum dynamic-programming backend.
//!
//! Exact Banzhaf counts without enumerating coalitions, for rules that
//! reduce to a member-count quota plus at most one integer-weight quota.
//! Counts of subsets are built by (cardinality, weight-sum) convolution;
//! per-member counts come from dividing the member back out of the full
//! product, so no per-member rebuild is needed.
//!
//! Two layouts:
//! * weight-only rules use a single `u32` row over weights below the
//!   threshold, prefix-summed in place; each member's swing count is an
//!   alternating sum of O(threshold / weight) window sums.
//! * count + weight rules use a dense `(cardinality, weight)` table with
//!   the at-or-above-threshold mass recovered from binomial totals.
//!
//! Results are bit-for-bit identical to the enumeration backend.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Council, CriterionKind, VotingRule};
use crate::power::{
    check_exact_capacity, report_from_counts, CompiledCriterion, PowerBackend, PowerReport,
};

/// Default cap on DP table allocation. Large enough for every
/// negotiated-weight game, small enough that population-scale weight
/// totals fall back to enumeration unless the caller raises it.
pub const DEFAULT_DP_TABLE_BYTES: u128 = 256 << 20;

/// Exact report via the DP backend under the default memory budget.
pub fn banzhaf_dp(council: &Council, rule: &VotingRule) -> Result<PowerReport> {
    banzhaf_dp_with_budget(council, rule, DEFAULT_DP_TABLE_BYTES)
}

/// Exact report via the DP backend; `max_table_bytes` bounds the table
/// allocation and thereby decides eligibility of large-weight rules.
pub fn banzhaf_dp_with_budget(
    council: &Council,
    rule: &VotingRule,
    max_table_bytes: u128,
) -> Result<PowerReport> {
    rule.validate(council)?;
    check_exact_capacity(council)?;
    let shape = reduce(council, rule)?;
    let n = council.n();
    let (tb, winning) = match shape {
        DpShape::AlwaysWins => (vec![0; n], 1u64 << n),
        DpShape::WeightOnly { weights, threshold } => {
            check_budget(weight_only_bytes(threshold), max_table_bytes)?;
            weight_only_counts(n, &weights, threshold)
        }
        DpShape::CountAndWeight {
            weights,
            threshold,
            count_threshold,
        } => {
            check_budget(count_weight_bytes(n, threshold), max_table_bytes)?;
            count_weight_counts(n, &weights, threshold, count_threshold)
        }
    };
    Ok(report_from_counts(
        council,
        rule,
        PowerBackend::Dp,
        tb,
        winning,
    ))
}

/// Whether [`banzhaf_dp_with_budget`] would accept this rule.
pub fn dp_eligible(council: &Council, rule: &VotingRule, max_table_bytes: u128) -> bool {
    if council.n() > crate::power::MAX_EXACT_MEMBERS {
        return false;
    }
    match reduce(council, rule) {
        Ok(DpShape::AlwaysWins) => true,
        Ok(DpShape::WeightOnly { threshold, .. }) => {
            weight_only_bytes(threshold) <= max_table_bytes
        }
        Ok(DpShape::CountAndWeight { threshold, .. }) => {
            count_weight_bytes(council.n(), threshold) <= max_table_bytes
        }
        Err(_) => false,
    }
}

fn weight_only_bytes(threshold: u64) -> u128 {
    threshold as u128 * std::mem::size_of::<u32>() as u128
}

fn count_weight_bytes(n: usize, threshold: u64) -> u128 {
    // Full table plus the divide-out scratch table.
    2 * (n as u128 + 1) * threshold as u128 * std::mem::size_of::<u64>() as u128
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::DpIneligible(format!(
            "needs {needed} table bytes, budget is {budget}; fall back to enumeration"
        )));
    }
    Ok(())
}

enum DpShape {
    /// Every coalition (including the empty one) wins.
    AlwaysWins,
    WeightOnly {
        weights: Vec<u64>,
        threshold: u64,
    },
    CountAndWeight {
        weights: Vec<u64>,
        threshold: u64,
        count_threshold: u64,
    },
}

/// Reduces a rule to DP shape: same-kind criteria collapse to their
/// strictest threshold; more than one weighted kind, or a blocking
/// clause, is out of scope for this backend.
fn reduce(council: &Council, rule: &VotingRule) -> Result<DpShape> {
    if rule.blocking_minority_min.is_some() {
        return Err(Error::DpIneligible(
            "blocking-minority override is not representable".into(),
        ));
    }
    let mut count_threshold: Option<u64> = None;
    let mut weighted: Option<(CriterionKind, CompiledCriterion)> = None;
    for criterion in &rule.criteria {
        let compiled = CompiledCriterion::compile(council, criterion)?;
        if criterion.kind == CriterionKind::MemberCount {
            let t = count_threshold.get_or_insert(0);
            *t = (*t).max(compiled.threshold);
        } else {
            match &mut weighted {
                None => weighted = Some((criterion.kind, compiled)),
                Some((kind, existing)) if *kind == criterion.kind => {
                    existing.threshold = existing.threshold.max(compiled.threshold);
                }
                Some(_) => {
                    return Err(Error::DpIneligible(
                        "more than one weighted criterion kind".into(),
                    ));
                }
            }
        }
    }
    // Thresholds of zero are vacuous.
    let count_threshold = count_threshold.filter(|&t| t > 0);
    let weighted = weighted.filter(|(_, c)| c.threshold > 0);
    Ok(match (count_threshold, weighted) {
        (None, None) => DpShape::AlwaysWins,
        (None, Some((_, c))) => DpShape::WeightOnly {
            weights: c.weights,
            threshold: c.threshold,
        },
        (Some(qc), None) => DpShape::WeightOnly {
            // A pure count quota is a weight quota with unit weights.
            weights: vec![1; council.n()],
            threshold: qc,
        },
        (Some(qc), Some((_, c))) => DpShape::CountAndWeight {
            weights: c.weights,
            threshold: c.threshold,
            count_threshold: qc,
        },
    })
}

/// Weight-only rule: counts of subsets by exact weight below the
/// threshold, prefix-summed; swings via alternating window sums.
fn weight_only_counts(n: usize, weights: &[u64], threshold: u64) -> (Vec<u64>, u64) {
    let cap = threshold as usize;
    let mut table = vec![0u32; cap];
    table[0] = 1;
    for &w in weights {
        let w = w as usize;
        if w >= cap {
            continue; // subsets containing this member sit at/above the threshold
        }
        if w == 0 {
            for cell in table.iter_mut() {
                *cell *= 2;
            }
            continue;
        }
        for idx in (w..cap).rev() {
            table[idx] += table[idx - w];
        }
    }
    // In place: table[x] = number of subsets with weight <= x (< threshold).
    for idx in 1..cap {
        table[idx] += table[idx - 1];
    }
    let prefix = |x: i64| -> u64 {
        if x < 0 {
            0
        } else {
            table[(x as usize).min(cap - 1)] as u64
        }
    };

    let below = table[cap - 1] as u64;
    let winning = (1u64 << n) - below;

    let tb = weights
        .par_iter()
        .map(|&w_i| {
            if w_i == 0 {
                return 0;
            }
            // Member i swings subsets without i whose weight lies in
            // [threshold - w_i, threshold). Dividing i out of the full
            // table telescopes into an alternating sum of window sums.
            let w = w_i as i64;
            let mut acc: i64 = 0;
            let mut sign: i64 = 1;
            let mut hi = threshold as i64;
            while hi > 0 {
                let lo = (hi - w).max(0);
                acc += sign * (prefix(hi - 1) - prefix(lo - 1)) as i64;
                sign = -sign;
                hi -= w;
            }
            debug_assert!(acc >= 0);
            acc as u64
        })
        .collect();
    (tb, winning)
}

/// Count + weight rule: dense table of subset counts by (cardinality,
/// exact weight below threshold); at-or-above-threshold mass per
/// cardinality is the binomial total minus the in-table row sum.
fn count_weight_counts(
    n: usize,
    weights: &[u64],
    threshold: u64,
    count_threshold: u64,
) -> (Vec<u64>, u64) {
    let cap = threshold as usize;
    let qc = count_threshold as usize;
    let rows = n + 1;
    let mut table = vec![0u64; rows * cap];
    table[0] = 1;
    for &w in weights {
        let w = w as usize;
        if w >= cap {
            // Subsets containing this member all sit at/above the
            // threshold; they are recovered from the binomial totals.
            continue;
        }
        for c in (1..rows).rev() {
            let (lower, upper) = table.split_at_mut(c * cap);
            let prev = &lower[(c - 1) * cap..];
            for idx in (w..cap).rev() {
                upper[idx] += prev[idx - w];
            }
        }
    }

    let choose = binomial_row(n);
    // Winning coalitions: cardinality >= qc and weight >= threshold.
    let mut winning = 0u64;
    for c in qc.min(rows)..rows {
        let in_table: u64 = table[c * cap..(c + 1) * cap].iter().sum();
        winning += choose[c] - in_table;
    }

    let choose_others = binomial_row(n - 1);
    let mut scratch = vec![0u64; rows * cap];
    let mut tb = vec![0u64; n];
    for (i, &w_i) in weights.iter().enumerate() {
        let w = w_i as usize;
        // scratch[c][x] = subsets without member i, cardinality c, weight x.
        for c in 0..rows {
            for idx in 0..cap {
                let mut v = table[c * cap + idx];
                if c > 0 && idx >= w {
                    v -= scratch[(c - 1) * cap + idx - w];
                }
                scratch[c * cap + idx] = v;
            }
        }
        // Swings: S + i reaches both quotas, S misses at least one.
        // #{c >= qc-1, weight >= threshold - w_i} - #{c >= qc, weight >= threshold}
        let lo = threshold.saturating_sub(w_i) as usize;
        let mut swings = 0u64;
        for c in qc.saturating_sub(1)..n {
            let row = &scratch[c * cap..(c + 1) * cap];
            let row_total: u64 = row.iter().sum();
            let above = choose_others[c] - row_total;
            let window: u64 = row[lo..].iter().sum();
            swings += window + above;
            if c >= qc {
                swings -= above;
            }
        }
        tb[i] = swings;
    }
    (tb, winning)
}

fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = vec![0u64; n + 2];
    row[0] = 1;
    for _ in 0..n {
        for idx in (1..row.len()).rev() {
            row[idx] += row[idx - 1];
        }
    }
    row.truncate(n + 1);
    row
}
