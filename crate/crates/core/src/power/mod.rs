//! Exact and estimated Banzhaf power computation.
//!
//! Three backends share one report shape:
//! * [`banzhaf_exact`] — exact counts; dispatches to the subset-sum DP
//!   when the rule shape and memory budget allow, else to Gray-code
//!   enumeration over all `2^n` coalitions.
//! * [`banzhaf_monte_carlo`] — seeded, reproducible estimation from
//!   uniform random coalitions.
//! * [`brute_force_oracle`] — a deliberately naive double loop used to
//!   cross-validate the optimized backends. It shares no code with them.

mod dp;
mod enumerate;
mod monte_carlo;
mod oracle;

pub use dp::{banzhaf_dp, banzhaf_dp_with_budget, dp_eligible, DEFAULT_DP_TABLE_BYTES};
pub use enumerate::banzhaf_enumeration;
pub use monte_carlo::banzhaf_monte_carlo;
pub use oracle::brute_force_oracle;

pub(crate) use enumerate::{enumerate_counts, split_bits};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Council, Criterion, CriterionKind, VotingRule};
use crate::rational_serde;

/// Largest council the exact backends accept.
pub const MAX_EXACT_MEMBERS: usize = 30;
/// Largest council the brute-force oracle accepts.
pub const MAX_ORACLE_MEMBERS: usize = 15;

/// Which code path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerBackend {
    Enumeration,
    Dp,
    MonteCarlo,
    BruteForce,
}

/// Per-member power figures.
#[derive(Debug, Clone, Serialize)]
pub struct MemberPower {
    pub id: String,
    pub population: u64,
    /// Weight under the rule's first weighted (non-count) criterion,
    /// when it has one; this is the weight column of report exports.
    pub weight: Option<u64>,
    /// Exact backends: the total Banzhaf count, i.e. the number of
    /// coalitions `S` without this member where `S + member` wins and
    /// `S` loses. Monte Carlo: the raw count of sampled coalitions at
    /// which the member was decisive.
    pub tb: u64,
    /// Probability of being decisive under uniform coalitions.
    #[serde(with = "rational_serde")]
    pub nb: BigRational,
    /// Normalized Banzhaf index `tb / sum(tb)`.
    #[serde(with = "rational_serde")]
    pub beta: BigRational,
    /// Standard error of `nb` (Monte Carlo only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_stderr: Option<f64>,
}

/// Power distribution and decision efficiency for one rule instance.
#[derive(Debug, Clone, Serialize)]
pub struct PowerReport {
    pub backend: PowerBackend,
    pub members: Vec<MemberPower>,
    /// Fraction of all coalitions (including the empty and the grand
    /// coalition) that win: the Coleman power of the collectivity to act.
    #[serde(with = "rational_serde")]
    pub efficiency: BigRational,
    /// Sample count (Monte Carlo only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl PowerReport {
    pub fn member(&self, id: &str) -> Option<&MemberPower> {
        self.members.iter().find(|m| m.id == id)
    }

    pub fn total_banzhaf(&self) -> u64 {
        self.members.iter().map(|m| m.tb).sum()
    }

    /// Numeric equality across backends: same counts, indices, and
    /// efficiency, member for member.
    pub fn same_numbers(&self, other: &PowerReport) -> bool {
        self.members.len() == other.members.len()
            && self.efficiency == other.efficiency
            && self
                .members
                .iter()
                .zip(&other.members)
                .all(|(a, b)| a.id == b.id && a.tb == b.tb && a.nb == b.nb && a.beta == b.beta)
    }
}

/// Exact report via the preferred exact backend: the subset-sum DP when
/// the rule is eligible under the default memory budget, else full
/// enumeration. Requires `n <= 30`.
pub fn banzhaf_exact(council: &Council, rule: &VotingRule) -> Result<PowerReport> {
    rule.validate(council)?;
    check_exact_capacity(council)?;
    if dp_eligible(council, rule, DEFAULT_DP_TABLE_BYTES) {
        banzhaf_dp(council, rule)
    } else {
        banzhaf_enumeration(council, rule)
    }
}

pub(crate) fn check_exact_capacity(council: &Council) -> Result<()> {
    if council.n() > MAX_EXACT_MEMBERS {
        return Err(Error::Capacity {
            n: council.n(),
            max: MAX_EXACT_MEMBERS,
            backend: "exact",
            hint: "use banzhaf_monte_carlo for larger councils",
        });
    }
    Ok(())
}

/// Weight column for exports: the first non-count criterion's weights.
pub(crate) fn display_weights_for(council: &Council, rule: &VotingRule) -> Vec<Option<u64>> {
    let weighted: Option<&Criterion> = rule
        .criteria
        .iter()
        .find(|c| c.kind != CriterionKind::MemberCount);
    (0..council.n())
        .map(|i| weighted.and_then(|c| c.member_weight(council, i)))
        .collect()
}

/// Assembles a report from exact per-member swing counts and the number
/// of winning coalitions.
pub(crate) fn report_from_counts(
    council: &Council,
    rule: &VotingRule,
    backend: PowerBackend,
    tb: Vec<u64>,
    winning: u64,
) -> PowerReport {
    let n = council.n();
    debug_assert_eq!(tb.len(), n);
    let tb_sum: u64 = tb.iter().sum();
    let half_space = BigInt::from(1u8) << (n - 1);
    let full_space = BigInt::from(1u8) << n;
    let weights = display_weights_for(council, rule);
    let members = council
        .members()
        .iter()
        .zip(tb.iter())
        .zip(weights)
        .map(|((m, &tb_i), weight)| MemberPower {
            id: m.id.clone(),
            population: m.population,
            weight,
            tb: tb_i,
            nb: BigRational::new(BigInt::from(tb_i), half_space.clone()),
            beta: if tb_sum == 0 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(tb_i), BigInt::from(tb_sum))
            },
            mc_stderr: None,
        })
        .collect();
    PowerReport {
        backend,
        members,
        efficiency: BigRational::new(BigInt::from(winning), full_space),
        samples: None,
    }
}

/// Integer weight vector and inclusive absolute threshold for one
/// criterion; relative quotas are resolved against the council totals.
#[derive(Debug, Clone)]
pub(crate) struct CompiledCriterion {
    pub weights: Vec<u64>,
    pub threshold: u64,
}

impl CompiledCriterion {
    pub(crate) fn compile(council: &Council, criterion: &Criterion) -> Result<Self> {
        let total = criterion.total(council)?;
        let weights = (0..council.n())
            .map(|i| {
                criterion.member_weight(council, i).ok_or_else(|| {
                    Error::config(format!(
                        "member '{}' has no negotiated weight but the rule requires one",
                        council.member(i).id
                    ))
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(CompiledCriterion {
            weights,
            threshold: criterion.quota.threshold(total),
        })
    }
}

/// A rule lowered to integer sums for the hot enumeration loops.
#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub criteria: Vec<CompiledCriterion>,
    pub blocking_min: Option<u32>,
    pub n: usize,
}

impl CompiledRule {
    pub(crate) fn compile(council: &Council, rule: &VotingRule) -> Result<Self> {
        rule.validate(council)?;
        let criteria = rule
            .criteria
            .iter()
            .map(|c| CompiledCriterion::compile(council, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledRule {
            criteria,
            blocking_min: rule.blocking_minority_min,
            n: council.n(),
        })
    }

    #[inline]
    pub(crate) fn criteria_hold(&self, sums: &[u64]) -> bool {
        self.criteria
            .iter()
            .zip(sums)
            .all(|(c, &s)| s >= c.threshold)
    }

    #[inline]
    pub(crate) fn override_wins(&self, coalition_size: usize) -> bool {
        match self.blocking_min {
            Some(min) => ((self.n - coalition_size) as u32) < min,
            None => false,
        }
    }
}
