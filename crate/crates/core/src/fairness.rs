//! Square-root benchmark and deviation metrics.
//!
//! The ideal power share of a member with population `N` is
//! `sqrt(N) / sum(sqrt(N_j))`, evaluated on the same four-digit rounded
//! square roots that back the square-root-weight criterion, so voting
//! weights and the fairness benchmark coincide exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Council;
use crate::power::PowerReport;
use crate::rational_serde;

/// The square-root ideal: per-member target power shares.
#[derive(Debug, Clone)]
pub struct IdealDistribution {
    ids: Vec<String>,
    /// Scaled integer square roots, the shares' numerators.
    pub scaled_roots: Vec<u64>,
    /// Sum of the scaled roots, the shares' common denominator.
    pub total: u64,
}

impl IdealDistribution {
    pub fn share(&self, idx: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.scaled_roots[idx]),
            BigInt::from(self.total),
        )
    }

    pub fn shares(&self) -> impl Iterator<Item = BigRational> + '_ {
        (0..self.ids.len()).map(|i| self.share(i))
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

/// Per-member ideal shares; they sum to exactly 1.
pub fn ideal_distribution(council: &Council) -> IdealDistribution {
    IdealDistribution {
        ids: council.members().iter().map(|m| m.id.clone()).collect(),
        scaled_roots: council.sqrt_weights().to_vec(),
        total: council.total_sqrt_weight(),
    }
}

/// Error rate: the sum over members of squared share deviations
/// `(beta0_i - beta_i)^2`. Render per mille by scaling with 1000.
pub fn error_rate(report: &PowerReport, ideal: &IdealDistribution) -> Result<BigRational> {
    check_members(report, ideal)?;
    let betas: Vec<BigRational> = report.members.iter().map(|m| m.beta.clone()).collect();
    Ok(error_rate_of_betas(&betas, ideal))
}

/// Largest relative deviation `|beta0_i - beta_i| / beta0_i` and the
/// member attaining it.
pub fn max_relative_deviation(
    report: &PowerReport,
    ideal: &IdealDistribution,
) -> Result<(BigRational, String)> {
    check_members(report, ideal)?;
    let betas: Vec<BigRational> = report.members.iter().map(|m| m.beta.clone()).collect();
    let (dev, idx) = max_relative_deviation_of_betas(&betas, ideal);
    Ok((dev, report.members[idx].id.clone()))
}

/// Shared formula core, also driven by the sweep kernels.
pub(crate) fn error_rate_of_betas(betas: &[BigRational], ideal: &IdealDistribution) -> BigRational {
    let mut sum = BigRational::zero();
    for (beta, share) in betas.iter().zip(ideal.shares()) {
        let diff = share - beta;
        sum += &diff * &diff;
    }
    sum
}

pub(crate) fn max_relative_deviation_of_betas(
    betas: &[BigRational],
    ideal: &IdealDistribution,
) -> (BigRational, usize) {
    let mut best = (BigRational::zero(), 0);
    for (idx, (beta, share)) in betas.iter().zip(ideal.shares()).enumerate() {
        let dev = ((&share - beta) / &share).abs();
        if idx == 0 || dev > best.0 {
            best = (dev, idx);
        }
    }
    best
}

/// One member's target vs. achieved share.
#[derive(Debug, Clone, Serialize)]
pub struct MemberFairness {
    pub id: String,
    pub population: u64,
    #[serde(with = "rational_serde")]
    pub ideal_share: BigRational,
    #[serde(with = "rational_serde")]
    pub beta: BigRational,
    /// Signed relative deviation `(beta0 - beta) / beta0`; positive
    /// means the member holds less power than the ideal grants it.
    #[serde(with = "rational_serde")]
    pub relative_deviation: BigRational,
}

/// Benchmark comparison for one power report.
#[derive(Debug, Clone, Serialize)]
pub struct FairnessAssessment {
    /// Sum of squared share deviations (dimensionless fraction).
    #[serde(with = "rational_serde")]
    pub error_rate: BigRational,
    /// Magnitude of the largest relative deviation.
    #[serde(with = "rational_serde")]
    pub max_relative_deviation: BigRational,
    pub max_relative_deviation_member: String,
    pub members: Vec<MemberFairness>,
}

/// Full assessment: error rate, deviation maximum, per-member series.
pub fn assess(report: &PowerReport, ideal: &IdealDistribution) -> Result<FairnessAssessment> {
    check_members(report, ideal)?;
    let members: Vec<MemberFairness> = report
        .members
        .iter()
        .zip(ideal.shares())
        .map(|(member, share)| {
            let relative_deviation = (&share - &member.beta) / &share;
            MemberFairness {
                id: member.id.clone(),
                population: member.population,
                ideal_share: share,
                beta: member.beta.clone(),
                relative_deviation,
            }
        })
        .collect();
    let error_rate = error_rate(report, ideal)?;
    let (max_relative_deviation, max_relative_deviation_member) =
        max_relative_deviation(report, ideal)?;
    Ok(FairnessAssessment {
        error_rate,
        max_relative_deviation,
        max_relative_deviation_member,
        members,
    })
}

/// Closed-form approximation of the error-minimizing quota for
/// square-root weights: `(1 + sqrt(sum N) / sum(sqrt N)) / 2`.
pub fn sz_quota(council: &Council) -> f64 {
    let total: f64 = council.total_population() as f64;
    let root_sum: f64 = council
        .members()
        .iter()
        .map(|m| (m.population as f64).sqrt())
        .sum();
    0.5 * (1.0 + total.sqrt() / root_sum)
}

fn check_members(report: &PowerReport, ideal: &IdealDistribution) -> Result<()> {
    if report.members.len() != ideal.ids().len()
        || report
            .members
            .iter()
            .zip(ideal.ids())
            .any(|(m, id)| m.id != *id)
    {
        return Err(Error::MemberMismatch(
            "report and ideal distribution cover different members".into(),
        ));
    }
    for (member, share) in report.members.iter().zip(ideal.shares()) {
        if share.is_zero() {
            return Err(Error::MemberMismatch(format!(
                "member '{}' has a zero ideal share",
                member.id
            )));
        }
    }
    Ok(())
}
