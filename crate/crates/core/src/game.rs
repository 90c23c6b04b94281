//! Councils, criteria, and composite voting rules with exact-arithmetic
//! quota semantics.
//!
//! A [`VotingRule`] is a conjunction of monotone weighted criteria. All
//! quota comparisons are inclusive (`sum >= threshold`) and evaluated with
//! exact integer arithmetic: relative quotas compare `sum * den >=
//! num * total` with no floating point anywhere in the decision path.
//! Square-root weights are fixed at four fractional digits and scaled to
//! integers, so even the irrational-weight rule family stays exact and
//! reproducible.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of fractional digits kept when a population square root is
/// turned into an integer voting weight.
pub const SQRT_WEIGHT_DIGITS: u32 = 4;

/// Multiplier implied by [`SQRT_WEIGHT_DIGITS`].
pub const SQRT_WEIGHT_SCALE: u64 = 10_000;

/// A voter: one council seat representing a member state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberState {
    /// Short unique key, e.g. `"DE"`.
    pub id: String,
    /// Display name.
    pub name: String,
    /// Population in persons, >= 1.
    pub population: u64,
    /// Negotiated voting weight, when the dataset carries one.
    pub nice_weight: Option<u64>,
}

impl MemberState {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        population: u64,
        nice_weight: Option<u64>,
    ) -> Self {
        MemberState {
            id: id.into(),
            name: name.into(),
            population,
            nice_weight,
        }
    }
}

/// An ordered council of member states. The member order is fixed on
/// construction and defines coalition bit positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Council {
    members: Vec<MemberState>,
    total_population: u64,
    total_nice_weight: Option<u64>,
    #[serde(skip)]
    sqrt_weights: Vec<u64>,
    #[serde(skip)]
    total_sqrt_weight: u64,
}

impl Council {
    /// Validates and builds a council: ids unique, populations >= 1,
    /// totals cached. `total_nice_weight` is present only when every
    /// member carries a negotiated weight.
    pub fn new(members: Vec<MemberState>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::config("a council needs at least one member"));
        }
        let mut seen = std::collections::HashSet::new();
        for m in &members {
            if m.id.is_empty() {
                return Err(Error::config("empty member id"));
            }
            if !seen.insert(m.id.as_str()) {
                return Err(Error::config(format!("duplicate member id '{}'", m.id)));
            }
            if m.population == 0 {
                return Err(Error::config(format!(
                    "member '{}' has population 0; populations must be >= 1",
                    m.id
                )));
            }
        }
        let mut total_population: u64 = 0;
        for m in &members {
            total_population = total_population
                .checked_add(m.population)
                .ok_or_else(|| Error::config("total population overflows u64"))?;
        }
        let total_nice_weight = members.iter().map(|m| m.nice_weight).sum::<Option<u64>>();
        let sqrt_weights: Vec<u64> = members
            .iter()
            .map(|m| sqrt_weight_scaled(m.population))
            .collect();
        let total_sqrt_weight = sqrt_weights.iter().sum();
        Ok(Council {
            members,
            total_population,
            total_nice_weight,
            sqrt_weights,
            total_sqrt_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[MemberState] {
        &self.members
    }

    pub fn member(&self, idx: usize) -> &MemberState {
        &self.members[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.id == id)
    }

    pub fn total_population(&self) -> u64 {
        self.total_population
    }

    pub fn total_nice_weight(&self) -> Option<u64> {
        self.total_nice_weight
    }

    /// Per-member square-root weights, scaled by [`SQRT_WEIGHT_SCALE`].
    pub fn sqrt_weights(&self) -> &[u64] {
        &self.sqrt_weights
    }

    pub fn total_sqrt_weight(&self) -> u64 {
        self.total_sqrt_weight
    }
}

/// `round(sqrt(population) * 10^4)` computed without floating point:
/// the nearest integer to `sqrt(population * 10^8)`.
pub fn sqrt_weight_scaled(population: u64) -> u64 {
    let x = population as u128 * (SQRT_WEIGHT_SCALE as u128).pow(2);
    let k = x.sqrt(); // floor
                      // Round up when x > k^2 + k, i.e. sqrt(x) > k + 1/2.
    if x > k * k + k {
        (k + 1) as u64
    } else {
        k as u64
    }
}

/// A coalition as an index set over the council's fixed member order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn all(n: usize) -> Coalition {
        debug_assert!(n <= 32);
        if n == 32 {
            Coalition(u32::MAX)
        } else {
            Coalition((1u32 << n) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> Coalition {
        let mut bits = 0u32;
        for &i in indices {
            debug_assert!(i < 32);
            bits |= 1 << i;
        }
        Coalition(bits)
    }

    pub fn contains(self, idx: usize) -> bool {
        self.0 & (1 << idx) != 0
    }

    pub fn insert(self, idx: usize) -> Coalition {
        Coalition(self.0 | (1 << idx))
    }

    pub fn remove(self, idx: usize) -> Coalition {
        Coalition(self.0 & !(1 << idx))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// A quota: either an absolute integer threshold or an exact fraction of
/// the criterion's total. Comparisons are inclusive in both forms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quota {
    Absolute { abs: u64 },
    Relative { num: u64, den: u64 },
}

impl Quota {
    pub fn absolute(abs: u64) -> Quota {
        Quota::Absolute { abs }
    }

    /// Relative quota `num/den`, required to lie in (0, 1].
    pub fn relative(num: u64, den: u64) -> Result<Quota> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::config(format!(
                "relative quota {num}/{den} must lie in (0, 1]"
            )));
        }
        Ok(Quota::Relative { num, den })
    }

    /// Smallest integer sum that satisfies the quota against `total`.
    pub fn threshold(self, total: u64) -> u64 {
        match self {
            Quota::Absolute { abs } => abs,
            Quota::Relative { num, den } => {
                // ceil(num * total / den), exact in u128.
                let prod = num as u128 * total as u128;
                prod.div_ceil(den as u128) as u64
            }
        }
    }

    /// Inclusive test `sum >= quota` against `total`, cross-multiplied.
    pub fn satisfied(self, sum: u64, total: u64) -> bool {
        match self {
            Quota::Absolute { abs } => sum >= abs,
            Quota::Relative { num, den } => {
                sum as u128 * den as u128 >= num as u128 * total as u128
            }
        }
    }
}

impl PartialEq for Quota {
    fn eq(&self, other: &Self) -> bool {
        use Quota::*;
        match (*self, *other) {
            (Absolute { abs: a }, Absolute { abs: b }) => a == b,
            (Relative { num: n1, den: d1 }, Relative { num: n2, den: d2 }) => {
                n1 as u128 * d2 as u128 == n2 as u128 * d1 as u128
            }
            _ => false,
        }
    }
}

impl Eq for Quota {}

/// What a criterion sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    /// Each member counts 1.
    MemberCount,
    /// Negotiated (treaty) weights.
    NegotiatedWeight,
    /// Raw populations.
    Population,
    /// Scaled square roots of populations.
    SqrtWeight,
}

impl CriterionKind {
    pub fn label(self) -> &'static str {
        match self {
            CriterionKind::MemberCount => "member_count",
            CriterionKind::NegotiatedWeight => "negotiated_weight",
            CriterionKind::Population => "population",
            CriterionKind::SqrtWeight => "sqrt_weight",
        }
    }
}

/// One weighted threshold condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub kind: CriterionKind,
    pub quota: Quota,
}

impl Criterion {
    pub fn new(kind: CriterionKind, quota: Quota) -> Criterion {
        Criterion { kind, quota }
    }

    /// Per-member weight under this criterion. `None` when the member
    /// lacks a negotiated weight.
    pub fn member_weight(&self, council: &Council, idx: usize) -> Option<u64> {
        match self.kind {
            CriterionKind::MemberCount => Some(1),
            CriterionKind::NegotiatedWeight => council.member(idx).nice_weight,
            CriterionKind::Population => Some(council.member(idx).population),
            CriterionKind::SqrtWeight => Some(council.sqrt_weights()[idx]),
        }
    }

    /// Criterion total over the whole council.
    pub fn total(&self, council: &Council) -> Result<u64> {
        match self.kind {
            CriterionKind::MemberCount => Ok(council.n() as u64),
            CriterionKind::NegotiatedWeight => council.total_nice_weight().ok_or_else(|| {
                let missing = council
                    .members()
                    .iter()
                    .find(|m| m.nice_weight.is_none())
                    .map(|m| m.id.clone())
                    .unwrap_or_default();
                Error::config(format!(
                    "member '{missing}' has no negotiated weight but the rule requires one"
                ))
            }),
            CriterionKind::Population => Ok(council.total_population()),
            CriterionKind::SqrtWeight => Ok(council.total_sqrt_weight()),
        }
    }

    fn coalition_sum(&self, council: &Council, coalition: Coalition) -> Result<u64> {
        let mut sum = 0u64;
        for idx in coalition.iter() {
            sum += self.member_weight(council, idx).ok_or_else(|| {
                Error::config(format!(
                    "member '{}' has no negotiated weight but the rule requires one",
                    council.member(idx).id
                ))
            })?;
        }
        Ok(sum)
    }
}

/// A conjunction of criteria, optionally with the blocking-minority
/// override: a coalition whose complement has fewer than
/// `blocking_minority_min` members wins regardless of the criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VotingRule {
    pub criteria: Vec<Criterion>,
    pub blocking_minority_min: Option<u32>,
}

impl VotingRule {
    pub fn new(criteria: Vec<Criterion>) -> Result<VotingRule> {
        if criteria.is_empty() {
            return Err(Error::config("a voting rule needs at least one criterion"));
        }
        Ok(VotingRule {
            criteria,
            blocking_minority_min: None,
        })
    }

    pub fn with_blocking_minority(mut self, min_members: u32) -> VotingRule {
        self.blocking_minority_min = Some(min_members);
        self
    }

    /// Checks that the rule is evaluable against `council` (weights
    /// present, quotas in range). Called by every backend up front.
    pub fn validate(&self, council: &Council) -> Result<()> {
        if self.criteria.is_empty() {
            return Err(Error::config("a voting rule needs at least one criterion"));
        }
        for c in &self.criteria {
            c.total(council)?;
            if let Quota::Relative { num, den } = c.quota {
                if den == 0 || num == 0 || num > den {
                    return Err(Error::config(format!(
                        "relative quota {num}/{den} must lie in (0, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exact win predicate. Deterministic and side-effect free.
    pub fn wins(&self, council: &Council, coalition: Coalition) -> Result<bool> {
        if let Some(min) = self.blocking_minority_min {
            let complement = council.n() - coalition.len();
            if (complement as u32) < min {
                return Ok(true);
            }
        }
        for c in &self.criteria {
            let total = c.total(council)?;
            let sum = c.coalition_sum(council, coalition)?;
            if !c.quota.satisfied(sum, total) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Convenience free function mirroring the rule method.
pub fn wins(rule: &VotingRule, council: &Council, coalition: Coalition) -> Result<bool> {
    rule.wins(council, coalition)
}

/// Triple-majority rule: negotiated-weight quota, member-count quota,
/// and a relative population quota.
pub fn make_nice_rule(
    council: &Council,
    weight_quota: u64,
    count_quota: u64,
    pop_quota: Quota,
) -> Result<VotingRule> {
    if count_quota == 0 {
        return Err(Error::config("count quota must be >= 1"));
    }
    require_relative(pop_quota, "population quota")?;
    for m in council.members() {
        if m.nice_weight.is_none() {
            return Err(Error::config(format!(
                "member '{}' has no negotiated weight but the rule requires one",
                m.id
            )));
        }
    }
    VotingRule::new(vec![
        Criterion::new(
            CriterionKind::NegotiatedWeight,
            Quota::absolute(weight_quota),
        ),
        Criterion::new(CriterionKind::MemberCount, Quota::absolute(count_quota)),
        Criterion::new(CriterionKind::Population, pop_quota),
    ])
}

/// Double-majority rule: member-count quota plus a relative population
/// quota, optionally with the blocking-minority-of-four clause.
pub fn make_lisbon_rule(
    count_quota: u64,
    pop_quota: Quota,
    with_blocking_clause: bool,
) -> Result<VotingRule> {
    if count_quota == 0 {
        return Err(Error::config("count quota must be >= 1"));
    }
    require_relative(pop_quota, "population quota")?;
    let rule = VotingRule::new(vec![
        Criterion::new(CriterionKind::MemberCount, Quota::absolute(count_quota)),
        Criterion::new(CriterionKind::Population, pop_quota),
    ])?;
    Ok(if with_blocking_clause {
        rule.with_blocking_minority(4)
    } else {
        rule
    })
}

/// Square-root-weight rule; with `with_count_majority` an additional
/// simple majority of members (`floor(n/2) + 1`) is required.
pub fn make_jc_rule(
    council: &Council,
    pop_quota: Quota,
    with_count_majority: bool,
) -> Result<VotingRule> {
    require_relative(pop_quota, "quota")?;
    let mut criteria = vec![Criterion::new(CriterionKind::SqrtWeight, pop_quota)];
    if with_count_majority {
        let majority = council.n() as u64 / 2 + 1;
        criteria.push(Criterion::new(
            CriterionKind::MemberCount,
            Quota::absolute(majority),
        ));
    }
    VotingRule::new(criteria)
}

fn require_relative(quota: Quota, what: &str) -> Result<()> {
    match quota {
        Quota::Relative { num, den } if num > 0 && num <= den && den > 0 => Ok(()),
        Quota::Relative { num, den } => Err(Error::config(format!(
            "{what} {num}/{den} must lie in (0, 1]"
        ))),
        Quota::Absolute { .. } => Err(Error::config(format!("{what} must be relative"))),
    }
}
