//! Exact a-priori voting power for composite weighted voting rules.
//!
//! The crate models councils of weighted voters, conjunctive voting
//! rules (count, negotiated-weight, population, and square-root-weight
//! quotas), and computes:
//!
//! * exact total Banzhaf counts, Banzhaf indices, and decision
//!   efficiency ([`power`]), with enumeration, subset-sum DP, and
//!   seeded Monte Carlo backends plus a naive cross-validation oracle;
//! * the square-root (Penrose) benchmark, error rates, and relative
//!   power deviations ([`fairness`]);
//! * quota-grid sweeps with error-minimizing and efficiency-constrained
//!   tuple selection ([`sweep`]);
//! * dataset ingestion and bit-stable CSV/JSON report exports
//!   ([`data`]), including the embedded EU-27 (EUROSTAT 2008) council.
//!
//! All quota decisions and power figures are exact: integer
//! cross-multiplied comparisons in the rules, integer swing counts in
//! the backends, and arbitrary-precision rationals in the derived
//! indices. Floating point appears only in renderings and estimates.

pub mod data;
pub mod decimal;
mod error;
pub mod fairness;
pub mod game;
pub mod power;
pub(crate) mod rational_serde;
pub mod sweep;

pub use error::{Error, Result};
pub use fairness::{
    assess, error_rate, ideal_distribution, max_relative_deviation, sz_quota, FairnessAssessment,
    IdealDistribution,
};
pub use game::{
    make_jc_rule, make_lisbon_rule, make_nice_rule, wins, Coalition, Council, Criterion,
    CriterionKind, MemberState, Quota, VotingRule,
};
pub use power::{
    banzhaf_dp, banzhaf_dp_with_budget, banzhaf_enumeration, banzhaf_exact, banzhaf_monte_carlo,
    brute_force_oracle, MemberPower, PowerBackend, PowerReport,
};
pub use sweep::{
    run_sweep, run_sweep_with_progress, IntRange, QuotaGrid, RuleFamily, SweepDim, SweepGrid,
    SweepMode, SweepResult, SweepRow,
};
