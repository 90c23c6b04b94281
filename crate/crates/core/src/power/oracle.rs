//! Naive validation oracle.
//!
//! Counts swings exactly as defined: for each member, for each subset of
//! the other members, evaluate the rule twice through the public
//! [`VotingRule::wins`] predicate. No incremental sums, no Gray code, no
//! shared kernels — this is the independent reference the optimized
//! backends are checked against.

use crate::error::{Error, Result};
use crate::game::{Coalition, Council, VotingRule};
use crate::power::{report_from_counts, PowerBackend, PowerReport, MAX_ORACLE_MEMBERS};

pub fn brute_force_oracle(council: &Council, rule: &VotingRule) -> Result<PowerReport> {
    rule.validate(council)?;
    let n = council.n();
    if n > MAX_ORACLE_MEMBERS {
        return Err(Error::Capacity {
            n,
            max: MAX_ORACLE_MEMBERS,
            backend: "brute-force oracle",
            hint: "the oracle is for cross-validation on small games only",
        });
    }

    let mut tb = vec![0u64; n];
    for (i, count) in tb.iter_mut().enumerate() {
        let below = (1u32 << i) - 1;
        for sub in 0u32..1u32 << (n - 1) {
            // Spread `sub` over the positions other than i.
            let others = (sub & below) | ((sub & !below) << 1);
            let without = Coalition(others);
            let with = without.insert(i);
            if rule.wins(council, with)? && !rule.wins(council, without)? {
                *count += 1;
            }
        }
    }

    let mut winning = 0u64;
    for bits in 0u32..1u32 << n {
        if rule.wins(council, Coalition(bits))? {
            winning += 1;
        }
    }

    Ok(report_from_counts(
        council,
        rule,
        PowerBackend::BruteForce,
        tb,
        winning,
    ))
}
