//! Seeded Monte Carlo estimation over uniform random coalitions.
//!
//! Sampling is split into a fixed number of batches; batch `b` draws
//! from a ChaCha stream derived from the master seed and the batch
//! index, and batch tallies merge by integer addition. Results are
//! therefore bit-identical for a fixed seed regardless of how many
//! workers run the batches.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Council, VotingRule};
use crate::power::{display_weights_for, CompiledRule, MemberPower, PowerBackend, PowerReport};

/// Coalitions are drawn batch-by-batch on this fixed grid.
const BATCHES: u64 = 1024;

/// Unbiased estimates of decisiveness probabilities and efficiency from
/// `samples` uniform random coalitions. Deterministic for a fixed seed.
pub fn banzhaf_monte_carlo(
    council: &Council,
    rule: &VotingRule,
    samples: u64,
    seed: u64,
) -> Result<PowerReport> {
    if samples == 0 {
        return Err(Error::config("monte carlo needs at least one sample"));
    }
    let n = council.n();
    if n > 32 {
        return Err(Error::Capacity {
            n,
            max: 32,
            backend: "monte carlo",
            hint: "coalition masks are 32-bit",
        });
    }
    let compiled = CompiledRule::compile(council, rule)?;

    let batches = BATCHES.min(samples);
    let base = samples / batches;
    let remainder = samples % batches;

    let tallies = (0..batches)
        .into_par_iter()
        .fold(
            || Tally::new(n),
            |mut acc, batch| {
                let batch_samples = base + u64::from(batch < remainder);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(batch);
                sample_batch(&compiled, &mut rng, batch_samples, &mut acc);
                acc
            },
        )
        .reduce(|| Tally::new(n), Tally::merge);

    Ok(report_from_tallies(council, rule, tallies, samples))
}

struct Tally {
    decisive: Vec<u64>,
    winning: u64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            decisive: vec![0; n],
            winning: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Self {
        for (a, b) in self.decisive.iter_mut().zip(other.decisive) {
            *a += b;
        }
        self.winning += other.winning;
        self
    }
}

fn sample_batch(compiled: &CompiledRule, rng: &mut ChaCha8Rng, samples: u64, acc: &mut Tally) {
    let n = compiled.n;
    let mask_all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let k = compiled.criteria.len();
    let mut sums = vec![0u64; k];
    for _ in 0..samples {
        let bits = rng.next_u32() & mask_all;
        let size = bits.count_ones() as usize;
        for (slot, criterion) in sums.iter_mut().zip(&compiled.criteria) {
            let mut s = 0u64;
            let mut m = bits;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                s += criterion.weights[i];
                m &= m - 1;
            }
            *slot = s;
        }
        let wins_here = compiled.criteria_hold(&sums) || compiled.override_wins(size);
        if wins_here {
            acc.winning += 1;
        }
        // A member is decisive at sample S when S + member wins and
        // S - member loses; under uniform sampling the hit rate
        // estimates NB directly.
        for i in 0..n {
            let in_s = bits & (1 << i) != 0;
            let (with_size, without_size) = if in_s {
                (size, size - 1)
            } else {
                (size + 1, size)
            };
            let wins_with = compiled.override_wins(with_size)
                || compiled
                    .criteria
                    .iter()
                    .zip(&sums)
                    .all(|(c, &s)| s + if in_s { 0 } else { c.weights[i] } >= c.threshold);
            if !wins_with {
                continue;
            }
            let wins_without = compiled.override_wins(without_size)
                || compiled
                    .criteria
                    .iter()
                    .zip(&sums)
                    .all(|(c, &s)| s - if in_s { c.weights[i] } else { 0 } >= c.threshold);
            if !wins_without {
                acc.decisive[i] += 1;
            }
        }
    }
}

fn report_from_tallies(
    council: &Council,
    rule: &VotingRule,
    tally: Tally,
    samples: u64,
) -> PowerReport {
    let decisive_sum: u64 = tally.decisive.iter().sum();
    let weights = display_weights_for(council, rule);
    let m_big = BigInt::from(samples);
    let members = council
        .members()
        .iter()
        .zip(&tally.decisive)
        .zip(weights)
        .map(|((member, &hits), weight)| {
            let p = hits as f64 / samples as f64;
            MemberPower {
                id: member.id.clone(),
                population: member.population,
                weight,
                tb: hits,
                nb: BigRational::new(BigInt::from(hits), m_big.clone()),
                beta: if decisive_sum == 0 {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::from(hits), BigInt::from(decisive_sum))
                },
                mc_stderr: Some((p * (1.0 - p) / samples as f64).sqrt()),
            }
        })
        .collect();
    PowerReport {
        backend: PowerBackend::MonteCarlo,
        members,
        efficiency: BigRational::new(BigInt::from(tally.winning), m_big),
        samples: Some(samples),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Criterion, CriterionKind, MemberState, Quota};
    use crate::power::banzhaf_enumeration;
    use num_traits::ToPrimitive;

    fn weighted_council(weights: &[u64]) -> Council {
        let members = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| MemberState::new(format!("M{i}"), format!("M{i}"), 1 + w, Some(w)))
            .collect();
        Council::new(members).unwrap()
    }

    fn weight_rule(quota: u64) -> VotingRule {
        VotingRule::new(vec![Criterion::new(
            CriterionKind::NegotiatedWeight,
            Quota::absolute(quota),
        )])
        .unwrap()
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let council = weighted_council(&[5, 3, 2, 1, 1]);
        let rule = weight_rule(7);
        let a = banzhaf_monte_carlo(&council, &rule, 20_000, 7).unwrap();
        let b = banzhaf_monte_carlo(&council, &rule, 20_000, 7).unwrap();
        assert!(a.same_numbers(&b));
        let c = banzhaf_monte_carlo(&council, &rule, 20_000, 8).unwrap();
        assert!(!c.same_numbers(&a));
    }

    #[test]
    fn estimates_land_near_exact_values() {
        let council = weighted_council(&[1, 1, 1]);
        let rule = weight_rule(2);
        let exact = banzhaf_enumeration(&council, &rule).unwrap();
        let mc = banzhaf_monte_carlo(&council, &rule, 1_000_000, 42).unwrap();
        for (est, truth) in mc.members.iter().zip(&exact.members) {
            let err = (est.nb.to_f64().unwrap() - truth.nb.to_f64().unwrap()).abs();
            assert!(err <= 3.0 * est.mc_stderr.unwrap(), "err {err}");
        }
        let eff_err = (mc.efficiency.to_f64().unwrap() - exact.efficiency.to_f64().unwrap()).abs();
        assert!(eff_err < 3.0 * (0.5 / (1_000_000.0f64).sqrt()));
    }

    #[test]
    fn rejects_zero_samples() {
        let council = weighted_council(&[1, 1, 1]);
        assert!(banzhaf_monte_carlo(&council, &weight_rule(2), 0, 1).is_err());
    }
}
