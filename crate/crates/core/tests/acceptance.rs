//! Acceptance suite: reproduces every published figure the engine is
//! specified against, one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them).
//!
//! Two assertions are expected to stay red; both trace to defects in the
//! source material, not in the engine, and each failure message carries
//! the full analysis:
//! * `criterion_06`: one of the 26 published reference rows (weight 200) prints a
//!   population quota of 0.56 while its three metric columns are exactly
//!   the values of quota 0.57 — a misprinted quota cell. The other 25
//!   rows and the sweep argmin reproduce exactly.
//! * `criterion_08`: the published "compromise" tuples are not the
//!   error-minimizing tuples under their own efficiency floors; strictly
//!   better feasible tuples exist in the published reference grid itself, so
//!   no floor-constrained argmin can select them. The metrics *at* the
//!   published compromise tuples reproduce exactly.

use banzhaf::*;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::time::{Duration, Instant};

const EU27_IDS: [&str; 27] = [
    "DE", "FR", "UK", "IT", "ES", "PL", "RO", "NL", "GR", "BE", "PT", "CZ", "HU", "SE", "AT", "BG",
    "DK", "SK", "FI", "IE", "LT", "LV", "SI", "EE", "CY", "LU", "MT",
];

/// Published Banzhaf-index column (percent) for the square-root rule at 61.5%.
const SQRT_RULE_BETAS: [f64; 27] = [
    9.3978, 8.2933, 8.1254, 8.0214, 6.9924, 6.4141, 4.8175, 4.2038, 3.4746, 3.3885, 3.3807, 3.3428,
    3.2881, 3.1437, 2.9939, 2.8671, 2.4269, 2.4100, 2.3876, 2.1801, 1.9025, 1.5623, 1.4757, 1.2003,
    0.9241, 0.7210, 0.6642,
];

/// Published Banzhaf-index column for the triple-majority rule 255/14/62%.
const NICE_RULE_BETAS: [f64; 27] = [
    7.7828, 7.7828, 7.7827, 7.7827, 7.4199, 7.4198, 4.2591, 3.974, 3.6843, 3.6843, 3.6843, 3.6843,
    3.6843, 3.0924, 3.0924, 3.0924, 2.1809, 2.1809, 2.1809, 2.1809, 2.1809, 1.2502, 1.2502, 1.2502,
    1.2502, 1.2502, 0.9422,
];

/// Published Banzhaf-index column for the double-majority rule 15/65%.
const LISBON_RULE_BETAS: [f64; 27] = [
    11.5362, 9.0667, 8.7322, 8.5360, 6.6893, 5.6050, 4.1306, 3.4952, 2.8747, 2.8092, 2.8033,
    2.7750, 2.7349, 2.6321, 2.5302, 2.4478, 2.1891, 2.1803, 2.1681, 2.0625, 1.9362, 1.8044, 1.7747,
    1.6920, 1.6260, 1.5886, 1.5796,
];

/// Published per-slice reference rows for the triple-majority family:
/// (weight quota, population quota in cents, sigma^2 in per mille,
/// max relative deviation %, efficiency %); count quota fixed at 14.
const NICE_REFERENCE_ROWS: [(u64, u64, f64, f64, f64); 26] = [
    (190, 54, 0.5192, 142.08, 27.74),
    (195, 55, 0.3966, 118.83, 25.27),
    (200, 56, 0.3388, 95.61, 22.11),
    (205, 58, 0.3367, 83.65, 19.47),
    (210, 59, 0.3646, 75.48, 16.85),
    (215, 60, 0.3913, 68.49, 14.33),
    (220, 61, 0.4099, 63.33, 11.97),
    (225, 63, 0.4096, 57.66, 9.65),
    (230, 64, 0.4117, 58.76, 7.79),
    (235, 66, 0.4143, 58.91, 6.11),
    (240, 67, 0.4188, 61.38, 4.77),
    (245, 72, 0.4077, 49.53, 3.45),
    (250, 74, 0.3469, 49.47, 2.55),
    (255, 62, 0.6052, 73.18, 2.03),
    (255, 77, 0.3016, 45.76, 1.76),
    (258, 62, 0.6373, 74.58, 1.66),
    (258, 78, 0.2620, 46.73, 1.44),
    (259, 79, 0.2515, 40.34, 1.30),
    (260, 79, 0.2391, 43.76, 1.23),
    (261, 79, 0.2373, 47.85, 1.17),
    (262, 80, 0.2372, 39.38, 1.04),
    (263, 80, 0.2286, 42.90, 0.99),
    (264, 80, 0.2318, 47.58, 0.93),
    (265, 80, 0.2445, 51.09, 0.88),
    (270, 82, 0.2762, 49.75, 0.58),
    (275, 84, 0.3587, 61.37, 0.38),
];

/// Published per-slice reference rows for the double-majority family:
/// (count quota, population quota in per mille, sigma^2, max dev %, eff %).
const LISBON_REFERENCE_ROWS: [(u64, u64, f64, f64, f64); 8] = [
    (14, 555, 1.08417, 173.55, 28.33),
    (14, 600, 1.83319, 116.39, 21.89),
    (15, 618, 1.07222, 180.26, 16.13),
    (15, 650, 1.24384, 137.53, 12.83),
    (15, 675, 1.59748, 106.62, 10.36),
    (16, 698, 0.83352, 161.88, 6.74),
    (17, 775, 0.52118, 135.51, 2.23),
    (18, 823, 0.75088, 163.24, 0.78),
];

fn eu27() -> Council {
    data::builtin_eu27()
}

fn pct(r: &BigRational) -> f64 {
    r.to_f64().unwrap() * 100.0
}

fn per_mille(r: &BigRational) -> f64 {
    r.to_f64().unwrap() * 1000.0
}

fn jc_rule(council: &Council, num: u64, majority: bool) -> VotingRule {
    make_jc_rule(council, Quota::relative(num, 1000).unwrap(), majority).unwrap()
}

fn nice_rule(council: &Council) -> VotingRule {
    make_nice_rule(council, 255, 14, Quota::relative(62, 100).unwrap()).unwrap()
}

fn lisbon_rule() -> VotingRule {
    make_lisbon_rule(15, Quota::relative(65, 100).unwrap(), false).unwrap()
}

fn nice_sweep(council: &Council) -> SweepResult {
    let grid = SweepGrid {
        family: RuleFamily::Nice,
        count_quotas: Some(IntRange::single(14)),
        weight_quotas: Some(IntRange::new(190, 275, 1).unwrap()),
        pop_quotas: QuotaGrid::new(51, 85, 1, 100).unwrap(),
    };
    run_sweep(council, &grid, SweepMode::Shared).unwrap()
}

fn lisbon_sweep(council: &Council) -> SweepResult {
    let grid = SweepGrid {
        family: RuleFamily::Lisbon,
        count_quotas: Some(IntRange::new(14, 18, 1).unwrap()),
        weight_quotas: None,
        pop_quotas: QuotaGrid::new(510, 850, 1, 1000).unwrap(),
    };
    run_sweep(council, &grid, SweepMode::Shared).unwrap()
}

fn pass(criterion: u32, name: &str) {
    println!("ACCEPTANCE {criterion:2} {name}: PASS");
}

#[test]
fn criterion_01_sqrt_rule_betas_and_runtime() {
    let council = eu27();
    let rule = jc_rule(&council, 615, false);

    let start = Instant::now();
    let parallel = banzhaf_exact(&council, &rule).unwrap();
    let parallel_elapsed = start.elapsed();

    let single_pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let single = single_pool.install(|| banzhaf_exact(&council, &rule).unwrap());
    let single_elapsed = start.elapsed();
    assert!(single.same_numbers(&parallel));

    for ((member, id), printed) in parallel.members.iter().zip(EU27_IDS).zip(SQRT_RULE_BETAS) {
        assert_eq!(member.id, id);
        let got = pct(&member.beta);
        assert!(
            (got - printed).abs() <= 0.001,
            "beta mismatch for {id}: computed {got:.4}%, published value {printed}%"
        );
    }
    assert!(
        single_elapsed <= Duration::from_secs(600),
        "single-core run took {single_elapsed:?}, budget 10 min"
    );
    assert!(
        parallel_elapsed <= Duration::from_secs(120),
        "parallel run took {parallel_elapsed:?}, budget 2 min"
    );
    pass(
        1,
        &format!(
            "square-root rule betas within 0.001pp (single core {single_elapsed:.2?}, parallel {parallel_elapsed:.2?})"
        ),
    );
}

#[test]
fn criterion_02_treaty_rule_betas() {
    let council = eu27();
    let nice = banzhaf_exact(&council, &nice_rule(&council)).unwrap();
    for ((member, id), printed) in nice.members.iter().zip(EU27_IDS).zip(NICE_RULE_BETAS) {
        let got = pct(&member.beta);
        assert!(
            (got - printed).abs() <= 0.001,
            "nice beta mismatch for {id}: computed {got:.4}%, published value {printed}%"
        );
    }
    let lisbon = banzhaf_exact(&council, &lisbon_rule()).unwrap();
    for ((member, id), printed) in lisbon.members.iter().zip(EU27_IDS).zip(LISBON_RULE_BETAS) {
        let got = pct(&member.beta);
        assert!(
            (got - printed).abs() <= 0.001,
            "lisbon beta mismatch for {id}: computed {got:.4}%, published value {printed}%"
        );
    }
    pass(
        2,
        "treaty rule betas (both treaties, 54 values) within 0.001pp",
    );
}

#[test]
fn criterion_03_efficiencies() {
    let council = eu27();
    let cases: [(&str, VotingRule, f64); 5] = [
        ("nice 255/14/62%", nice_rule(&council), 2.03),
        ("lisbon 15/65%", lisbon_rule(), 12.83),
        ("sqrt 61.5%", jc_rule(&council, 615, false), 16.43),
        ("sqrt+majority 61.5%", jc_rule(&council, 615, true), 16.08),
        ("sqrt+majority 64.7%", jc_rule(&council, 647, true), 10.39),
    ];
    for (label, rule, printed) in cases {
        let report = banzhaf_exact(&council, &rule).unwrap();
        let got = pct(&report.efficiency);
        assert!(
            (got - printed).abs() <= 0.01,
            "{label}: efficiency {got:.4}% vs printed {printed}%"
        );
    }
    pass(3, "efficiencies of all five rule instances within 0.01pp");
}

#[test]
fn criterion_04_fairness_metrics() {
    let council = eu27();
    let ideal = ideal_distribution(&council);
    // (rule, sigma2 per mille, sigma2 print step, max dev %, dev print step)
    let cases: [(&str, VotingRule, f64, f64, f64, f64); 3] = [
        ("nice", nice_rule(&council), 0.6052, 0.0001, 73.18, 0.01),
        ("lisbon", lisbon_rule(), 1.24384, 0.00001, 137.53, 0.01),
        (
            "sqrt 61.5%",
            jc_rule(&council, 615, false),
            0.00005,
            0.00001,
            0.14,
            0.01,
        ),
    ];
    for (label, rule, sigma2_printed, sigma2_step, dev_printed, dev_step) in cases {
        let report = banzhaf_exact(&council, &rule).unwrap();
        let assessment = assess(&report, &ideal).unwrap();
        let sigma2 = per_mille(&assessment.error_rate);
        let sigma2_tol = (0.005 * sigma2_printed).max(sigma2_step);
        assert!(
            (sigma2 - sigma2_printed).abs() <= sigma2_tol,
            "{label}: sigma2 {sigma2:.6} vs printed {sigma2_printed}"
        );
        let dev = pct(&assessment.max_relative_deviation);
        let dev_tol = (0.005 * dev_printed).max(dev_step);
        assert!(
            (dev - dev_printed).abs() <= dev_tol,
            "{label}: max deviation {dev:.4}% vs printed {dev_printed}%"
        );
    }
    pass(
        4,
        "error rates and max deviations for nice/lisbon/sqrt rules",
    );
}

#[test]
fn criterion_05_sz_quota() {
    let council = eu27();
    let quota = sz_quota(&council) * 100.0;
    assert!(
        (quota - 61.57).abs() <= 0.005,
        "closed-form quota {quota:.4}% vs printed 61.57%"
    );
    pass(
        5,
        &format!("closed-form optimal quota {quota:.4}% = 61.57 +- 0.005"),
    );
}

#[test]
fn criterion_06_nice_reference_rows_and_argmin() {
    let council = eu27();
    let result = nice_sweep(&council);

    let best = result.optimize_error().unwrap();
    assert_eq!(
        (best.count_quota, best.weight_quota, best.pop_quota_num),
        (Some(14), Some(263), 80),
        "full-sweep argmin should be (14, 263, 80%)"
    );

    let mut mismatches = Vec::new();
    for (weight, pop_cents, sigma2_p, dev_p, eff_p) in NICE_REFERENCE_ROWS {
        let row = result.find(Some(14), Some(weight), pop_cents, 100).unwrap();
        let sigma2 = per_mille(&row.sigma2);
        let dev = pct(&row.max_deviation);
        let eff = pct(&row.efficiency);
        if (sigma2 - sigma2_p).abs() > 0.0001
            || (dev - dev_p).abs() > 0.01
            || (eff - eff_p).abs() > 0.01
        {
            mismatches.push(format!(
                "(14/{weight}/0.{pop_cents:02}): computed sigma2={sigma2:.4} dev={dev:.2} \
                 eff={eff:.2}, printed {sigma2_p}/{dev_p}/{eff_p}"
            ));
        }
    }
    assert!(
        mismatches.is_empty(),
        "ACCEPTANCE  6: FAIL on {}/26 rows: {:?}\n\
         Analysis: the weight-200 reference row prints population quota 0,56 \
         but carries the metrics of quota 0,57 — recomputing at (14/200/0.57) \
         gives sigma2=0.3388, dev=95.61, eff=22.11, matching all three printed \
         values to every digit, and 0.57 is the per-slice optimal population \
         quota for weight 200 (which is what the reference table tabulates). The \
         printed quota cell is a misprint in the source table; the other 25 \
         rows and the argmin reproduce exactly.",
        mismatches.len(),
        mismatches
    );
    pass(
        6,
        "all 26 reference rows at printed tuples; argmin (14, 263, 80%)",
    );
}

#[test]
fn criterion_07_lisbon_reference_rows_and_argmin() {
    let council = eu27();
    let result = lisbon_sweep(&council);
    for (count, pop_milli, sigma2_p, dev_p, eff_p) in LISBON_REFERENCE_ROWS {
        let row = result.find(Some(count), None, pop_milli, 1000).unwrap();
        let sigma2 = per_mille(&row.sigma2);
        let dev = pct(&row.max_deviation);
        let eff = pct(&row.efficiency);
        assert!(
            (sigma2 - sigma2_p).abs() <= 0.00001 + 1e-9,
            "({count}/0.{pop_milli}): sigma2 {sigma2:.5} vs printed {sigma2_p}"
        );
        assert!(
            (dev - dev_p).abs() <= 0.01,
            "({count}/0.{pop_milli}): dev {dev:.2} vs printed {dev_p}"
        );
        assert!(
            (eff - eff_p).abs() <= 0.01,
            "({count}/0.{pop_milli}): eff {eff:.4} vs printed {eff_p}"
        );
    }
    let best = result.optimize_error().unwrap();
    assert_eq!(
        (best.count_quota, best.pop_quota_num),
        (Some(17), 775),
        "full-sweep argmin should be (17, 77.5%)"
    );
    pass(
        7,
        "all 8 reference rows for the double majority; argmin (17, 77.5%)",
    );
}

#[test]
fn criterion_08_compromise_search() {
    let council = eu27();
    let nice = nice_sweep(&council);
    let lisbon = lisbon_sweep(&council);

    // The published compromise tuples themselves reproduce exactly.
    let nice_at = nice.find(Some(14), Some(220), 66, 100).unwrap();
    let nice_sigma2 = per_mille(&nice_at.sigma2);
    assert!(
        (nice_sigma2 - 1.07).abs() <= 0.01 * 1.07,
        "sigma2 at (14/220/66%) is {nice_sigma2:.4}, published 1.07"
    );
    let lisbon_at = lisbon.find(Some(15), None, 675, 1000).unwrap();
    let lisbon_sigma2 = per_mille(&lisbon_at.sigma2);
    assert!(
        (lisbon_sigma2 - 1.5975).abs() <= 0.01 * 1.5975,
        "sigma2 at (15/67.5%) is {lisbon_sigma2:.5}, published 1.5975"
    );

    // Floor-constrained error minimization over the full grids.
    let nice_floor = BigRational::new(1039.into(), 10000.into());
    let nice_pick = nice.optimize_with_efficiency_floor(&nice_floor).unwrap();
    let lisbon_floor = BigRational::new(1036.into(), 10000.into());
    let lisbon_pick = lisbon
        .optimize_with_efficiency_floor(&lisbon_floor)
        .unwrap();

    let nice_tuple = (
        nice_pick.count_quota,
        nice_pick.weight_quota,
        nice_pick.pop_quota_num,
    );
    let lisbon_tuple = (lisbon_pick.count_quota, lisbon_pick.pop_quota_num);
    assert!(
        nice_tuple == (Some(14), Some(220), 66) && lisbon_tuple == (Some(15), 675),
        "ACCEPTANCE  8: FAIL — the floors select {:?} (sigma2 {:.4}, eff {:.2}%) and \
         {:?} (sigma2 {:.5}, eff {:.2}%), not the published compromise tuples \
         (14/220/66%) and (15/67.5%).\n\
         Analysis: the published compromises are not floor-constrained error \
         minima. The published reference grid itself contains feasible tuples that \
         strictly dominate them — e.g. (14/205/0.58) with sigma2 0.3367 and \
         efficiency 19.47% >= 10.39%, and (15/0.618) with sigma2 1.07222 and \
         efficiency 16.13% >= 10.36% — so any argmin of sigma2 subject to an \
         efficiency floor must return something better than the published \
         picks, which were chosen by hand near the efficiency target. The \
         metrics at the published tuples do reproduce (asserted above: 1.0755 \
         and 1.59748 per mille).",
        nice_tuple,
        per_mille(&nice_pick.sigma2),
        pct(&nice_pick.efficiency),
        lisbon_tuple,
        per_mille(&lisbon_pick.sigma2),
        pct(&lisbon_pick.efficiency),
    );
    pass(
        8,
        "efficiency floors select the published compromise tuples",
    );
}

#[test]
fn criterion_09_property_suite() {
    let council = eu27();

    // Oracle equivalence over 500 seeded random games, n <= 12, with
    // exact normalization. Composite rules draw 1-3 criteria across all
    // kinds; the DP backend is compared wherever it is eligible.
    let mut dp_checked = 0usize;
    let mut state = 0x243F_6A88_85A3_08D3u64; // deterministic xorshift stream
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for game in 0..500 {
        let n = 2 + (next() % 11) as usize; // 2..=12
        let members: Vec<MemberState> = (0..n)
            .map(|i| {
                MemberState::new(
                    format!("M{i}"),
                    format!("M{i}"),
                    1 + next() % 1000,
                    Some(next() % 51),
                )
            })
            .collect();
        let council = Council::new(members).unwrap();
        let n_criteria = 1 + (next() % 3) as usize;
        let mut criteria = Vec::new();
        for c in 0..n_criteria {
            let kind = match (game + c) % 4 {
                0 => CriterionKind::NegotiatedWeight,
                1 => CriterionKind::MemberCount,
                2 => CriterionKind::Population,
                _ => CriterionKind::SqrtWeight,
            };
            let quota = if kind == CriterionKind::NegotiatedWeight && next() % 2 == 0 {
                let total: u64 = council
                    .members()
                    .iter()
                    .map(|m| m.nice_weight.unwrap())
                    .sum();
                Quota::absolute(1 + next() % total.max(1))
            } else {
                let num = 1 + next() % 100;
                Quota::relative(num, 100).unwrap()
            };
            criteria.push(Criterion::new(kind, quota));
        }
        let rule = VotingRule::new(criteria).unwrap();
        let exact = banzhaf_exact(&council, &rule).unwrap();
        let oracle = brute_force_oracle(&council, &rule).unwrap();
        assert!(
            exact.same_numbers(&oracle),
            "game {game}: exact and oracle disagree on {rule:?}"
        );
        if power::dp_eligible(&council, &rule, power::DEFAULT_DP_TABLE_BYTES) {
            let dp = banzhaf_dp(&council, &rule).unwrap();
            assert!(dp.same_numbers(&oracle), "game {game}: dp disagrees");
            dp_checked += 1;
        }
        let beta_sum: BigRational = exact.members.iter().map(|m| m.beta.clone()).sum();
        if exact.total_banzhaf() > 0 {
            assert_eq!(beta_sum, BigRational::new(1.into(), 1.into()));
        }
    }
    assert!(dp_checked >= 100, "dp exercised on {dp_checked} games only");

    // Symmetry: fully identical members get identical counts.
    let twins = Council::new(
        (0..6)
            .map(|i| MemberState::new(format!("T{i}"), "Twin", 5_000, Some(9)))
            .collect(),
    )
    .unwrap();
    let twin_rule = make_nice_rule(&twins, 28, 4, Quota::relative(3, 5).unwrap()).unwrap();
    let twin_report = banzhaf_exact(&twins, &twin_rule).unwrap();
    assert!(twin_report
        .members
        .iter()
        .all(|m| m.tb == twin_report.members[0].tb));

    // Weight monotonicity and dummies in a single-criterion game.
    let weights = [0u64, 1, 2, 2, 5, 9, 13];
    let mono = Council::new(
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| MemberState::new(format!("W{i}"), "W", 1 + w, Some(w)))
            .collect(),
    )
    .unwrap();
    let mono_rule = VotingRule::new(vec![Criterion::new(
        CriterionKind::NegotiatedWeight,
        Quota::absolute(17),
    )])
    .unwrap();
    let mono_report = banzhaf_exact(&mono, &mono_rule).unwrap();
    for pair in mono_report.members.windows(2) {
        assert!(pair[0].tb <= pair[1].tb, "weight monotonicity violated");
    }
    assert_eq!(mono_report.members[0].tb, 0, "zero weight must be a dummy");

    // Efficiency monotonicity: raising any quota never raises efficiency.
    let base = eu27();
    let mut last = BigRational::new(2.into(), 1.into());
    for weight_quota in [200u64, 220, 240, 260] {
        let rule =
            make_nice_rule(&base, weight_quota, 14, Quota::relative(62, 100).unwrap()).unwrap();
        let eff = banzhaf_exact(&base, &rule).unwrap().efficiency;
        assert!(eff <= last);
        last = eff;
    }

    // Parallel results independent of worker count.
    let rule = jc_rule(&council, 615, false);
    let reference = banzhaf_exact(&council, &rule).unwrap();
    for threads in [1usize, 2, 3] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let report = pool.install(|| banzhaf_exact(&council, &rule).unwrap());
        assert!(
            report.same_numbers(&reference),
            "{threads} workers diverged"
        );
    }

    // Monte Carlo within 3 standard errors of exact values at 10^7
    // samples on the full council (fixed seed keeps this deterministic).
    let lisbon = lisbon_rule();
    let exact = banzhaf_exact(&council, &lisbon).unwrap();
    let mc = banzhaf_monte_carlo(&council, &lisbon, 10_000_000, 42).unwrap();
    for (est, truth) in mc.members.iter().zip(&exact.members) {
        let err = (est.nb.to_f64().unwrap() - truth.nb.to_f64().unwrap()).abs();
        assert!(
            err <= 3.0 * est.mc_stderr.unwrap(),
            "member {}: {err} vs stderr {}",
            est.id,
            est.mc_stderr.unwrap()
        );
    }
    let eff_est = mc.efficiency.to_f64().unwrap();
    let eff_err = (eff_est - exact.efficiency.to_f64().unwrap()).abs();
    let eff_se = (eff_est * (1.0 - eff_est) / 10_000_000.0).sqrt();
    assert!(eff_err <= 3.0 * eff_se);

    pass(
        9,
        &format!(
            "oracle equivalence on 500 games (dp on {dp_checked}), normalization, symmetry, \
             dummies, monotonicity, worker independence, monte carlo at 3 sigma"
        ),
    );
}

#[test]
fn criterion_10_shared_mode_identity_and_full_grid_runtime() {
    let council = eu27();

    // Bit-identity between the shared kernel and per-tuple recomputation
    // on a 5x5 sub-grid.
    let subgrid = SweepGrid {
        family: RuleFamily::Nice,
        count_quotas: Some(IntRange::single(14)),
        weight_quotas: Some(IntRange::new(250, 254, 1).unwrap()),
        pop_quotas: QuotaGrid::new(60, 64, 1, 100).unwrap(),
    };
    let shared = run_sweep(&council, &subgrid, SweepMode::Shared).unwrap();
    let per_tuple = run_sweep(&council, &subgrid, SweepMode::PerTuple).unwrap();
    assert_eq!(shared.rows.len(), 25);
    for (a, b) in shared.rows.iter().zip(&per_tuple.rows) {
        assert_eq!(a.count_quota, b.count_quota);
        assert_eq!(a.weight_quota, b.weight_quota);
        assert_eq!(a.pop_quota_num, b.pop_quota_num);
        assert_eq!(
            a.sigma2, b.sigma2,
            "sigma2 diverged at {:?}",
            a.weight_quota
        );
        assert_eq!(a.max_deviation, b.max_deviation);
        assert_eq!(a.max_deviation_member, b.max_deviation_member);
        assert_eq!(a.efficiency, b.efficiency);
    }

    // Full 86 x 35 grid inside the runtime budget.
    let start = Instant::now();
    let full = nice_sweep(&council);
    let elapsed = start.elapsed();
    assert_eq!(full.rows.len(), 86 * 35);
    assert!(
        elapsed <= Duration::from_secs(30 * 60),
        "full grid took {elapsed:?}, budget 30 min"
    );
    pass(
        10,
        &format!("shared mode bit-identical on 5x5; full 86x35 grid in {elapsed:.2?}"),
    );
}
