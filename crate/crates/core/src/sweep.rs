//! Quota-grid sweeps: one row of metrics per quota tuple, plus
//! error-minimizing and efficiency-constrained selection.
//!
//! Two evaluation modes produce bit-identical results:
//! * `PerTuple` re-runs the exact enumeration backend for every tuple —
//!   the slow, obviously-correct reference.
//! * `Shared` makes one pass over all `2^n` coalitions and scatters each
//!   coalition's swing contributions into per-member difference arrays
//!   indexed by quota bins. A coalition's swing region over the grid is
//!   a rectangle anchored at the lowest quotas minus a nested rectangle
//!   (the tuples where the coalition wins even without the member), so
//!   two point updates per member suffice; suffix sums then recover the
//!   total Banzhaf count for every tuple simultaneously.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fairness::{self, IdealDistribution};
use crate::game::{make_jc_rule, make_lisbon_rule, make_nice_rule, Council, Quota, VotingRule};
use crate::power::{enumerate_counts, CompiledCriterion, CompiledRule};
use crate::rational_serde;

/// Rule family being swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleFamily {
    Nice,
    Lisbon,
    Jc { count_majority: bool },
}

/// Inclusive integer range with step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
    pub step: u64,
}

impl IntRange {
    pub fn single(value: u64) -> IntRange {
        IntRange {
            lo: value,
            hi: value,
            step: 1,
        }
    }

    pub fn new(lo: u64, hi: u64, step: u64) -> Result<IntRange> {
        if step == 0 || lo > hi {
            return Err(Error::config(format!("bad range {lo}:{hi}:{step}")));
        }
        Ok(IntRange { lo, hi, step })
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..=self.hi).step_by(self.step as usize)
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees lo <= hi
    }
}

/// Exact rational quota grid: numerators `lo..=hi` step `step`, all
/// over denominator `den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuotaGrid {
    pub den: u64,
    pub lo: u64,
    pub hi: u64,
    pub step: u64,
}

impl QuotaGrid {
    pub fn new(lo: u64, hi: u64, step: u64, den: u64) -> Result<QuotaGrid> {
        if den == 0 || step == 0 || lo == 0 || lo > hi || hi > den {
            return Err(Error::config(format!(
                "bad quota grid {lo}:{hi}:{step} over denominator {den}; \
                 quotas must lie in (0, 1]"
            )));
        }
        Ok(QuotaGrid { den, lo, hi, step })
    }

    pub fn single(num: u64, den: u64) -> Result<QuotaGrid> {
        QuotaGrid::new(num, num, 1, den)
    }

    pub fn numerators(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..=self.hi).step_by(self.step as usize)
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A quota-tuple grid for one rule family.
#[derive(Debug, Clone, Serialize)]
pub struct SweepGrid {
    pub family: RuleFamily,
    /// Member-count quotas. Required for Nice and Lisbon; must be absent
    /// for the square-root family, whose count criterion is fixed by the
    /// `count_majority` variant.
    pub count_quotas: Option<IntRange>,
    /// Negotiated-weight quotas (Nice only).
    pub weight_quotas: Option<IntRange>,
    pub pop_quotas: QuotaGrid,
}

impl SweepGrid {
    fn validate(&self, council: &Council) -> Result<()> {
        match self.family {
            RuleFamily::Nice => {
                if self.count_quotas.is_none() || self.weight_quotas.is_none() {
                    return Err(Error::config(
                        "nice sweeps need count and weight quota ranges",
                    ));
                }
                if council.total_nice_weight().is_none() {
                    return Err(Error::config(
                        "nice sweeps need negotiated weights on every member",
                    ));
                }
            }
            RuleFamily::Lisbon => {
                if self.count_quotas.is_none() {
                    return Err(Error::config("lisbon sweeps need a count quota range"));
                }
                if self.weight_quotas.is_some() {
                    return Err(Error::config("weight quotas apply to the nice family only"));
                }
            }
            RuleFamily::Jc { .. } => {
                if self.count_quotas.is_some() || self.weight_quotas.is_some() {
                    return Err(Error::config(
                        "square-root sweeps take only a population quota range",
                    ));
                }
            }
        }
        if let Some(r) = &self.count_quotas {
            if r.lo == 0 {
                return Err(Error::config("count quotas must be >= 1"));
            }
        }
        Ok(())
    }

    /// Number of quota tuples in the grid.
    pub fn tuples(&self) -> usize {
        let counts = self.count_quotas.map_or(1, |r| r.len());
        let weights = self.weight_quotas.map_or(1, |r| r.len());
        counts * weights * self.pop_quotas.len()
    }
}

/// Evaluation strategy; both produce identical rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Shared,
    PerTuple,
}

/// Grid dimensions, used to address tuples in slice queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDim {
    Count,
    Weight,
    Pop,
}

/// Metrics for one quota tuple.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub count_quota: Option<u64>,
    pub weight_quota: Option<u64>,
    pub pop_quota_num: u64,
    pub pop_quota_den: u64,
    /// Sum of squared share deviations (fraction; multiply by 1000 for
    /// the per-mille rendering).
    #[serde(with = "rational_serde")]
    pub sigma2: BigRational,
    #[serde(with = "rational_serde")]
    pub max_deviation: BigRational,
    pub max_deviation_member: String,
    #[serde(with = "rational_serde")]
    pub efficiency: BigRational,
}

impl SweepRow {
    pub fn pop_quota(&self) -> Quota {
        Quota::Relative {
            num: self.pop_quota_num,
            den: self.pop_quota_den,
        }
    }

    /// Decimal rendering of the population quota, exact when the
    /// reduced denominator is a product of twos and fives.
    pub fn pop_quota_decimal(&self) -> String {
        let g = self.pop_quota_num.gcd(&self.pop_quota_den);
        let (num, den) = (self.pop_quota_num / g, self.pop_quota_den / g);
        let mut d = den;
        let mut dp = 0u32;
        while d % 2 == 0 {
            d /= 2;
            dp += 1;
        }
        let mut fives = 0u32;
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return format!("{num}/{den}");
        }
        let dp = dp.max(fives);
        let scaled = num as u128 * 10u128.pow(dp) / den as u128;
        let digits = format!("{scaled:0>width$}", width = dp as usize + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - dp as usize);
        if frac_part.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac_part}")
        }
    }

    /// Ordering key: (count, weight, population quota).
    fn tuple_key(&self) -> (u64, u64, u128) {
        // Population quotas compare within one grid (same denominator);
        // normalize to a 10^9-scaled value for cross-grid stability.
        let pop_scaled = self.pop_quota_num as u128 * 1_000_000_000 / self.pop_quota_den as u128;
        (
            self.count_quota.unwrap_or(0),
            self.weight_quota.unwrap_or(0),
            pop_scaled,
        )
    }

    /// True when this row beats `other` under the selection order:
    /// smaller error rate, then higher efficiency, then smaller tuple.
    fn beats(&self, other: &SweepRow) -> bool {
        match self.sigma2.cmp(&other.sigma2) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => match other.efficiency.cmp(&self.efficiency) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => self.tuple_key() < other.tuple_key(),
            },
        }
    }
}

/// All rows of a sweep, ordered by quota tuple.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// The error-minimizing tuple under the tie-break order.
    pub fn optimize_error(&self) -> Result<&SweepRow> {
        self.rows
            .iter()
            .fold(None::<&SweepRow>, |best, row| match best {
                Some(b) if !row.beats(b) => Some(b),
                _ => Some(row),
            })
            .ok_or(Error::EmptySweep)
    }

    /// The error-minimizing tuple among rows with efficiency at or above
    /// the floor.
    pub fn optimize_with_efficiency_floor(
        &self,
        min_efficiency: &BigRational,
    ) -> Result<&SweepRow> {
        if self.rows.is_empty() {
            return Err(Error::EmptySweep);
        }
        self.rows
            .iter()
            .filter(|row| row.efficiency >= *min_efficiency)
            .fold(None::<&SweepRow>, |best, row| match best {
                Some(b) if !row.beats(b) => Some(b),
                _ => Some(row),
            })
            .ok_or_else(|| Error::NoFeasibleTuple {
                floor_percent: crate::decimal::fixed(
                    &(min_efficiency * BigRational::from_integer(BigInt::from(100))),
                    4,
                ),
            })
    }

    /// Per-slice optima: group rows by their values on `group_by` and
    /// keep each group's best row (e.g. group nice-family rows by count
    /// and weight to get the optimal population quota per weight quota).
    pub fn slice_optima(&self, group_by: &[SweepDim]) -> Vec<&SweepRow> {
        use std::collections::BTreeMap;
        let key = |row: &SweepRow| -> (Option<u64>, Option<u64>, Option<(u64, u64)>) {
            let mut k = (None, None, None);
            for dim in group_by {
                match dim {
                    SweepDim::Count => k.0 = row.count_quota,
                    SweepDim::Weight => k.1 = row.weight_quota,
                    SweepDim::Pop => {
                        let g = row.pop_quota_num.gcd(&row.pop_quota_den);
                        k.2 = Some((row.pop_quota_num / g, row.pop_quota_den / g));
                    }
                }
            }
            k
        };
        let mut groups: BTreeMap<_, &SweepRow> = BTreeMap::new();
        for row in &self.rows {
            groups
                .entry(key(row))
                .and_modify(|best| {
                    if row.beats(best) {
                        *best = row;
                    }
                })
                .or_insert(row);
        }
        groups.into_values().collect()
    }

    pub fn find(
        &self,
        count: Option<u64>,
        weight: Option<u64>,
        pop_num: u64,
        pop_den: u64,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.count_quota == count
                && r.weight_quota == weight
                && r.pop_quota()
                    == Quota::Relative {
                        num: pop_num,
                        den: pop_den,
                    }
        })
    }
}

/// Progress sink: called with (done, total) work units.
pub type Progress<'a> = Option<&'a (dyn Fn(u64, u64) + Sync)>;

/// Runs a sweep, producing one row per grid tuple in tuple order.
pub fn run_sweep(council: &Council, grid: &SweepGrid, mode: SweepMode) -> Result<SweepResult> {
    run_sweep_with_progress(council, grid, mode, None)
}

pub fn run_sweep_with_progress(
    council: &Council,
    grid: &SweepGrid,
    mode: SweepMode,
    progress: Progress<'_>,
) -> Result<SweepResult> {
    grid.validate(council)?;
    crate::power::check_exact_capacity(council)?;
    let ideal = fairness::ideal_distribution(council);
    match mode {
        SweepMode::PerTuple => per_tuple_sweep(council, grid, &ideal, progress),
        SweepMode::Shared => shared_sweep(council, grid, &ideal, progress),
    }
}

/// Builds the family rule for one tuple; quotas mirror the grid order
/// (count, weight, pop).
fn family_rule(
    council: &Council,
    family: RuleFamily,
    count: Option<u64>,
    weight: Option<u64>,
    pop: Quota,
) -> Result<VotingRule> {
    match family {
        RuleFamily::Nice => make_nice_rule(
            council,
            weight.expect("nice tuples carry a weight quota"),
            count.expect("nice tuples carry a count quota"),
            pop,
        ),
        RuleFamily::Lisbon => make_lisbon_rule(
            count.expect("lisbon tuples carry a count quota"),
            pop,
            false,
        ),
        RuleFamily::Jc { count_majority } => make_jc_rule(council, pop, count_majority),
    }
}

/// Full tuple list in row order.
fn tuple_list(grid: &SweepGrid) -> Vec<(Option<u64>, Option<u64>, u64)> {
    let mut tuples = Vec::with_capacity(grid.tuples());
    let counts: Vec<Option<u64>> = match &grid.count_quotas {
        Some(range) => range.values().map(Some).collect(),
        None => vec![None],
    };
    let weights: Vec<Option<u64>> = match &grid.weight_quotas {
        Some(range) => range.values().map(Some).collect(),
        None => vec![None],
    };
    for &count in &counts {
        for &weight in &weights {
            for pop_num in grid.pop_quotas.numerators() {
                tuples.push((count, weight, pop_num));
            }
        }
    }
    tuples
}

#[allow(clippy::too_many_arguments)]
fn build_row(
    ideal: &IdealDistribution,
    count: Option<u64>,
    weight: Option<u64>,
    pop_num: u64,
    pop_den: u64,
    tb: &[u64],
    winning: u64,
    n: usize,
) -> SweepRow {
    let tb_sum: u64 = tb.iter().sum();
    let betas: Vec<BigRational> = tb
        .iter()
        .map(|&t| {
            if tb_sum == 0 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(t), BigInt::from(tb_sum))
            }
        })
        .collect();
    let sigma2 = fairness::error_rate_of_betas(&betas, ideal);
    let (max_deviation, max_idx) = fairness::max_relative_deviation_of_betas(&betas, ideal);
    SweepRow {
        count_quota: count,
        weight_quota: weight,
        pop_quota_num: pop_num,
        pop_quota_den: pop_den,
        sigma2,
        max_deviation,
        max_deviation_member: ideal.ids()[max_idx].clone(),
        efficiency: BigRational::new(BigInt::from(winning), BigInt::from(1u64) << n),
    }
}

fn per_tuple_sweep(
    council: &Council,
    grid: &SweepGrid,
    ideal: &IdealDistribution,
    progress: Progress<'_>,
) -> Result<SweepResult> {
    let tuples = tuple_list(grid);
    let total = tuples.len() as u64;
    let done = std::sync::atomic::AtomicU64::new(0);
    let mut rows = Vec::with_capacity(tuples.len());
    for (count, weight, pop_num) in tuples {
        let pop = Quota::relative(pop_num, grid.pop_quotas.den)?;
        let rule = family_rule(council, grid.family, count, weight, pop)?;
        let compiled = CompiledRule::compile(council, &rule)?;
        let (tb, winning) = enumerate_counts(&compiled);
        rows.push(build_row(
            ideal,
            count,
            weight,
            pop_num,
            grid.pop_quotas.den,
            &tb,
            winning,
            council.n(),
        ));
        if let Some(p) = progress {
            let d = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            p(d, total);
        }
    }
    Ok(SweepResult { rows })
}

// ---------------------------------------------------------------------------
// Shared-enumeration kernel
// ---------------------------------------------------------------------------

/// Threshold grid for one swept dimension, with O(1) lookup of the
/// largest satisfied bin.
struct SweptDim {
    weights: Vec<u64>,
    bins: usize,
    spec: DimSpec,
}

enum DimSpec {
    /// Thresholds `lo + j * step`.
    Absolute { lo: u64, step: u64 },
    /// Thresholds `ceil((lo_num + j * step_num) / den * total)`.
    Relative {
        lo_num: u64,
        step_num: u64,
        den: u64,
        total: u64,
    },
}

impl SweptDim {
    /// Largest bin whose threshold the sum satisfies, or -1.
    #[inline]
    fn bin_of(&self, sum: u64) -> isize {
        match self.spec {
            DimSpec::Absolute { lo, step } => {
                if sum < lo {
                    -1
                } else {
                    (((sum - lo) / step) as isize).min(self.bins as isize - 1)
                }
            }
            DimSpec::Relative {
                lo_num,
                step_num,
                den,
                total,
            } => {
                // T_j <= sum  <=>  (lo_num + j*step_num) * total <= sum * den
                let lhs = sum * den;
                let base = lo_num * total;
                if lhs < base {
                    -1
                } else {
                    (((lhs - base) / (step_num * total)) as isize).min(self.bins as isize - 1)
                }
            }
        }
    }
}

struct Kernel {
    n: usize,
    fixed: Vec<CompiledCriterion>,
    dims: Vec<SweptDim>,
    k1: usize,
    k2: usize,
}

struct KernelAcc {
    winning: Vec<u64>,
    tb: Vec<i64>,
}

impl KernelAcc {
    fn new(n: usize, k1: usize, k2: usize) -> Self {
        KernelAcc {
            winning: vec![0; k1 * k2],
            tb: vec![0; n * k1 * k2],
        }
    }

    fn merge(mut self, other: KernelAcc) -> Self {
        for (a, b) in self.winning.iter_mut().zip(other.winning) {
            *a += b;
        }
        for (a, b) in self.tb.iter_mut().zip(other.tb) {
            *a += b;
        }
        self
    }
}

impl Kernel {
    /// Relative dimensions need `total * den` to fit in u64 so the hot
    /// loop can stay in native arithmetic.
    fn check_arithmetic(&self) -> Result<()> {
        for dim in &self.dims {
            if let DimSpec::Relative {
                lo_num,
                step_num,
                den,
                total,
            } = dim.spec
            {
                let hi_num = lo_num + step_num * (dim.bins as u64 - 1);
                if total.checked_mul(den).is_none() || total.checked_mul(hi_num).is_none() {
                    return Err(Error::config(
                        "quota grid totals overflow the shared kernel; use per-tuple mode",
                    ));
                }
            }
        }
        Ok(())
    }

    fn run(&self, progress: Progress<'_>, pass: u64, passes: u64) -> KernelAcc {
        let n = self.n;
        let split = crate::power::split_bits(n);
        let low_bits = n - split;
        let chunk_total = (1u64 << split) * passes;
        let done = std::sync::atomic::AtomicU64::new((1u64 << split) * pass);
        let mut acc = (0u32..1u32 << split)
            .into_par_iter()
            .fold(
                || KernelAcc::new(n, self.k1, self.k2),
                |mut acc, chunk| {
                    self.scan_chunk(chunk, low_bits, &mut acc);
                    if let Some(p) = progress {
                        let d = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                        p(d, chunk_total);
                    }
                    acc
                },
            )
            .reduce(|| KernelAcc::new(n, self.k1, self.k2), KernelAcc::merge);
        self.suffix_sums(&mut acc);
        acc
    }

    fn scan_chunk(&self, chunk: u32, low_bits: usize, acc: &mut KernelAcc) {
        let nf = self.fixed.len();
        debug_assert!(nf <= 4);
        let two_dims = self.dims.len() == 2;
        let mut fixed_sums = [0u64; 4];
        let fixed_sums = &mut fixed_sums[..nf];
        let mut dim_sums = [0u64; 2];

        let high = chunk << low_bits;
        let mut bits = high;
        {
            let mut m = high;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                for (s, c) in fixed_sums.iter_mut().zip(&self.fixed) {
                    *s += c.weights[i];
                }
                for (s, d) in dim_sums.iter_mut().zip(&self.dims) {
                    *s += d.weights[i];
                }
                m &= m - 1;
            }
        }

        self.visit(bits, fixed_sums, &dim_sums, two_dims, acc);
        for t in 1u32..(1u32 << low_bits) {
            let flip = t.trailing_zeros() as usize;
            let bit = 1u32 << flip;
            if bits & bit == 0 {
                bits |= bit;
                for (s, c) in fixed_sums.iter_mut().zip(&self.fixed) {
                    *s += c.weights[flip];
                }
                for (s, d) in dim_sums.iter_mut().zip(&self.dims) {
                    *s += d.weights[flip];
                }
            } else {
                bits &= !bit;
                for (s, c) in fixed_sums.iter_mut().zip(&self.fixed) {
                    *s -= c.weights[flip];
                }
                for (s, d) in dim_sums.iter_mut().zip(&self.dims) {
                    *s -= d.weights[flip];
                }
            }
            self.visit(bits, fixed_sums, &dim_sums, two_dims, acc);
        }
    }

    #[inline]
    fn visit(
        &self,
        bits: u32,
        fixed_sums: &[u64],
        dim_sums: &[u64; 2],
        two_dims: bool,
        acc: &mut KernelAcc,
    ) {
        if !self
            .fixed
            .iter()
            .zip(fixed_sums)
            .all(|(c, &s)| s >= c.threshold)
        {
            return;
        }
        let i1 = self.dims[0].bin_of(dim_sums[0]);
        if i1 < 0 {
            return;
        }
        let i2 = if two_dims {
            let b = self.dims[1].bin_of(dim_sums[1]);
            if b < 0 {
                return;
            }
            b as usize
        } else {
            0
        };
        let i1 = i1 as usize;
        acc.winning[i1 * self.k2 + i2] += 1;

        let mut m = bits;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let cell_base = i * self.k1 * self.k2;
            acc.tb[cell_base + i1 * self.k2 + i2] += 1;
            // Subtract the tuples where the coalition wins without the
            // member — unless removing it breaks a fixed criterion.
            let fixed_after = self
                .fixed
                .iter()
                .zip(fixed_sums.iter())
                .all(|(c, &s)| s - c.weights[i] >= c.threshold);
            if !fixed_after {
                continue;
            }
            let j1 = self.dims[0].bin_of(dim_sums[0] - self.dims[0].weights[i]);
            if j1 < 0 {
                continue;
            }
            let j2 = if two_dims {
                let b = self.dims[1].bin_of(dim_sums[1] - self.dims[1].weights[i]);
                if b < 0 {
                    continue;
                }
                b as usize
            } else {
                0
            };
            acc.tb[cell_base + j1 as usize * self.k2 + j2] -= 1;
        }
    }

    /// Turns point events into per-bin totals: a win/swing event at
    /// `(a, b)` counts for every tuple with indices `<= (a, b)`.
    fn suffix_sums(&self, acc: &mut KernelAcc) {
        suffix_2d_u64(&mut acc.winning, self.k1, self.k2);
        for member in 0..self.n {
            let grid = &mut acc.tb[member * self.k1 * self.k2..(member + 1) * self.k1 * self.k2];
            suffix_2d_i64(grid, self.k1, self.k2);
        }
    }
}

fn suffix_2d_u64(grid: &mut [u64], k1: usize, k2: usize) {
    for j1 in (0..k1.saturating_sub(1)).rev() {
        for j2 in 0..k2 {
            grid[j1 * k2 + j2] += grid[(j1 + 1) * k2 + j2];
        }
    }
    for j1 in 0..k1 {
        for j2 in (0..k2.saturating_sub(1)).rev() {
            grid[j1 * k2 + j2] += grid[j1 * k2 + j2 + 1];
        }
    }
}

fn suffix_2d_i64(grid: &mut [i64], k1: usize, k2: usize) {
    for j1 in (0..k1.saturating_sub(1)).rev() {
        for j2 in 0..k2 {
            grid[j1 * k2 + j2] += grid[(j1 + 1) * k2 + j2];
        }
    }
    for j1 in 0..k1 {
        for j2 in (0..k2.saturating_sub(1)).rev() {
            grid[j1 * k2 + j2] += grid[j1 * k2 + j2 + 1];
        }
    }
}

fn shared_sweep(
    council: &Council,
    grid: &SweepGrid,
    ideal: &IdealDistribution,
    progress: Progress<'_>,
) -> Result<SweepResult> {
    let n = council.n();
    let pop_dim_for = |kind_weights: Vec<u64>, total: u64| SweptDim {
        weights: kind_weights,
        bins: grid.pop_quotas.len(),
        spec: DimSpec::Relative {
            lo_num: grid.pop_quotas.lo,
            step_num: grid.pop_quotas.step,
            den: grid.pop_quotas.den,
            total,
        },
    };
    let populations: Vec<u64> = council.members().iter().map(|m| m.population).collect();
    let unit_weights = vec![1u64; n];

    // Each pass fixes the criteria outside the (at most two) swept
    // dimensions and walks the coalition space once.
    let mut rows = Vec::with_capacity(grid.tuples());
    match grid.family {
        RuleFamily::Nice => {
            let counts = grid.count_quotas.expect("validated");
            let weight_range = grid.weight_quotas.expect("validated");
            let nice_weights: Vec<u64> = council
                .members()
                .iter()
                .map(|m| m.nice_weight.expect("validated"))
                .collect();
            let passes = counts.len() as u64;
            for (pass, count) in counts.values().enumerate() {
                let kernel = Kernel {
                    n,
                    fixed: vec![CompiledCriterion {
                        weights: unit_weights.clone(),
                        threshold: count,
                    }],
                    dims: vec![
                        SweptDim {
                            weights: nice_weights.clone(),
                            bins: weight_range.len(),
                            spec: DimSpec::Absolute {
                                lo: weight_range.lo,
                                step: weight_range.step,
                            },
                        },
                        pop_dim_for(populations.clone(), council.total_population()),
                    ],
                    k1: weight_range.len(),
                    k2: grid.pop_quotas.len(),
                };
                kernel.check_arithmetic()?;
                let acc = kernel.run(progress, pass as u64, passes);
                collect_rows(
                    &kernel,
                    &acc,
                    ideal,
                    Some(count),
                    weight_range.values().map(Some).collect(),
                    grid,
                    n,
                    &mut rows,
                );
            }
        }
        RuleFamily::Lisbon => {
            let counts = grid.count_quotas.expect("validated");
            let kernel = Kernel {
                n,
                fixed: vec![],
                dims: vec![
                    SweptDim {
                        weights: unit_weights.clone(),
                        bins: counts.len(),
                        spec: DimSpec::Absolute {
                            lo: counts.lo,
                            step: counts.step,
                        },
                    },
                    pop_dim_for(populations.clone(), council.total_population()),
                ],
                k1: counts.len(),
                k2: grid.pop_quotas.len(),
            };
            kernel.check_arithmetic()?;
            let acc = kernel.run(progress, 0, 1);
            collect_rows_counts(
                &kernel,
                &acc,
                ideal,
                counts.values().collect(),
                grid,
                n,
                &mut rows,
            );
        }
        RuleFamily::Jc { count_majority } => {
            let fixed = if count_majority {
                vec![CompiledCriterion {
                    weights: unit_weights.clone(),
                    threshold: n as u64 / 2 + 1,
                }]
            } else {
                vec![]
            };
            let kernel = Kernel {
                n,
                fixed,
                dims: vec![pop_dim_for(
                    council.sqrt_weights().to_vec(),
                    council.total_sqrt_weight(),
                )],
                k1: grid.pop_quotas.len(),
                k2: 1,
            };
            kernel.check_arithmetic()?;
            let acc = kernel.run(progress, 0, 1);
            let count_label = count_majority.then_some(n as u64 / 2 + 1);
            for (j1, pop_num) in grid.pop_quotas.numerators().enumerate() {
                let tb = extract_tb(&acc, n, kernel.k1, kernel.k2, j1, 0);
                rows.push(build_row(
                    ideal,
                    count_label,
                    None,
                    pop_num,
                    grid.pop_quotas.den,
                    &tb,
                    acc.winning[j1],
                    n,
                ));
            }
        }
    }
    Ok(SweepResult { rows })
}

fn extract_tb(acc: &KernelAcc, n: usize, k1: usize, k2: usize, j1: usize, j2: usize) -> Vec<u64> {
    (0..n)
        .map(|member| {
            let v = acc.tb[member * k1 * k2 + j1 * k2 + j2];
            debug_assert!(v >= 0);
            v as u64
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn collect_rows(
    kernel: &Kernel,
    acc: &KernelAcc,
    ideal: &IdealDistribution,
    count: Option<u64>,
    weight_values: Vec<Option<u64>>,
    grid: &SweepGrid,
    n: usize,
    rows: &mut Vec<SweepRow>,
) {
    for (j1, weight) in weight_values.into_iter().enumerate() {
        for (j2, pop_num) in grid.pop_quotas.numerators().enumerate() {
            let tb = extract_tb(acc, n, kernel.k1, kernel.k2, j1, j2);
            rows.push(build_row(
                ideal,
                count,
                weight,
                pop_num,
                grid.pop_quotas.den,
                &tb,
                acc.winning[j1 * kernel.k2 + j2],
                n,
            ));
        }
    }
}

fn collect_rows_counts(
    kernel: &Kernel,
    acc: &KernelAcc,
    ideal: &IdealDistribution,
    count_values: Vec<u64>,
    grid: &SweepGrid,
    n: usize,
    rows: &mut Vec<SweepRow>,
) {
    for (j1, count) in count_values.into_iter().enumerate() {
        for (j2, pop_num) in grid.pop_quotas.numerators().enumerate() {
            let tb = extract_tb(acc, n, kernel.k1, kernel.k2, j1, j2);
            rows.push(build_row(
                ideal,
                Some(count),
                None,
                pop_num,
                grid.pop_quotas.den,
                &tb,
                acc.winning[j1 * kernel.k2 + j2],
                n,
            ));
        }
    }
}
