//! Python bindings: councils, rules, power reports, fairness metrics,
//! and quota sweeps, driven in-process from Python.
//!
//! Exact rationals cross the boundary as floats (for analysis) plus the
//! CSV/JSON renderings (for exact downstream processing).

use num_rational::BigRational;
use num_traits::ToPrimitive;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use banzhaf as core;
use banzhaf::data::ExportFormat;

fn py_err(err: core::Error) -> PyErr {
    match err {
        core::Error::Io { .. } => PyIOError::new_err(err.to_string()),
        core::Error::Capacity { .. } | core::Error::DpIneligible(_) => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn f64_of(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An ordered council of member states.
#[pyclass(frozen)]
struct Council {
    inner: core::Council,
}

#[pymethods]
impl Council {
    /// Load a built-in dataset name or a CSV path.
    #[staticmethod]
    fn load(source: &str) -> PyResult<Self> {
        Ok(Council {
            inner: core::data::load_dataset(source).map_err(py_err)?,
        })
    }

    /// The embedded EU-27 (EUROSTAT 2008) council.
    #[staticmethod]
    fn eu27() -> Self {
        Council {
            inner: core::data::builtin_eu27(),
        }
    }

    /// Build from (id, name, population, nice_weight-or-None) tuples.
    #[staticmethod]
    fn from_members(members: Vec<(String, String, u64, Option<u64>)>) -> PyResult<Self> {
        let members = members
            .into_iter()
            .map(|(id, name, population, weight)| {
                core::MemberState::new(id, name, population, weight)
            })
            .collect();
        Ok(Council {
            inner: core::Council::new(members).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn total_population(&self) -> u64 {
        self.inner.total_population()
    }

    fn member_ids(&self) -> Vec<String> {
        self.inner.members().iter().map(|m| m.id.clone()).collect()
    }

    /// Square-root ideal power shares, in member order.
    fn ideal_shares(&self) -> Vec<f64> {
        let ideal = core::ideal_distribution(&self.inner);
        ideal.shares().map(|s| f64_of(&s)).collect()
    }

    /// Closed-form approximate optimal quota for square-root weights.
    fn sz_quota(&self) -> f64 {
        core::sz_quota(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Council(n={}, total_population={})",
            self.inner.n(),
            self.inner.total_population()
        )
    }
}

/// A composite voting rule: a conjunction of quota criteria.
#[pyclass(frozen)]
struct Rule {
    inner: core::VotingRule,
    label: String,
}

#[pymethods]
impl Rule {
    /// Triple majority: weight, count, and population quotas.
    #[staticmethod]
    #[pyo3(signature = (council, weight_quota=255, count_quota=14, pop_num=62, pop_den=100))]
    fn nice(
        council: &Council,
        weight_quota: u64,
        count_quota: u64,
        pop_num: u64,
        pop_den: u64,
    ) -> PyResult<Self> {
        let quota = core::Quota::relative(pop_num, pop_den).map_err(py_err)?;
        Ok(Rule {
            inner: core::make_nice_rule(&council.inner, weight_quota, count_quota, quota)
                .map_err(py_err)?,
            label: format!("nice({weight_quota}/{count_quota}/{pop_num}/{pop_den})"),
        })
    }

    /// Double majority: count and population quotas.
    #[staticmethod]
    #[pyo3(signature = (count_quota=15, pop_num=65, pop_den=100, blocking_clause=false))]
    fn lisbon(
        count_quota: u64,
        pop_num: u64,
        pop_den: u64,
        blocking_clause: bool,
    ) -> PyResult<Self> {
        let quota = core::Quota::relative(pop_num, pop_den).map_err(py_err)?;
        Ok(Rule {
            inner: core::make_lisbon_rule(count_quota, quota, blocking_clause).map_err(py_err)?,
            label: format!("lisbon({count_quota}/{pop_num}/{pop_den})"),
        })
    }

    /// Square-root weights with one relative quota; optionally also a
    /// simple majority of members.
    #[staticmethod]
    #[pyo3(signature = (council, num=615, den=1000, count_majority=false))]
    fn jc(council: &Council, num: u64, den: u64, count_majority: bool) -> PyResult<Self> {
        let quota = core::Quota::relative(num, den).map_err(py_err)?;
        Ok(Rule {
            inner: core::make_jc_rule(&council.inner, quota, count_majority).map_err(py_err)?,
            label: format!("jc({num}/{den}, majority={count_majority})"),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: core::VotingRule =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Rule {
            inner,
            label: "custom".to_string(),
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Whether the coalition given by member ids passes the rule.
    fn wins(&self, council: &Council, ids: Vec<String>) -> PyResult<bool> {
        let mut indices = Vec::with_capacity(ids.len());
        for id in &ids {
            let idx = council
                .inner
                .index_of(id)
                .ok_or_else(|| PyValueError::new_err(format!("unknown member id '{id}'")))?;
            indices.push(idx);
        }
        self.inner
            .wins(&council.inner, core::Coalition::from_indices(&indices))
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Rule({})", self.label)
    }
}

/// Power distribution for one rule instance.
#[pyclass(frozen)]
struct PowerReport {
    inner: core::PowerReport,
}

#[pymethods]
impl PowerReport {
    #[getter]
    fn backend(&self) -> &'static str {
        match self.inner.backend {
            core::PowerBackend::Enumeration => "enumeration",
            core::PowerBackend::Dp => "dp",
            core::PowerBackend::MonteCarlo => "monte_carlo",
            core::PowerBackend::BruteForce => "brute_force",
        }
    }

    #[getter]
    fn efficiency(&self) -> f64 {
        f64_of(&self.inner.efficiency)
    }

    fn member_ids(&self) -> Vec<String> {
        self.inner.members.iter().map(|m| m.id.clone()).collect()
    }

    /// Total Banzhaf counts in member order.
    fn tb(&self) -> Vec<u64> {
        self.inner.members.iter().map(|m| m.tb).collect()
    }

    /// Normalized decisiveness probabilities in member order.
    fn nb(&self) -> Vec<f64> {
        self.inner.members.iter().map(|m| f64_of(&m.nb)).collect()
    }

    /// Banzhaf indices (shares summing to 1) in member order.
    fn beta(&self) -> Vec<f64> {
        self.inner.members.iter().map(|m| f64_of(&m.beta)).collect()
    }

    /// Banzhaf index of one member, in percent.
    fn beta_percent(&self, id: &str) -> PyResult<f64> {
        self.inner
            .member(id)
            .map(|m| f64_of(&m.beta) * 100.0)
            .ok_or_else(|| PyValueError::new_err(format!("unknown member id '{id}'")))
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        core::data::write_power_report(&self.inner, ExportFormat::Csv, &mut buf)
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn to_json(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        core::data::write_power_report(&self.inner, ExportFormat::Json, &mut buf)
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerReport(backend={}, n={}, efficiency={:.6})",
            self.backend(),
            self.inner.members.len(),
            self.efficiency()
        )
    }
}

/// Deviation of a power report from the square-root ideal.
#[pyclass(frozen)]
struct Fairness {
    inner: core::FairnessAssessment,
}

#[pymethods]
impl Fairness {
    /// Sum of squared share deviations, in per mille.
    #[getter]
    fn error_rate_permille(&self) -> f64 {
        f64_of(&self.inner.error_rate) * 1000.0
    }

    #[getter]
    fn max_relative_deviation_percent(&self) -> f64 {
        f64_of(&self.inner.max_relative_deviation) * 100.0
    }

    #[getter]
    fn max_relative_deviation_member(&self) -> String {
        self.inner.max_relative_deviation_member.clone()
    }

    /// Signed per-member relative deviations in member order.
    fn relative_deviations(&self) -> Vec<f64> {
        self.inner
            .members
            .iter()
            .map(|m| f64_of(&m.relative_deviation))
            .collect()
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        core::data::write_fairness(&self.inner, ExportFormat::Csv, &mut buf)
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn __repr__(&self) -> String {
        format!(
            "Fairness(error_rate={:.5}permille, max_dev={:.2}% at {})",
            self.error_rate_permille(),
            self.max_relative_deviation_percent(),
            self.inner.max_relative_deviation_member
        )
    }
}

/// One sweep row as a plain tuple:
/// (count, weight, pop_quota, sigma2_permille, max_dev_percent, member, efficiency_percent)
type RowTuple = (Option<u64>, Option<u64>, String, f64, f64, String, f64);

fn row_tuple(row: &core::SweepRow) -> RowTuple {
    (
        row.count_quota,
        row.weight_quota,
        row.pop_quota_decimal(),
        f64_of(&row.sigma2) * 1000.0,
        f64_of(&row.max_deviation) * 100.0,
        row.max_deviation_member.clone(),
        f64_of(&row.efficiency) * 100.0,
    )
}

/// Result of a quota-grid sweep.
#[pyclass(frozen)]
struct SweepOutcome {
    inner: core::SweepResult,
}

#[pymethods]
impl SweepOutcome {
    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    fn rows(&self) -> Vec<RowTuple> {
        self.inner.rows.iter().map(row_tuple).collect()
    }

    /// The error-minimizing tuple.
    fn argmin(&self) -> PyResult<RowTuple> {
        self.inner.optimize_error().map(row_tuple).map_err(py_err)
    }

    /// The error-minimizing tuple among rows with efficiency at or
    /// above `num/den`.
    fn argmin_with_efficiency_floor(&self, num: u64, den: u64) -> PyResult<RowTuple> {
        let floor = BigRational::new(num.into(), den.into());
        self.inner
            .optimize_with_efficiency_floor(&floor)
            .map(row_tuple)
            .map_err(py_err)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        core::data::write_sweep(&self.inner, ExportFormat::Csv, &mut buf)
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }
}

/// Exact Banzhaf report (DP when eligible, else enumeration).
#[pyfunction]
fn banzhaf_exact(council: &Council, rule: &Rule) -> PyResult<PowerReport> {
    Ok(PowerReport {
        inner: core::banzhaf_exact(&council.inner, &rule.inner).map_err(py_err)?,
    })
}

/// Seeded Monte Carlo estimate.
#[pyfunction]
#[pyo3(signature = (council, rule, samples=1_000_000, seed=42))]
fn banzhaf_monte_carlo(
    council: &Council,
    rule: &Rule,
    samples: u64,
    seed: u64,
) -> PyResult<PowerReport> {
    Ok(PowerReport {
        inner: core::banzhaf_monte_carlo(&council.inner, &rule.inner, samples, seed)
            .map_err(py_err)?,
    })
}

/// Naive reference oracle (n <= 15).
#[pyfunction]
fn brute_force_oracle(council: &Council, rule: &Rule) -> PyResult<PowerReport> {
    Ok(PowerReport {
        inner: core::brute_force_oracle(&council.inner, &rule.inner).map_err(py_err)?,
    })
}

/// Fairness assessment of a report against the council's ideal.
#[pyfunction]
fn assess(council: &Council, report: &PowerReport) -> PyResult<Fairness> {
    let ideal = core::ideal_distribution(&council.inner);
    Ok(Fairness {
        inner: core::assess(&report.inner, &ideal).map_err(py_err)?,
    })
}

/// Sweep a quota grid. `pop` is (lo, hi, step, den) in exact integers;
/// `count`/`weights` are optional (lo, hi, step) ranges.
#[pyfunction]
#[pyo3(signature = (council, family, pop, count=None, weights=None, per_tuple=false))]
fn run_sweep(
    council: &Council,
    family: &str,
    pop: (u64, u64, u64, u64),
    count: Option<(u64, u64, u64)>,
    weights: Option<(u64, u64, u64)>,
    per_tuple: bool,
) -> PyResult<SweepOutcome> {
    let family = match family {
        "nice" => core::RuleFamily::Nice,
        "lisbon" => core::RuleFamily::Lisbon,
        "jc" => core::RuleFamily::Jc {
            count_majority: false,
        },
        "jc-plus" => core::RuleFamily::Jc {
            count_majority: true,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown family '{other}' (expected nice, lisbon, jc, jc-plus)"
            )))
        }
    };
    let int_range = |r: (u64, u64, u64)| core::IntRange::new(r.0, r.1, r.2).map_err(py_err);
    let grid = core::SweepGrid {
        family,
        count_quotas: count.map(int_range).transpose()?,
        weight_quotas: weights.map(int_range).transpose()?,
        pop_quotas: core::QuotaGrid::new(pop.0, pop.1, pop.2, pop.3).map_err(py_err)?,
    };
    let mode = if per_tuple {
        core::SweepMode::PerTuple
    } else {
        core::SweepMode::Shared
    };
    Ok(SweepOutcome {
        inner: core::run_sweep(&council.inner, &grid, mode).map_err(py_err)?,
    })
}

#[pymodule]
fn pybanzhaf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Council>()?;
    m.add_class::<Rule>()?;
    m.add_class::<PowerReport>()?;
    m.add_class::<Fairness>()?;
    m.add_class::<SweepOutcome>()?;
    m.add_function(wrap_pyfunction!(banzhaf_exact, m)?)?;
    m.add_function(wrap_pyfunction!(banzhaf_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(assess, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
