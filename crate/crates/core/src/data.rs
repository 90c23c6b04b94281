//! Dataset ingestion and report serialization.
//!
//! Ships the EU-27 council with EUROSTAT 2008 populations and the
//! negotiated treaty weights as the built-in dataset `"eu27-2008"`.
//! External datasets load from CSV with header
//! `id,name,population[,nice_weight]`; populations accept both plain
//! integers and European dot-separated formatting (`82.221.808`).
//!
//! All exports use dot-decimal, comma-separated CSV with fixed decimal
//! precision, so identical inputs produce byte-identical files.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::decimal;
use crate::error::{Error, Result};
use crate::fairness::FairnessAssessment;
use crate::game::{Council, MemberState};
use crate::power::PowerReport;
use crate::sweep::{SweepDim, SweepResult, SweepRow};

/// Name of the built-in dataset.
pub const BUILTIN_EU27: &str = "eu27-2008";

/// EU-27 member states: id, name, EUROSTAT 2008 population, treaty weight.
const EU27_2008: &[(&str, &str, u64, u64)] = &[
    ("DE", "Germany", 82_221_808, 29),
    ("FR", "France", 63_753_140, 29),
    ("UK", "United Kingdom", 61_185_981, 29),
    ("IT", "Italy", 59_618_114, 29),
    ("ES", "Spain", 45_283_259, 27),
    ("PL", "Poland", 38_115_641, 27),
    ("RO", "Romania", 21_528_627, 14),
    ("NL", "Netherlands", 16_404_282, 13),
    ("GR", "Greece", 11_214_992, 12),
    ("BE", "Belgium", 10_666_866, 12),
    ("PT", "Portugal", 10_617_575, 12),
    ("CZ", "Czech Republic", 10_381_130, 12),
    ("HU", "Hungary", 10_045_000, 12),
    ("SE", "Sweden", 9_182_927, 10),
    ("AT", "Austria", 8_331_930, 10),
    ("BG", "Bulgaria", 7_640_238, 10),
    ("DK", "Denmark", 5_475_791, 7),
    ("SK", "Slovak Republic", 5_400_998, 7),
    ("FI", "Finland", 5_300_484, 7),
    ("IE", "Ireland", 4_419_859, 7),
    ("LT", "Lithuania", 3_366_357, 7),
    ("LV", "Latvia", 2_270_894, 4),
    ("SI", "Slovenia", 2_025_866, 4),
    ("EE", "Estonia", 1_340_935, 4),
    ("CY", "Cyprus", 794_580, 4),
    ("LU", "Luxembourg", 483_799, 4),
    ("MT", "Malta", 410_584, 3),
];

/// The built-in EU-27 council.
pub fn builtin_eu27() -> Council {
    let members = EU27_2008
        .iter()
        .map(|&(id, name, population, weight)| MemberState::new(id, name, population, Some(weight)))
        .collect();
    Council::new(members).expect("embedded dataset is valid")
}

/// Loads a council from a built-in name or a CSV file path.
pub fn load_dataset(source: &str) -> Result<Council> {
    if source == BUILTIN_EU27 {
        return Ok(builtin_eu27());
    }
    load_csv(Path::new(source))
}

/// Loads a council from a CSV file.
pub fn load_csv(path: &Path) -> Result<Council> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_dataset(&text)
}

/// Parses dataset CSV text into a validated council.
pub fn parse_dataset(text: &str) -> Result<Council> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header_fields: Vec<String> = split_csv_line(header, 1)?
        .iter()
        .map(|f| f.trim().to_ascii_lowercase())
        .collect();
    let expected_prefix = ["id", "name", "population"];
    if header_fields.len() < 3
        || header_fields[..3] != expected_prefix
        || header_fields.len() > 4
        || (header_fields.len() == 4 && header_fields[3] != "nice_weight")
    {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header id,name,population[,nice_weight]".into(),
        });
    }
    let has_weight = header_fields.len() == 4;

    let mut members = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_csv_line(line, line_no)?;
        if fields.len() != header_fields.len() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected {} fields, found {}",
                    header_fields.len(),
                    fields.len()
                ),
            });
        }
        let population = parse_population(fields[2].trim())
            .map_err(|msg| Error::Parse { line: line_no, msg })?;
        let nice_weight = if has_weight {
            let raw = fields[3].trim();
            if raw.is_empty() {
                None
            } else {
                Some(raw.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid nice_weight '{raw}'"),
                })?)
            }
        } else {
            None
        };
        members.push(MemberState::new(
            fields[0].trim(),
            fields[1].trim(),
            population,
            nice_weight,
        ));
    }
    Council::new(members)
}

/// Accepts `82221808` and `82.221.808`; dots must separate groups of
/// exactly three digits.
fn parse_population(raw: &str) -> std::result::Result<u64, String> {
    if raw.is_empty() {
        return Err("empty population".into());
    }
    let value = if raw.contains('.') {
        let groups: Vec<&str> = raw.split('.').collect();
        let well_formed = !groups[0].is_empty()
            && groups[0].chars().all(|c| c.is_ascii_digit())
            && groups[1..]
                .iter()
                .all(|g| g.len() == 3 && g.chars().all(|c| c.is_ascii_digit()));
        if !well_formed {
            return Err(format!("invalid population '{raw}'"));
        }
        groups.concat()
    } else {
        raw.to_string()
    };
    value
        .parse::<u64>()
        .map_err(|_| format!("invalid population '{raw}'"))
}

/// Minimal CSV line splitting with double-quote support.
fn split_csv_line(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    current.push('"');
                } else {
                    in_quotes = false;
                }
            }
            '"' => in_quotes = true,
            ',' if !in_quotes => fields.push(std::mem::take(&mut current)),
            _ => current.push(c),
        }
    }
    if in_quotes {
        return Err(Error::Parse {
            line: line_no,
            msg: "unterminated quote".into(),
        });
    }
    fields.push(current);
    Ok(fields)
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Writes a council back out as dataset CSV; a round-trip through
/// [`parse_dataset`] reproduces the identical council.
pub fn write_dataset(council: &Council, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "id,name,population,nice_weight")?;
    for m in council.members() {
        writeln!(
            out,
            "{},{},{},{}",
            csv_field(&m.id),
            csv_field(&m.name),
            m.population,
            m.nice_weight.map(|w| w.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Output format for report exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

fn percent(value: &BigRational, dp: usize) -> String {
    decimal::fixed(&(value * BigRational::from_integer(BigInt::from(100))), dp)
}

fn per_mille_sig5(value: &BigRational) -> String {
    decimal::significant(&(value * BigRational::from_integer(BigInt::from(1000))), 5)
}

/// Writes a power report. CSV columns: member_id, population, weight,
/// TB, NB, beta_percent (six decimals).
pub fn write_power_report(
    report: &PowerReport,
    format: ExportFormat,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            out.write_all(b"\n")
        }
        ExportFormat::Csv => {
            writeln!(out, "member_id,population,weight,tb,nb,beta_percent")?;
            for m in &report.members {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(&m.id),
                    m.population,
                    m.weight.map(|w| w.to_string()).unwrap_or_default(),
                    m.tb,
                    decimal::fixed(&m.nb, 9),
                    percent(&m.beta, 6),
                )?;
            }
            Ok(())
        }
    }
}

/// Writes a fairness assessment. The CSV is the per-member deviation
/// series used for external plotting; the scalar metrics ride along in
/// JSON exports and CLI summaries.
pub fn write_fairness(
    assessment: &FairnessAssessment,
    format: ExportFormat,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, assessment)?;
            out.write_all(b"\n")
        }
        ExportFormat::Csv => {
            writeln!(
                out,
                "member_id,population,ideal_share_percent,beta_percent,relative_deviation_percent"
            )?;
            for m in &assessment.members {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&m.id),
                    m.population,
                    percent(&m.ideal_share, 6),
                    percent(&m.beta, 6),
                    percent(&m.relative_deviation, 4),
                )?;
            }
            Ok(())
        }
    }
}

fn sweep_row_csv(row: &SweepRow) -> String {
    let mut line = String::new();
    let _ = write!(
        line,
        "{},{},{},{},{},{},{}",
        row.count_quota.map(|c| c.to_string()).unwrap_or_default(),
        row.weight_quota.map(|w| w.to_string()).unwrap_or_default(),
        row.pop_quota_decimal(),
        per_mille_sig5(&row.sigma2),
        percent(&row.max_deviation, 4),
        csv_field(&row.max_deviation_member),
        percent(&row.efficiency, 4),
    );
    line
}

const SWEEP_HEADER: &str = "count_quota,weight_quota,pop_quota,sigma2_permille,\
max_deviation_percent,max_deviation_member,efficiency_percent";

/// Writes the full sweep table, one row per quota tuple.
pub fn write_sweep(
    result: &SweepResult,
    format: ExportFormat,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        ExportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, result)?;
            out.write_all(b"\n")
        }
        ExportFormat::Csv => {
            writeln!(out, "{SWEEP_HEADER}")?;
            for row in &result.rows {
                writeln!(out, "{}", sweep_row_csv(row))?;
            }
            Ok(())
        }
    }
}

/// Writes per-slice optima: for each value of
/// the grouping dimensions, the row minimizing the error rate.
pub fn write_sweep_slices(
    result: &SweepResult,
    group_by: &[SweepDim],
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in result.slice_optima(group_by) {
        writeln!(out, "{}", sweep_row_csv(row))?;
    }
    Ok(())
}

/// Metric selector for the two-column plot series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSeries {
    ErrorRate,
    Efficiency,
}

/// Writes plot data: quota tuple columns plus one metric column.
pub fn write_sweep_series(
    result: &SweepResult,
    series: SweepSeries,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match series {
        SweepSeries::ErrorRate => {
            writeln!(out, "count_quota,weight_quota,pop_quota,sigma2_permille")?
        }
        SweepSeries::Efficiency => {
            writeln!(out, "count_quota,weight_quota,pop_quota,efficiency_percent")?
        }
    }
    for row in &result.rows {
        let metric = match series {
            SweepSeries::ErrorRate => per_mille_sig5(&row.sigma2),
            SweepSeries::Efficiency => percent(&row.efficiency, 4),
        };
        writeln!(
            out,
            "{},{},{},{}",
            row.count_quota.map(|c| c.to_string()).unwrap_or_default(),
            row.weight_quota.map(|w| w.to_string()).unwrap_or_default(),
            row.pop_quota_decimal(),
            metric,
        )?;
    }
    Ok(())
}
