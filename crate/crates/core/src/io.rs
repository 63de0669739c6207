//! CSV input (sample files) and output (bias-variance reports).
//!
//! Sample files hold one point per row. An optional header row is allowed;
//! when its last field is `weight`, the last column holds (possibly
//! unnormalized) weights. Without weights the distribution is uniform.

use crate::bias_variance::BiasVarianceReport;
use crate::error::{Error, Result};
use crate::minimizers::EmpiricalDistribution;
use crate::numeric::fmt_g17;

/// Raw weight sums further than this from 1 trigger a renormalization warning.
pub const WEIGHT_WARNING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplesFile {
    pub distribution: EmpiricalDistribution,
    /// Set when the weights were renormalized from a sum far from 1.
    pub warning: Option<String>,
}

fn parse_row(fields: &csv::StringRecord) -> Option<Vec<f64>> {
    fields.iter().map(|f| f.trim().parse::<f64>().ok()).collect()
}

/// Parses a samples CSV.
pub fn parse_samples(text: &str) -> Result<SamplesFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Samples(format!("row {}: {}", i + 1, e)))?;
        records.push(rec);
    }
    let mut rows = records.iter().enumerate().peekable();
    let mut weighted = false;
    if let Some((_, first)) = rows.peek() {
        if parse_row(first).is_none() {
            weighted = first.iter().next_back().is_some_and(|f| f.eq_ignore_ascii_case("weight"));
            rows.next();
        }
    }
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (i, rec) in rows {
        let mut values = parse_row(rec)
            .ok_or_else(|| Error::Samples(format!("row {}: non-numeric field in {:?}", i + 1, rec)))?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Samples(format!("row {}: non-finite value {}", i + 1, v)));
        }
        if weighted {
            weights.push(values.pop().expect("weight column"));
        }
        if values.is_empty() {
            return Err(Error::Samples(format!("row {}: no coordinates", i + 1)));
        }
        support.push(values);
    }
    if support.is_empty() {
        return Err(Error::Samples("no sample rows".into()));
    }
    if !weighted {
        return Ok(SamplesFile {
            distribution: EmpiricalDistribution::uniform(support)?,
            warning: None,
        });
    }
    let (distribution, raw) = EmpiricalDistribution::from_raw_weights(support, weights)?;
    let warning = ((raw - 1.0).abs() > WEIGHT_WARNING_TOLERANCE)
        .then(|| format!("weights sum to {}; renormalized to 1", fmt_g17(raw)));
    Ok(SamplesFile { distribution, warning })
}

pub const REPORT_HEADER: &str = "grid_value,noise,bias,variance,total,residual,clamp_count";

/// One line of bias-variance CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Empty in the CSV when the run was not a sweep.
    pub grid_value: Option<f64>,
    pub noise: f64,
    pub bias: f64,
    pub variance: f64,
    pub total: f64,
    pub residual: f64,
    pub clamp_count: usize,
}

impl ReportRow {
    pub fn new(grid_value: Option<f64>, r: &BiasVarianceReport) -> Self {
        Self {
            grid_value,
            noise: r.noise,
            bias: r.bias,
            variance: r.variance,
            total: r.total,
            residual: r.residual,
            clamp_count: r.clamp_count,
        }
    }
}

/// Header plus one row per report; `%.17g` floats, LF line endings.
pub fn write_report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        let grid = r.grid_value.map(fmt_g17).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            grid,
            fmt_g17(r.noise),
            fmt_g17(r.bias),
            fmt_g17(r.variance),
            fmt_g17(r.total),
            fmt_g17(r.residual),
            r.clamp_count
        ));
    }
    out
}

/// Inverse of [`write_report_csv`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Samples(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != REPORT_HEADER {
        return Err(Error::Samples(format!("unexpected report header {:?}", header)));
    }
    let num = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Samples(format!("report line {}: bad number `{}`", line, s)))
    };
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Samples(format!("report line {}: {}", line, e)))?;
        let grid_value = match &rec[0] {
            "" => None,
            s => Some(num(s, line)?),
        };
        rows.push(ReportRow {
            grid_value,
            noise: num(&rec[1], line)?,
            bias: num(&rec[2], line)?,
            variance: num(&rec[3], line)?,
            total: num(&rec[4], line)?,
            residual: num(&rec[5], line)?,
            clamp_count: rec[6]
                .parse()
                .map_err(|_| Error::Samples(format!("report line {}: bad clamp count", line)))?,
        });
    }
    Ok(rows)
}
