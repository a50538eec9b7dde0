//! Loading daily price data and deriving return series.
//!
//! Dates are carried along for reporting only; every analysis downstream
//! works on the sample index.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dated sequence of strictly positive prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
    label: String,
}

impl PriceSeries {
    pub fn new(label: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidConfig(format!(
                "{} dates for {} values",
                dates.len(),
                values.len()
            )));
        }
        if values.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                got: values.len(),
            });
        }
        // Line numbers here are 1-based row positions (no header).
        for (i, v) in values.iter().enumerate() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::NonPositivePrice { line: i as u64 + 1 });
            }
        }
        for (i, w) in dates.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotoneDates { line: i as u64 + 2 });
            }
        }
        Ok(Self {
            dates,
            values,
            label: label.into(),
        })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Log returns of a price series (or any increment series fed to the analysis).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    values: Vec<f64>,
    label: String,
    source_length: usize,
}

impl ReturnSeries {
    /// Wraps an arbitrary increment series, e.g. synthetic noise or a cascade measure.
    pub fn from_values(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let source_length = values.len() + 1;
        Ok(Self {
            values,
            label: label.into(),
            source_length,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Names of the date and value columns in a price file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub date: String,
    pub value: String,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        Self {
            date: "date".into(),
            value: "value".into(),
        }
    }
}

fn detect_delimiter(header: &str) -> u8 {
    [b',', b';', b'\t']
        .into_iter()
        .max_by_key(|d| header.bytes().filter(|b| b == d).count())
        .unwrap_or(b',')
}

pub(crate) fn parse_date(raw: &str) -> Option<NaiveDate> {
    let raw = raw.trim();
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(raw, "%d/%m/%Y"))
        .ok()
}

fn is_missing(raw: &str) -> bool {
    matches!(raw.trim(), "" | "NA" | "N/A" | "na" | "n/a" | "-" | "null" | "NaN")
}

fn parse_value(raw: &str) -> Option<f64> {
    let cleaned: String = raw
        .trim()
        .chars()
        .filter(|c| !matches!(c, ',' | '\'' | ' ' | '_' | '\u{a0}'))
        .collect();
    cleaned.parse::<f64>().ok()
}

/// Reads a delimited price file with a header row.
///
/// The delimiter is detected from the header (comma, semicolon or tab). Rows
/// whose value cell is empty or a missing-value marker are skipped with a
/// warning; every other defect is an error carrying the 1-based file line.
pub fn load_price_csv(path: impl AsRef<Path>, columns: &ColumnSpec) -> Result<PriceSeries> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let header_line = text.lines().next().unwrap_or_default();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(header_line))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let date_idx = find(&columns.date)?;
    let value_idx = find(&columns.value)?;

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let raw_value = record.get(value_idx).unwrap_or("");
        if is_missing(raw_value) {
            warn!("{}: skipping line {line} with missing value", path.display());
            continue;
        }
        let raw_date = record.get(date_idx).unwrap_or("");
        let date = parse_date(raw_date).ok_or_else(|| Error::MalformedRow {
            line,
            reason: format!("unparseable date `{raw_date}`"),
        })?;
        let value = parse_value(raw_value).ok_or_else(|| Error::MalformedRow {
            line,
            reason: format!("unparseable value `{raw_value}`"),
        })?;
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositivePrice { line });
        }
        if dates.last().is_some_and(|prev| date <= *prev) {
            return Err(Error::NonMonotoneDates { line });
        }
        dates.push(date);
        values.push(value);
    }

    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    PriceSeries::new(label, dates, values)
}

/// `r[t] = ln p[t+1] - ln p[t]`.
pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let p = prices.values();
    if p.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: p.len(),
        });
    }
    let values = p.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    Ok(ReturnSeries {
        values,
        label: prices.label().to_string(),
        source_length: p.len(),
    })
}

/// Stretches returns into `[10, 90]` for plotting: `40 r / max|r| + 50`.
pub fn display_transform(returns: &ReturnSeries) -> Result<Vec<f64>> {
    let max_abs = returns.values().iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    if returns.is_empty() || max_abs == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    Ok(returns
        .values()
        .iter()
        .map(|r| 40.0 * r / max_abs + 50.0)
        .collect())
}
