use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;

/// How an increment series becomes the profile that gets detrended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileKind {
    /// Running sum of the increments (the log-price path for log returns).
    #[default]
    Cumulative,
    /// Price levels rebuilt as `anchor * exp(cumsum)`, for analyzing raw prices.
    Levels { anchor: f64 },
}

/// The series analyzed by MF-DFA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    values: Vec<f64>,
}

impl Profile {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    pub fn from_increments(increments: &[f64], kind: ProfileKind) -> Result<Self> {
        if increments.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        let mut acc = 0.0;
        let cumulative = increments.iter().map(|r| {
            acc += r;
            acc
        });
        let values = match kind {
            ProfileKind::Cumulative => cumulative.collect(),
            ProfileKind::Levels { anchor } => cumulative.map(|c| anchor * c.exp()).collect(),
        };
        Self::from_values(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Population standard deviation.
    pub fn std_dev(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        (self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
    }
}

/// Cumulative sum of the returns, anchored at zero.
pub fn make_profile(returns: &ReturnSeries) -> Result<Profile> {
    Profile::from_increments(returns.values(), ProfileKind::Cumulative)
}
