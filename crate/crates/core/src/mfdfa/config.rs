use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree of the detrending polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum DetrendOrder {
    Linear,
    Quadratic,
}

impl DetrendOrder {
    pub fn degree(self) -> usize {
        match self {
            DetrendOrder::Linear => 1,
            DetrendOrder::Quadratic => 2,
        }
    }

    /// Smallest box that still over-determines the fit.
    pub fn min_box(self) -> usize {
        self.degree() + 2
    }
}

impl TryFrom<u8> for DetrendOrder {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(DetrendOrder::Linear),
            2 => Ok(DetrendOrder::Quadratic),
            other => Err(Error::InvalidConfig(format!(
                "detrend order must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl From<DetrendOrder> for u8 {
    fn from(o: DetrendOrder) -> u8 {
        o.degree() as u8
    }
}

impl std::fmt::Display for DetrendOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(&self.degree(), f)
    }
}

/// Evenly spaced orders from `min` to `max` inclusive.
///
/// Points within 1e-9 of an integer are snapped onto it so that `q = 0` and
/// `q = 2` are hit exactly on decimal steps such as 0.1.
pub fn q_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max <= min {
        return Err(Error::InvalidConfig(format!(
            "bad q range [{min}, {max}] step {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let q = min + i as f64 * step;
            if (q - q.round()).abs() < 1e-9 {
                q.round()
            } else {
                q
            }
        })
        .collect())
}

/// `count` log-uniformly spaced box sizes in `[min, max]`, rounded and deduplicated.
pub fn log_scale_grid(min: usize, max: usize, count: usize) -> Result<Vec<usize>> {
    if min == 0 || max < min || count == 0 {
        return Err(Error::InvalidConfig(format!(
            "bad scale range [{min}, {max}] with {count} points"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let ratio = (max as f64 / min as f64).ln();
    let mut scales: Vec<usize> = (0..count)
        .map(|i| (min as f64 * (ratio * i as f64 / (count - 1) as f64).exp()).round() as usize)
        .collect();
    scales.dedup();
    Ok(scales)
}

/// Grids and detrending order for one MF-DFA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    q_grid: Vec<f64>,
    scale_grid: Vec<usize>,
    detrend_order: DetrendOrder,
}

impl AnalysisConfig {
    pub const DEFAULT_Q_MIN: f64 = -5.0;
    pub const DEFAULT_Q_MAX: f64 = 5.0;
    pub const DEFAULT_Q_STEP: f64 = 0.25;
    pub const DEFAULT_S_MIN: usize = 20;
    pub const DEFAULT_S_MAX: usize = 316;
    pub const DEFAULT_S_COUNT: usize = 30;

    pub fn new(q_grid: Vec<f64>, scale_grid: Vec<usize>, detrend_order: DetrendOrder) -> Result<Self> {
        if q_grid.len() < 3 {
            return Err(Error::GridTooSmall {
                needed: 3,
                got: q_grid.len(),
            });
        }
        if q_grid.iter().any(|q| !q.is_finite()) || q_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "q grid must be finite and strictly increasing".into(),
            ));
        }
        for required in [0.0, 2.0] {
            if !q_grid.contains(&required) {
                return Err(Error::InvalidConfig(format!("q grid must contain q = {required}")));
            }
        }
        if scale_grid.len() < 3 {
            return Err(Error::InvalidConfig(format!(
                "scale grid needs at least 3 sizes, got {}",
                scale_grid.len()
            )));
        }
        if scale_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "scale grid must be strictly increasing".into(),
            ));
        }
        if scale_grid[0] < detrend_order.min_box() {
            return Err(Error::ScaleOutOfRange {
                scale: scale_grid[0],
                min: detrend_order.min_box(),
                max: usize::MAX,
            });
        }
        Ok(Self {
            q_grid,
            scale_grid,
            detrend_order,
        })
    }

    /// `q` in [-5, 5] step 0.25 and 30 log-spaced scales in [20, 316].
    pub fn with_defaults(detrend_order: DetrendOrder) -> Self {
        let q = q_grid(Self::DEFAULT_Q_MIN, Self::DEFAULT_Q_MAX, Self::DEFAULT_Q_STEP)
            .expect("default q grid");
        let s = log_scale_grid(Self::DEFAULT_S_MIN, Self::DEFAULT_S_MAX, Self::DEFAULT_S_COUNT)
            .expect("default scale grid");
        Self::new(q, s, detrend_order).expect("default config is valid")
    }

    pub fn q_grid(&self) -> &[f64] {
        &self.q_grid
    }

    pub fn scale_grid(&self) -> &[usize] {
        &self.scale_grid
    }

    pub fn detrend_order(&self) -> DetrendOrder {
        self.detrend_order
    }

    pub fn with_order(&self, detrend_order: DetrendOrder) -> Self {
        Self {
            detrend_order,
            ..self.clone()
        }
    }

    /// Checks the scale bounds against a profile of length `n`.
    pub fn validate_for_length(&self, n: usize) -> Result<()> {
        let min_scale = self.scale_grid[0];
        if n < 4 * min_scale {
            return Err(Error::SeriesTooShort {
                needed: 4 * min_scale,
                got: n,
            });
        }
        let upper = n / 4;
        if let Some(&s) = self.scale_grid.iter().find(|&&s| s > upper) {
            return Err(Error::ScaleOutOfRange {
                scale: s,
                min: self.detrend_order.min_box(),
                max: upper,
            });
        }
        Ok(())
    }

    pub fn q_index(&self, q: f64) -> Option<usize> {
        self.q_grid.iter().position(|&x| x == q)
    }
}
