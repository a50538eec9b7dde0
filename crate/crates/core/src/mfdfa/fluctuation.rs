use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::{AnalysisConfig, DetrendOrder};
use super::detrend::PolynomialBasis;
use super::profile::Profile;

/// Boxes whose RMS falls below this fraction of the profile's standard
/// deviation are left out of the power means and counted.
pub const DEGENERATE_BOX_FLOOR: f64 = 1e-12;

/// Windows of length `s` covering `0..n`.
///
/// When `s` divides `n` the windows tile the series. Otherwise `floor(n/s)`
/// windows run forward from the start and as many run backward from the end.
pub fn partition_segments(n: usize, s: usize) -> Result<Vec<Range<usize>>> {
    if s == 0 {
        return Err(Error::InvalidConfig("box size must be positive".into()));
    }
    if s > n {
        return Err(Error::ScaleTooLarge { scale: s, len: n });
    }
    let count = n / s;
    let forward = (0..count).map(|v| v * s..(v + 1) * s);
    if n % s == 0 {
        return Ok(forward.collect());
    }
    let backward = (0..count).map(|v| n - (count - v) * s..n - (count - v - 1) * s);
    Ok(forward.chain(backward).collect())
}

/// Root mean square of the residuals.
pub fn local_fluctuation(residuals: &[f64]) -> f64 {
    if residuals.is_empty() {
        return 0.0;
    }
    (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedMean {
    pub value: f64,
    pub excluded: usize,
}

/// Power mean of order `q` over the entries that are at least `floor`.
///
/// Evaluated in log space, `(1/q) ln mean(exp(q ln F))`, so large `|q|`
/// neither overflows nor underflows. `q = 0` is the geometric mean.
pub fn generalized_mean(locals: &[f64], q: f64, floor: f64) -> Result<GeneralizedMean> {
    let logs: Vec<f64> = locals
        .iter()
        .filter(|&&f| f >= floor && f > 0.0)
        .map(|f| f.ln())
        .collect();
    let excluded = locals.len() - logs.len();
    if logs.is_empty() {
        return Err(Error::AllBoxesDegenerate { q, scale: 0 });
    }
    Ok(GeneralizedMean {
        value: power_mean_of_logs(&logs, q),
        excluded,
    })
}

fn power_mean_of_logs(logs: &[f64], q: f64) -> f64 {
    let n = logs.len() as f64;
    if q == 0.0 {
        return (logs.iter().sum::<f64>() / n).exp();
    }
    let shift = logs
        .iter()
        .map(|l| q * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (q * l - shift).exp()).sum();
    ((shift + sum.ln() - n.ln()) / q).exp()
}

/// `q`-th order overall fluctuation of a list of box fluctuations. Only exact
/// zeros are excluded here; the surface computation applies a relative floor.
pub fn overall_fluctuation(locals: &[f64], q: f64) -> Result<f64> {
    generalized_mean(locals, q, f64::MIN_POSITIVE).map(|m| m.value)
}

/// Overall fluctuations on the full `(q, s)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSurface {
    pub q_grid: Vec<f64>,
    pub scale_grid: Vec<usize>,
    pub detrend_order: DetrendOrder,
    /// `values[q_index][s_index]`.
    pub values: Vec<Vec<f64>>,
    /// Boxes excluded by the degenerate floor, same layout as `values`.
    pub excluded: Vec<Vec<usize>>,
    /// Number of boxes used at each scale before exclusion.
    pub boxes: Vec<usize>,
}

impl FluctuationSurface {
    pub fn get(&self, q_index: usize, s_index: usize) -> f64 {
        self.values[q_index][s_index]
    }

    pub fn total_excluded(&self) -> usize {
        self.excluded.iter().flatten().sum()
    }
}

struct ScaleColumn {
    values: Vec<f64>,
    excluded: usize,
    boxes: usize,
}

fn scale_column(profile: &[f64], s: usize, cfg: &AnalysisConfig, floor: f64) -> Result<ScaleColumn> {
    let basis = PolynomialBasis::for_order(s, cfg.detrend_order())?;
    let windows = partition_segments(profile.len(), s)?;
    let mut scratch = vec![0.0; s];
    let logs: Vec<f64> = windows
        .iter()
        .map(|w| basis.residual_mean_square(&profile[w.clone()], &mut scratch).sqrt())
        .filter(|&f| f >= floor && f > 0.0)
        .map(f64::ln)
        .collect();
    let excluded = windows.len() - logs.len();
    if logs.is_empty() {
        return Err(Error::AllBoxesDegenerate {
            q: cfg.q_grid()[0],
            scale: s,
        });
    }
    let values = cfg
        .q_grid()
        .iter()
        .map(|&q| power_mean_of_logs(&logs, q))
        .collect();
    Ok(ScaleColumn {
        values,
        excluded,
        boxes: windows.len(),
    })
}

/// Partition, detrend and average over every cell of the grid.
///
/// Scales are processed in parallel; each cell depends only on its own
/// inputs, so the result is identical to a sequential run.
pub fn fluctuation_surface(profile: &Profile, cfg: &AnalysisConfig) -> Result<FluctuationSurface> {
    cfg.validate_for_length(profile.len())?;
    let floor = DEGENERATE_BOX_FLOOR * profile.std_dev();
    let columns: Vec<ScaleColumn> = cfg
        .scale_grid()
        .par_iter()
        .map(|&s| scale_column(profile.values(), s, cfg, floor))
        .collect::<Result<_>>()?;

    let nq = cfg.q_grid().len();
    let values = (0..nq)
        .map(|qi| columns.iter().map(|c| c.values[qi]).collect())
        .collect();
    let excluded = (0..nq)
        .map(|_| columns.iter().map(|c| c.excluded).collect())
        .collect();
    Ok(FluctuationSurface {
        q_grid: cfg.q_grid().to_vec(),
        scale_grid: cfg.scale_grid().to_vec(),
        detrend_order: cfg.detrend_order(),
        values,
        excluded,
        boxes: columns.iter().map(|c| c.boxes).collect(),
    })
}
