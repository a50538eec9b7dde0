//! Tests that compare a series' multifractal spectrum with the spectra of
//! its surrogates, and the verdict built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfdfa::{DetrendOrder, MultifractalSpectrum};
use crate::regression::ols;

pub const DEFAULT_SIGNIFICANCE: f64 = 0.05;
/// Allowed upward step of `H(q)` (and of `alpha(q)`) before a curve stops
/// counting as non-increasing.
pub const MONOTONE_TOLERANCE: f64 = 1e-6;

/// Per-order sample moments over an ensemble of spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub q_grid: Vec<f64>,
    pub size: usize,
    pub mean_hurst: Vec<f64>,
    pub std_hurst: Vec<f64>,
    pub mean_tau: Vec<f64>,
    pub std_tau: Vec<f64>,
    pub mean_alpha: Vec<f64>,
    pub std_alpha: Vec<f64>,
    pub mean_f: Vec<f64>,
    pub std_f: Vec<f64>,
    pub delta_alpha: Vec<f64>,
    pub delta_f: Vec<f64>,
}

fn mean_std(samples: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = samples.clone().count() as f64;
    let mean = samples.clone().sum::<f64>() / n;
    let var = samples.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn column_moments(
    spectra: &[MultifractalSpectrum],
    nq: usize,
    pick: impl Fn(&MultifractalSpectrum) -> &[f64],
) -> (Vec<f64>, Vec<f64>) {
    (0..nq)
        .map(|i| mean_std(spectra.iter().map(|s| pick(s)[i])))
        .unzip()
}

impl EnsembleStats {
    pub fn delta_alpha_moments(&self) -> (f64, f64) {
        mean_std(self.delta_alpha.iter().copied())
    }

    pub fn delta_f_moments(&self) -> (f64, f64) {
        mean_std(self.delta_f.iter().copied())
    }

    pub fn q_index(&self, q: f64) -> Option<usize> {
        self.q_grid.iter().position(|&x| x == q)
    }
}

/// Means and (n-1)-denominator standard deviations of `H`, `tau`, `alpha`
/// and `f` at every order, plus the raw `delta_alpha` / `delta_f` samples.
pub fn ensemble_statistics(spectra: &[MultifractalSpectrum]) -> Result<EnsembleStats> {
    if spectra.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "ensemble statistics need at least 2 spectra, got {}",
            spectra.len()
        )));
    }
    let q_grid = spectra[0].q_grid.clone();
    if spectra.iter().any(|s| s.q_grid != q_grid) {
        return Err(Error::GridMismatch);
    }
    let nq = q_grid.len();
    let (mean_hurst, std_hurst) = column_moments(spectra, nq, |s| &s.hurst);
    let (mean_tau, std_tau) = column_moments(spectra, nq, |s| &s.tau);
    let (mean_alpha, std_alpha) = column_moments(spectra, nq, |s| &s.alpha);
    let (mean_f, std_f) = column_moments(spectra, nq, |s| &s.f);
    Ok(EnsembleStats {
        q_grid,
        size: spectra.len(),
        mean_hurst,
        std_hurst,
        mean_tau,
        std_tau,
        mean_alpha,
        std_alpha,
        mean_f,
        std_f,
        delta_alpha: spectra.iter().map(|s| s.delta_alpha).collect(),
        delta_f: spectra.iter().map(|s| s.delta_f).collect(),
    })
}

/// OLS fit of `tau(q) = a0 + a1 q + a2 q^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadFit {
    pub coefficients: [f64; 3],
    pub std_errors: [f64; 3],
    pub t_stats: [f64; 3],
    pub p_values: [f64; 3],
    pub f_stat: f64,
    pub f_p_value: f64,
    pub r_squared: f64,
    pub df_resid: usize,
}

impl QuadFit {
    pub fn a2(&self) -> f64 {
        self.coefficients[2]
    }
}

/// Quadratic regression of the mass exponents on the order grid.
///
/// The sampling theory is the classical one even though neighboring grid
/// points are strongly dependent; the p-values are descriptive.
pub fn quadratic_tau_fit(q_grid: &[f64], tau: &[f64]) -> Result<QuadFit> {
    if q_grid.len() < 4 || tau.len() != q_grid.len() {
        return Err(Error::GridTooSmall {
            needed: 4,
            got: q_grid.len().min(tau.len()),
        });
    }
    let rows: Vec<Vec<f64>> = q_grid.iter().map(|&q| vec![1.0, q, q * q]).collect();
    let fit = ols(&rows, tau)?;
    let arr = |v: Vec<f64>| [v[0], v[1], v[2]];
    Ok(QuadFit {
        coefficients: arr(fit.coefficients.clone()),
        std_errors: arr(fit.std_errors.clone()),
        t_stats: arr(fit.t_stats()),
        p_values: arr(fit.t_p_values()),
        f_stat: fit.f_stat(),
        f_p_value: fit.f_p_value(),
        r_squared: fit.r_squared(),
        df_resid: fit.df_resid,
    })
}

/// Share of `samples` strictly greater than `observed`; ties do not count.
pub fn exceedance_p_value(observed: f64, samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples.iter().filter(|&&s| s > observed).count() as f64 / samples.len() as f64
}

/// Proportion of surrogates whose singularity width exceeds the original's.
pub fn width_test(delta_alpha: f64, stats: &EnsembleStats) -> f64 {
    exceedance_p_value(delta_alpha, &stats.delta_alpha)
}

/// Proportion of surrogates whose spectrum difference exceeds the original's.
/// Corroborating evidence only.
pub fn spectrum_difference_test(delta_f: f64, stats: &EnsembleStats) -> f64 {
    exceedance_p_value(delta_f, &stats.delta_f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    /// `H(q)` never rises by more than [`MONOTONE_TOLERANCE`].
    pub hurst_decreasing: bool,
    /// `alpha(q)` is non-increasing, i.e. `f(alpha)` is traced once from
    /// right to left without folding back. A flat `alpha` (monofractal) counts.
    pub bell_shaped: bool,
    /// `alpha(q)` goes both up and down, so the spectrum folds onto itself.
    pub knot: bool,
}

pub fn shape_diagnostics(spectrum: &MultifractalSpectrum) -> ShapeFlags {
    let tol = MONOTONE_TOLERANCE;
    let hurst_decreasing = spectrum.hurst.windows(2).all(|w| w[1] <= w[0] + tol);
    let rises = spectrum.alpha.windows(2).any(|w| w[1] - w[0] > tol);
    let falls = spectrum.alpha.windows(2).any(|w| w[1] - w[0] < -tol);
    ShapeFlags {
        hurst_decreasing,
        bell_shaped: !rises,
        knot: rises && falls,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    IntrinsicMultifractality,
    ApparentOnly,
    None,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::IntrinsicMultifractality => "intrinsic multifractality",
            Verdict::ApparentOnly => "apparent only",
            Verdict::None => "none",
        })
    }
}

/// Observed statistic against its surrogate distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateComparison {
    pub observed: f64,
    pub ensemble_mean: f64,
    pub ensemble_std: f64,
    pub p_value: f64,
}

/// `H(2)` of the original against the surrogate band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstBand {
    pub h2: f64,
    pub ensemble_mean: f64,
    pub ensemble_std: f64,
    pub within_one_sigma: bool,
    pub within_three_sigma: bool,
}

/// A row supplied from elsewhere (e.g. another estimator) for side-by-side reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalRow {
    pub method: String,
    pub hurst_decreasing: Option<bool>,
    pub bell_shaped: Option<bool>,
    pub a2_nonzero: Option<bool>,
    pub a2_negative: Option<bool>,
    pub width_p_value: Option<f64>,
    pub spectrum_difference_p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub label: String,
    pub detrend_order: DetrendOrder,
    pub significance: f64,
    pub ensemble_size: usize,
    pub hurst_band: HurstBand,
    pub quad_fit: QuadFit,
    pub width: SurrogateComparison,
    pub spectrum_difference: SurrogateComparison,
    pub shapes: ShapeFlags,
    pub a2_significant_negative: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(default)]
    pub external: Vec<ExternalRow>,
}

/// Decision rule. The spectrum-difference test never enters it.
pub fn classify(shapes: &ShapeFlags, quad: &QuadFit, width_p: f64, significance: f64) -> Verdict {
    let apparent = shapes.hurst_decreasing
        && shapes.bell_shaped
        && quad.a2() < 0.0
        && quad.p_values[2] < significance;
    match (apparent, width_p < significance) {
        (true, true) => Verdict::IntrinsicMultifractality,
        (true, false) => Verdict::ApparentOnly,
        _ => Verdict::None,
    }
}

pub const NOTE_OLS: &str = "t/F p-values for the tau(q) fit use classical OLS theory; grid points are serially dependent";
pub const NOTE_BELL: &str = "bell-shaped means alpha(q) non-increasing within 1e-6; knot means alpha(q) both rises and falls";
pub const NOTE_DELTA_F: &str = "the spectrum-difference test corroborates only and never decides the verdict";

/// Runs every test for one spectrum against its surrogate statistics.
pub fn verdict(
    label: &str,
    spectrum: &MultifractalSpectrum,
    stats: &EnsembleStats,
    significance: f64,
) -> Result<TestReport> {
    if spectrum.q_grid != stats.q_grid {
        return Err(Error::GridMismatch);
    }
    let quad = quadratic_tau_fit(&spectrum.q_grid, &spectrum.tau)?;
    let shapes = shape_diagnostics(spectrum);
    let (da_mean, da_std) = stats.delta_alpha_moments();
    let (df_mean, df_std) = stats.delta_f_moments();
    let width = SurrogateComparison {
        observed: spectrum.delta_alpha,
        ensemble_mean: da_mean,
        ensemble_std: da_std,
        p_value: width_test(spectrum.delta_alpha, stats),
    };
    let spectrum_difference = SurrogateComparison {
        observed: spectrum.delta_f,
        ensemble_mean: df_mean,
        ensemble_std: df_std,
        p_value: spectrum_difference_test(spectrum.delta_f, stats),
    };
    let i2 = stats.q_index(2.0).ok_or(Error::GridMismatch)?;
    let h2 = spectrum.hurst[i2];
    let (m, s) = (stats.mean_hurst[i2], stats.std_hurst[i2]);
    let hurst_band = HurstBand {
        h2,
        ensemble_mean: m,
        ensemble_std: s,
        within_one_sigma: (h2 - m).abs() <= s,
        within_three_sigma: (h2 - m).abs() <= 3.0 * s,
    };
    Ok(TestReport {
        label: label.to_string(),
        detrend_order: spectrum.detrend_order,
        significance,
        ensemble_size: stats.size,
        hurst_band,
        a2_significant_negative: quad.a2() < 0.0 && quad.p_values[2] < significance,
        verdict: classify(&shapes, &quad, width.p_value, significance),
        quad_fit: quad,
        width,
        spectrum_difference,
        shapes,
        notes: vec![NOTE_OLS.into(), NOTE_BELL.into(), NOTE_DELTA_F.into()],
        external: Vec::new(),
    })
}
