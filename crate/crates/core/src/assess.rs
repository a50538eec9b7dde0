//! End-to-end assessment of one increment series: MF-DFA of the original,
//! an IAAFT ensemble, MF-DFA of every surrogate and the resulting tests.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;
use crate::mfdfa::{analyze, AnalysisConfig, FluctuationSurface, MultifractalSpectrum, Profile, ProfileKind};
use crate::mftest::{ensemble_statistics, verdict, EnsembleStats, TestReport, DEFAULT_SIGNIFICANCE};
use crate::surrogate::{ensemble, IaaftConfig, SurrogateEnsemble};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateSettings {
    pub ensemble_size: usize,
    pub base_seed: u64,
    pub max_iterations: usize,
    pub spectrum_tolerance: f64,
    pub significance: f64,
    pub profile: ProfileKind,
    /// Keep the surrogate series in the result (memory heavy for large ensembles).
    pub keep_surrogates: bool,
}

impl Default for SurrogateSettings {
    fn default() -> Self {
        let iaaft = IaaftConfig::default();
        Self {
            ensemble_size: 1000,
            base_seed: 0,
            max_iterations: iaaft.max_iterations,
            spectrum_tolerance: iaaft.spectrum_tolerance,
            significance: DEFAULT_SIGNIFICANCE,
            profile: ProfileKind::Cumulative,
            keep_surrogates: false,
        }
    }
}

impl SurrogateSettings {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "ensemble size must be at least 2, got {}",
                self.ensemble_size
            )));
        }
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "significance {} not in (0, 1)",
                self.significance
            )));
        }
        Ok(())
    }

    fn iaaft(&self) -> IaaftConfig {
        IaaftConfig {
            max_iterations: self.max_iterations,
            spectrum_tolerance: self.spectrum_tolerance,
            rng_seed: self.base_seed,
        }
    }
}

/// Everything computed for one detrending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub surface: FluctuationSurface,
    pub spectrum: MultifractalSpectrum,
    pub surrogate_spectra: Vec<MultifractalSpectrum>,
    pub stats: EnsembleStats,
    pub report: TestReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentSet {
    pub label: String,
    pub settings: SurrogateSettings,
    pub seeds: Vec<u64>,
    pub iterations: Vec<usize>,
    pub residuals: Vec<f64>,
    pub surrogates: Option<SurrogateEnsemble>,
    pub per_order: Vec<Assessment>,
}

/// Runs the full pipeline for every configuration in `analyses`.
///
/// The surrogate ensemble is generated once and shared by all configurations.
pub fn assess(
    series: &ReturnSeries,
    analyses: &[AnalysisConfig],
    settings: &SurrogateSettings,
) -> Result<AssessmentSet> {
    assess_cancellable(series, analyses, settings, &AtomicBool::new(false))
}

/// [`assess`] that gives up with [`Error::Cancelled`] once `cancel` is set.
pub fn assess_cancellable(
    series: &ReturnSeries,
    analyses: &[AnalysisConfig],
    settings: &SurrogateSettings,
    cancel: &AtomicBool,
) -> Result<AssessmentSet> {
    settings.validate()?;
    if analyses.is_empty() {
        return Err(Error::InvalidConfig("no analysis configuration given".into()));
    }
    let x = series.values();
    for cfg in analyses {
        cfg.validate_for_length(x.len())?;
    }
    let profile = |inc: &[f64]| Profile::from_increments(inc, settings.profile);
    let check = || {
        if cancel.load(Ordering::Relaxed) {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    };

    let originals: Vec<_> = analyses
        .iter()
        .map(|cfg| analyze(&profile(x)?, cfg))
        .collect::<Result<_>>()?;
    check()?;

    let ens = ensemble(
        series.label(),
        x,
        settings.ensemble_size,
        settings.base_seed,
        &settings.iaaft(),
    )?;
    check()?;

    // spectra[i][k]: surrogate i analyzed with configuration k.
    let spectra: Vec<Vec<MultifractalSpectrum>> = ens
        .surrogates
        .par_iter()
        .map(|s| {
            check()?;
            let p = profile(s)?;
            analyses.iter().map(|cfg| Ok(analyze(&p, cfg)?.1)).collect()
        })
        .collect::<Result<_>>()?;

    let per_order = originals
        .into_iter()
        .enumerate()
        .map(|(k, (surface, spectrum))| {
            let surrogate_spectra: Vec<_> = spectra.iter().map(|row| row[k].clone()).collect();
            let stats = ensemble_statistics(&surrogate_spectra)?;
            let report = verdict(series.label(), &spectrum, &stats, settings.significance)?;
            Ok(Assessment {
                surface,
                spectrum,
                surrogate_spectra,
                stats,
                report,
            })
        })
        .collect::<Result<_>>()?;

    Ok(AssessmentSet {
        label: series.label().to_string(),
        settings: *settings,
        seeds: ens.seeds.clone(),
        iterations: ens.iterations.clone(),
        residuals: ens.residuals.clone(),
        surrogates: settings.keep_surrogates.then_some(ens),
        per_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfdfa::{log_scale_grid, q_grid, DetrendOrder};
    use crate::synth::gaussian_white_noise;

    fn small_cfg(order: DetrendOrder) -> AnalysisConfig {
        AnalysisConfig::new(
            q_grid(-3.0, 3.0, 0.5).unwrap(),
            log_scale_grid(16, 128, 8).unwrap(),
            order,
        )
        .unwrap()
    }

    #[test]
    fn shared_ensemble_for_both_orders() {
        let x = ReturnSeries::from_values("wn", gaussian_white_noise(1024, 3)).unwrap();
        let settings = SurrogateSettings {
            ensemble_size: 6,
            base_seed: 11,
            keep_surrogates: true,
            ..Default::default()
        };
        let cfgs = [small_cfg(DetrendOrder::Linear), small_cfg(DetrendOrder::Quadratic)];
        let set = assess(&x, &cfgs, &settings).unwrap();
        assert_eq!(set.per_order.len(), 2);
        assert_eq!(set.seeds.len(), 6);
        assert_eq!(set.surrogates.as_ref().unwrap().len(), 6);
        for a in &set.per_order {
            assert_eq!(a.stats.size, 6);
            let p = a.report.width.p_value * 6.0;
            assert_eq!(p, p.round());
        }
        assert_eq!(set, assess(&x, &cfgs, &settings).unwrap());
    }

    #[test]
    fn rejects_bad_settings() {
        let x = ReturnSeries::from_values("wn", gaussian_white_noise(1024, 3)).unwrap();
        let cfg = [small_cfg(DetrendOrder::Linear)];
        let one = SurrogateSettings { ensemble_size: 1, ..Default::default() };
        assert!(matches!(assess(&x, &cfg, &one), Err(Error::InvalidConfig(_))));
        assert!(assess(&x, &[], &SurrogateSettings::default()).is_err());
        let short = ReturnSeries::from_values("s", gaussian_white_noise(40, 3)).unwrap();
        assert!(assess(&short, &cfg, &SurrogateSettings { ensemble_size: 2, ..Default::default() }).is_err());
    }

    #[test]
    fn cancellation() {
        let x = ReturnSeries::from_values("wn", gaussian_white_noise(1024, 3)).unwrap();
        let cfg = [small_cfg(DetrendOrder::Linear)];
        let flag = AtomicBool::new(true);
        let settings = SurrogateSettings { ensemble_size: 4, ..Default::default() };
        assert!(matches!(
            assess_cancellable(&x, &cfg, &settings, &flag),
            Err(Error::Cancelled)
        ));
    }
}
