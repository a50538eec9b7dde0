use std::path::PathBuf;

use mfdfa_core::mfdfa::{log_scale_grid, q_grid};
use mfdfa_core::mftest::ExternalRow;
use mfdfa_core::synth::{binomial_cascade, fgn, gaussian_white_noise, CascadeSpec, FbmSpec};
use mfdfa_core::{AnalysisConfig, ColumnSpec, DetrendOrder, Error, ProfileKind, Result, SurrogateSettings};
use serde::{Deserialize, Serialize};

/// Synthetic input generated in place of a data file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthSpec {
    Cascade { levels: u32, p: f64, shuffle_seed: Option<u64> },
    Fgn { n: usize, hurst: f64, seed: u64 },
    WhiteNoise { n: usize, seed: u64 },
}

impl SynthSpec {
    /// Increment series of the generator.
    pub fn increments(&self) -> Result<Vec<f64>> {
        match *self {
            SynthSpec::Cascade { levels, p, shuffle_seed } => binomial_cascade(&CascadeSpec {
                shuffle_seed,
                ..CascadeSpec::new(levels, p)?
            }),
            SynthSpec::Fgn { n, hurst, seed } => fgn(&FbmSpec { n, hurst, seed }),
            SynthSpec::WhiteNoise { n, seed } => {
                if n == 0 {
                    return Err(Error::InvalidConfig("white noise length must be positive".into()));
                }
                Ok(gaussian_white_noise(n, seed))
            }
        }
    }

    /// Factor applied to the increments when they are written as prices.
    pub fn default_price_scale(&self) -> f64 {
        match self {
            SynthSpec::Cascade { .. } => 1.0,
            _ => 0.01,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SynthSpec::Cascade { levels, p, .. } => format!("cascade-p{p}-k{levels}"),
            SynthSpec::Fgn { n, hurst, .. } => format!("fgn-H{hurst}-n{n}"),
            SynthSpec::WhiteNoise { n, .. } => format!("white-noise-n{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InputSource {
    Csv { path: PathBuf, date_col: String, value_col: String },
    Synth { spec: SynthSpec },
}

impl InputSource {
    pub fn columns(&self) -> Option<ColumnSpec> {
        match self {
            InputSource::Csv { date_col, value_col, .. } => Some(ColumnSpec {
                date: date_col.clone(),
                value: value_col.clone(),
            }),
            InputSource::Synth { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub s_min: usize,
    pub s_max: usize,
    pub s_count: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            q_min: AnalysisConfig::DEFAULT_Q_MIN,
            q_max: AnalysisConfig::DEFAULT_Q_MAX,
            q_step: AnalysisConfig::DEFAULT_Q_STEP,
            s_min: AnalysisConfig::DEFAULT_S_MIN,
            s_max: AnalysisConfig::DEFAULT_S_MAX,
            s_count: AnalysisConfig::DEFAULT_S_COUNT,
        }
    }
}

impl GridParams {
    pub fn analysis(&self, order: DetrendOrder) -> Result<AnalysisConfig> {
        AnalysisConfig::new(
            q_grid(self.q_min, self.q_max, self.q_step)?,
            log_scale_grid(self.s_min, self.s_max, self.s_count)?,
            order,
        )
    }
}

/// Everything that determines a run. Serialized verbatim into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: InputSource,
    pub orders: Vec<DetrendOrder>,
    pub grid: GridParams,
    pub ensemble_size: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    pub significance: f64,
    /// Thread count for the ensemble stage; `None` uses every core.
    pub workers: Option<usize>,
    pub profile: ProfileKind,
    pub max_iterations: usize,
    pub spectrum_tolerance: f64,
    pub export_surrogates: bool,
    #[serde(default)]
    pub external: Vec<ExternalRow>,
}

impl RunConfig {
    pub fn new(input: InputSource, out_dir: impl Into<PathBuf>) -> Self {
        let s = SurrogateSettings::default();
        Self {
            input,
            orders: vec![DetrendOrder::Linear, DetrendOrder::Quadratic],
            grid: GridParams::default(),
            ensemble_size: s.ensemble_size,
            base_seed: s.base_seed,
            out_dir: out_dir.into(),
            significance: s.significance,
            workers: None,
            profile: s.profile,
            max_iterations: s.max_iterations,
            spectrum_tolerance: s.spectrum_tolerance,
            export_surrogates: false,
            external: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.orders.is_empty() {
            return Err(Error::InvalidConfig("at least one detrending order is required".into()));
        }
        let mut seen = self.orders.clone();
        seen.sort_by_key(|o| o.degree());
        seen.dedup();
        if seen.len() != self.orders.len() {
            return Err(Error::InvalidConfig("detrending orders listed twice".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("worker count must be positive".into()));
        }
        self.surrogate_settings().validate()?;
        for &o in &self.orders {
            self.grid.analysis(o)?;
        }
        Ok(())
    }

    pub fn surrogate_settings(&self) -> SurrogateSettings {
        SurrogateSettings {
            ensemble_size: self.ensemble_size,
            base_seed: self.base_seed,
            max_iterations: self.max_iterations,
            spectrum_tolerance: self.spectrum_tolerance,
            significance: self.significance,
            profile: self.profile,
            keep_surrogates: self.export_surrogates,
        }
    }

    pub fn analyses(&self) -> Result<Vec<AnalysisConfig>> {
        self.orders.iter().map(|&o| self.grid.analysis(o)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth() -> InputSource {
        InputSource::Synth {
            spec: SynthSpec::WhiteNoise { n: 1024, seed: 1 },
        }
    }

    #[test]
    fn defaults_validate() {
        RunConfig::new(synth(), "/tmp/x").validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = RunConfig::new(synth(), "/tmp/x");
        c.orders.clear();
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(synth(), "/tmp/x");
        c.ensemble_size = 1;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(synth(), "/tmp/x");
        c.orders = vec![DetrendOrder::Linear, DetrendOrder::Linear];
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(synth(), "/tmp/x");
        c.grid.q_min = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = RunConfig::new(synth(), "/tmp/x");
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
