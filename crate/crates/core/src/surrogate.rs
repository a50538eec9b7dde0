//! Iterative amplitude adjusted Fourier transform (IAAFT) surrogates.
//!
//! A surrogate keeps the exact set of values of the source series and, as
//! closely as the iteration allows, its Fourier amplitude spectrum, while
//! scrambling any nonlinear temporal structure.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};

pub const MIN_LENGTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IaaftConfig {
    pub max_iterations: usize,
    /// Relative L2 distance between amplitude spectra that counts as converged.
    pub spectrum_tolerance: f64,
    pub rng_seed: u64,
}

impl Default for IaaftConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            spectrum_tolerance: 1e-8,
            rng_seed: 0,
        }
    }
}

impl IaaftConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.spectrum_tolerance > 0.0) {
            return Err(Error::InvalidConfig("spectrum tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    SpectrumConverged,
    RankFixedPoint,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IaaftOutcome {
    pub surrogate: Vec<f64>,
    pub iterations: usize,
    /// Relative L2 distance between the surrogate's amplitude spectrum and the source's.
    pub spectrum_residual: f64,
    pub stop: StopReason,
}

struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl FftPair {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            scratch: vec![Complex64::default(); len],
        }
    }

    fn forward_real(&mut self, x: &[f64], buf: &mut [Complex64]) {
        buf.iter_mut()
            .zip(x)
            .for_each(|(b, &v)| *b = Complex64::new(v, 0.0));
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }
}

/// Moduli of the discrete Fourier transform of a real series.
pub fn amplitude_spectrum(x: &[f64]) -> Vec<f64> {
    let mut fft = FftPair::new(x.len());
    let mut buf = vec![Complex64::default(); x.len()];
    fft.forward_real(x, &mut buf);
    buf.iter().map(|c| c.norm()).collect()
}

/// `||a - target|| / ||target||`.
pub fn spectrum_residual(amplitudes: &[f64], target: &[f64]) -> f64 {
    let num: f64 = amplitudes
        .iter()
        .zip(target)
        .map(|(a, t)| (a - t).powi(2))
        .sum();
    let den: f64 = target.iter().map(|t| t * t).sum();
    (num / den).sqrt()
}

/// One IAAFT surrogate of `x`.
///
/// Starts from a seeded random permutation, then alternates (a) imposing the
/// source's Fourier amplitudes while keeping the iterate's phases and (b)
/// replacing the result by the source's sorted values in rank order. Stops on
/// spectrum convergence, when the rank order stops changing, or after
/// `max_iterations`. The returned series is always the rank-adjusted iterate,
/// so its values are exactly those of `x`.
pub fn iaaft(x: &[f64], cfg: &IaaftConfig) -> Result<IaaftOutcome> {
    cfg.validate()?;
    let n = x.len();
    if n < MIN_LENGTH {
        return Err(Error::LengthTooShort { got: n, min: MIN_LENGTH });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ConstantSeries);
    }

    let mut fft = FftPair::new(n);
    let mut buf = vec![Complex64::default(); n];
    fft.forward_real(x, &mut buf);
    let target: Vec<f64> = buf.iter().map(|c| c.norm()).collect();
    let target_norm = target.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut rng = stream(cfg.rng_seed);
    let mut current = x.to_vec();
    current.shuffle(&mut rng);

    let mut order: Vec<(f64, u32)> = Vec::with_capacity(n);
    let mut previous_ranks: Vec<u32> = Vec::new();
    let mut ranks: Vec<u32> = Vec::with_capacity(n);

    for iteration in 0..cfg.max_iterations {
        fft.forward_real(&current, &mut buf);
        let residual = buf
            .iter()
            .zip(&target)
            .map(|(c, t)| (c.norm() - t).powi(2))
            .sum::<f64>()
            .sqrt()
            / target_norm;
        if residual <= cfg.spectrum_tolerance {
            return Ok(IaaftOutcome {
                surrogate: current,
                iterations: iteration,
                spectrum_residual: residual,
                stop: StopReason::SpectrumConverged,
            });
        }

        for (c, &t) in buf.iter_mut().zip(&target) {
            let m = c.norm();
            *c = if m > 0.0 { *c * (t / m) } else { Complex64::new(t, 0.0) };
        }
        fft.inverse.process_with_scratch(&mut buf, &mut fft.scratch);

        order.clear();
        order.extend(buf.iter().enumerate().map(|(i, c)| (c.re, i as u32)));
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        ranks.clear();
        ranks.extend(order.iter().map(|&(_, i)| i));
        for (&idx, &v) in ranks.iter().zip(&sorted) {
            current[idx as usize] = v;
        }

        if ranks == previous_ranks {
            // Same rank order as last time, so `current` did not change.
            return Ok(IaaftOutcome {
                surrogate: current,
                iterations: iteration + 1,
                spectrum_residual: residual,
                stop: StopReason::RankFixedPoint,
            });
        }
        std::mem::swap(&mut ranks, &mut previous_ranks);
    }

    fft.forward_real(&current, &mut buf);
    let residual = buf
        .iter()
        .zip(&target)
        .map(|(c, t)| (c.norm() - t).powi(2))
        .sum::<f64>()
        .sqrt()
        / target_norm;
    Ok(IaaftOutcome {
        surrogate: current,
        iterations: cfg.max_iterations,
        spectrum_residual: residual,
        stop: StopReason::MaxIterations,
    })
}

/// A set of surrogates of one source series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateEnsemble {
    pub source_label: String,
    pub base_seed: u64,
    pub surrogates: Vec<Vec<f64>>,
    pub seeds: Vec<u64>,
    pub iterations: Vec<usize>,
    pub residuals: Vec<f64>,
}

impl SurrogateEnsemble {
    pub fn len(&self) -> usize {
        self.surrogates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surrogates.is_empty()
    }
}

/// `size` surrogates with member seeds derived from `base_seed`.
///
/// `cfg.rng_seed` is ignored; member `i` uses `derive_seed(base_seed, i)`.
/// Members are generated in parallel and the result does not depend on the
/// thread count.
pub fn ensemble(
    label: &str,
    x: &[f64],
    size: usize,
    base_seed: u64,
    cfg: &IaaftConfig,
) -> Result<SurrogateEnsemble> {
    if size == 0 {
        return Err(Error::InvalidConfig("ensemble size must be positive".into()));
    }
    let seeds: Vec<u64> = (0..size as u64).map(|i| derive_seed(base_seed, i)).collect();
    let outcomes: Vec<IaaftOutcome> = seeds
        .par_iter()
        .map(|&seed| iaaft(x, &IaaftConfig { rng_seed: seed, ..*cfg }))
        .collect::<Result<_>>()?;
    let mut ens = SurrogateEnsemble {
        source_label: label.to_string(),
        base_seed,
        surrogates: Vec::with_capacity(size),
        seeds,
        iterations: Vec::with_capacity(size),
        residuals: Vec::with_capacity(size),
    };
    for o in outcomes {
        ens.iterations.push(o.iterations);
        ens.residuals.push(o.spectrum_residual);
        ens.surrogates.push(o.surrogate);
    }
    Ok(ens)
}

#[derive(Serialize)]
struct EnsembleManifest<'a> {
    source_label: &'a str,
    base_seed: u64,
    size: usize,
    length: usize,
    seeds: &'a [u64],
    iterations: &'a [usize],
    residuals: &'a [f64],
}

impl SurrogateEnsemble {
    fn manifest(&self) -> EnsembleManifest<'_> {
        EnsembleManifest {
            source_label: &self.source_label,
            base_seed: self.base_seed,
            size: self.len(),
            length: self.surrogates.first().map_or(0, Vec::len),
            seeds: &self.seeds,
            iterations: &self.iterations,
            residuals: &self.residuals,
        }
    }

    /// Single long-format table `surrogate,t,value` plus `<path>.manifest.json`.
    pub fn write_columnar(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "surrogate,t,value")?;
        for (i, s) in self.surrogates.iter().enumerate() {
            for (t, v) in s.iter().enumerate() {
                writeln!(w, "{i},{t},{v}")?;
            }
        }
        w.flush()?;
        let manifest = path.with_extension("manifest.json");
        fs::write(manifest, serde_json::to_vec_pretty(&self.manifest())?)?;
        Ok(())
    }

    /// One `surrogate_NNNN.csv` (`t,value`) per member plus `manifest.json`.
    pub fn write_directory(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (i, s) in self.surrogates.iter().enumerate() {
            let mut w = BufWriter::new(File::create(dir.join(format!("surrogate_{i:04}.csv")))?);
            writeln!(w, "t,value")?;
            for (t, v) in s.iter().enumerate() {
                writeln!(w, "{t},{v}")?;
            }
            w.flush()?;
        }
        fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&self.manifest())?)?;
        Ok(())
    }
}
