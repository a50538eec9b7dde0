//! Synthetic series with known multifractal properties.

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

/// Deterministic binomial multiplicative cascade on `2^levels` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeSpec {
    pub levels: u32,
    /// Weight given to the left half at every split.
    pub p: f64,
    /// When set, the side receiving `p` is chosen at random at every split.
    pub shuffle_seed: Option<u64>,
}

impl CascadeSpec {
    pub const MAX_LEVELS: u32 = 30;

    pub fn new(levels: u32, p: f64) -> Result<Self> {
        let spec = Self {
            levels,
            p,
            shuffle_seed: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 0.5) {
            return Err(Error::InvalidConfig(format!("cascade weight {} not in (0, 0.5]", self.p)));
        }
        if self.levels == 0 || self.levels > Self::MAX_LEVELS {
            return Err(Error::InvalidConfig(format!(
                "cascade levels {} not in [1, {}]",
                self.levels,
                Self::MAX_LEVELS
            )));
        }
        Ok(())
    }
}

/// Cell masses of the cascade, in spatial order. They sum to one.
pub fn binomial_cascade(spec: &CascadeSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = spec.shuffle_seed.map(stream);
    let mut cells = vec![1.0];
    for _ in 0..spec.levels {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for &m in &cells {
            let swap = rng.as_mut().is_some_and(|r| r.random::<bool>());
            let (left, right) = if swap {
                (1.0 - spec.p, spec.p)
            } else {
                (spec.p, 1.0 - spec.p)
            };
            next.push(m * left);
            next.push(m * right);
        }
        cells = next;
    }
    Ok(cells)
}

/// Generalized Hurst exponent of the cascade's cumulative profile,
/// `H(q) = (1 - log2(p^q + (1-p)^q)) / q`, with its finite limit at `q = 0`.
pub fn cascade_analytic_hq(p: f64, q: f64) -> f64 {
    let r = 1.0 - p;
    if q == 0.0 {
        return -(p.log2() + r.log2()) / 2.0;
    }
    // 1 - log2(p^q + r^q) = -log2(1 + (p^q - 1 + r^q - 1) / 2), written with
    // expm1/ln_1p so that small |q| does not cancel.
    let half_excess = ((q * p.ln()).exp_m1() + (q * r.ln()).exp_m1()) / 2.0;
    -half_excess.ln_1p() / std::f64::consts::LN_2 / q
}

/// Fractional Brownian motion of length `n` and Hurst index `hurst`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FbmSpec {
    pub n: usize,
    pub hurst: f64,
    pub seed: u64,
}

impl FbmSpec {
    fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::InvalidConfig(format!("Hurst index {} not in (0, 1)", self.hurst)));
        }
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(Error::InvalidConfig(format!("fBm length {} must be a power of two", self.n)));
        }
        Ok(())
    }
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(k: usize, hurst: f64) -> f64 {
    let k = k as f64;
    let h2 = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

const MAX_EMBEDDING_DOUBLINGS: u32 = 6;

/// Fractional Gaussian noise by circulant embedding (Davies-Harte / Wood-Chan).
///
/// The covariance is embedded in a circulant matrix of size `2m` with
/// `m = n` initially, doubled while the eigenvalues are not all nonnegative.
/// The output has exactly the fGn covariance.
pub fn fgn(spec: &FbmSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut planner = FftPlanner::<f64>::new();
    let mut half = spec.n;
    let eigenvalues = loop {
        let size = 2 * half;
        let mut row: Vec<Complex64> = (0..size)
            .map(|j| {
                let lag = if j <= half { j } else { size - j };
                Complex64::new(fgn_autocovariance(lag, spec.hurst), 0.0)
            })
            .collect();
        planner.plan_fft_forward(size).process(&mut row);
        let lambda: Vec<f64> = row.iter().map(|c| c.re).collect();
        let max = lambda.iter().cloned().fold(0.0, f64::max);
        if lambda.iter().all(|&l| l >= -1e-10 * max) {
            break lambda.into_iter().map(|l| l.max(0.0)).collect::<Vec<_>>();
        }
        if half >= spec.n << MAX_EMBEDDING_DOUBLINGS {
            return Err(Error::EmbeddingFailure { size });
        }
        half *= 2;
    };

    let size = eigenvalues.len();
    let m = size as f64;
    let mut rng = stream(spec.seed);
    let mut normal = || rng.sample::<f64, _>(StandardNormal);
    let mut z = vec![Complex64::default(); size];
    z[0] = Complex64::new((eigenvalues[0] / m).sqrt() * normal(), 0.0);
    z[size / 2] = Complex64::new((eigenvalues[size / 2] / m).sqrt() * normal(), 0.0);
    for k in 1..size / 2 {
        let scale = (eigenvalues[k] / (2.0 * m)).sqrt();
        let (a, b) = (normal(), normal());
        z[k] = Complex64::new(scale * a, scale * b);
        z[size - k] = z[k].conj();
    }
    planner.plan_fft_forward(size).process(&mut z);
    Ok(z[..spec.n].iter().map(|c| c.re).collect())
}

/// fBm path `B[t] = sum_{i <= t} fGn[i]`.
pub fn fbm(spec: &FbmSpec) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    Ok(fgn(spec)?
        .into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect())
}

/// I.i.d. standard normal draws.
pub fn gaussian_white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
