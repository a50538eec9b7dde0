use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::line_fit;

use super::config::{AnalysisConfig, DetrendOrder};
use super::fluctuation::{fluctuation_surface, FluctuationSurface};
use super::profile::Profile;

/// Log-log regression of one row of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstFit {
    pub q: f64,
    pub h: f64,
    pub stderr: f64,
    pub r_squared: f64,
}

/// Slope of `ln F_q(s)` against `ln s` for every order on the surface.
pub fn hurst_spectrum(surface: &FluctuationSurface) -> Result<Vec<HurstFit>> {
    surface
        .q_grid
        .iter()
        .zip(&surface.values)
        .map(|(&q, row)| {
            let (x, y): (Vec<f64>, Vec<f64>) = surface
                .scale_grid
                .iter()
                .zip(row)
                .filter(|(_, &f)| f > 0.0 && f.is_finite())
                .map(|(&s, &f)| ((s as f64).ln(), f.ln()))
                .unzip();
            if x.len() < 3 {
                return Err(Error::InsufficientScales { q });
            }
            let fit = line_fit(&x, &y)?;
            Ok(HurstFit {
                q,
                h: fit.coefficients[1],
                stderr: fit.std_errors[1],
                r_squared: fit.r_squared(),
            })
        })
        .collect()
}

/// `tau(q) = q H(q) - 1`.
pub fn mass_exponents(q_grid: &[f64], hurst: &[f64]) -> Vec<f64> {
    q_grid.iter().zip(hurst).map(|(q, h)| q * h - 1.0).collect()
}

/// Singularity strengths and spectrum derived from `tau(q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityCurve {
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub delta_alpha: f64,
    pub delta_f: f64,
}

/// Derivative at `x` of the quadratic through three points.
fn three_point_derivative(xs: [f64; 3], ys: [f64; 3], x: f64) -> f64 {
    let [x0, x1, x2] = xs;
    let [y0, y1, y2] = ys;
    y0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
        + y1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
        + y2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
}

/// `alpha = d tau / dq`, `f = q alpha - tau`, and the two width statistics.
///
/// The derivative uses three-point stencils everywhere: centered inside the
/// grid (the usual central difference on a uniform grid) and one-sided at
/// the two ends, so a quadratic `tau` is differentiated exactly. The widths
/// are `alpha(q_min) - alpha(q_max)` and `1 - (f(q_min) + f(q_max)) / 2`.
pub fn singularity_spectrum(q_grid: &[f64], tau: &[f64]) -> Result<SingularityCurve> {
    let n = q_grid.len();
    if n < 3 || tau.len() != n {
        return Err(Error::GridTooSmall { needed: 3, got: n.min(tau.len()) });
    }
    if q_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("q grid must be strictly increasing".into()));
    }
    let alpha: Vec<f64> = (0..n)
        .map(|i| {
            let c = i.clamp(1, n - 2);
            three_point_derivative(
                [q_grid[c - 1], q_grid[c], q_grid[c + 1]],
                [tau[c - 1], tau[c], tau[c + 1]],
                q_grid[i],
            )
        })
        .collect();
    let f: Vec<f64> = q_grid
        .iter()
        .zip(&alpha)
        .zip(tau)
        .map(|((q, a), t)| q * a - t)
        .collect();
    Ok(SingularityCurve {
        delta_alpha: alpha[0] - alpha[n - 1],
        delta_f: 1.0 - (f[0] + f[n - 1]) / 2.0,
        alpha,
        f,
    })
}

/// `H`, `tau`, `alpha` and `f` aligned on one order grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultifractalSpectrum {
    pub q_grid: Vec<f64>,
    pub detrend_order: DetrendOrder,
    pub hurst: Vec<f64>,
    pub hurst_stderr: Vec<f64>,
    pub hurst_r_squared: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub delta_alpha: f64,
    pub delta_f: f64,
}

impl MultifractalSpectrum {
    pub fn from_surface(surface: &FluctuationSurface) -> Result<Self> {
        let fits = hurst_spectrum(surface)?;
        Self::from_hurst(
            &surface.q_grid,
            surface.detrend_order,
            &fits.iter().map(|f| f.h).collect::<Vec<_>>(),
            fits.iter().map(|f| f.stderr).collect(),
            fits.iter().map(|f| f.r_squared).collect(),
        )
    }

    /// Builds the remaining functions from a given `H(q)`.
    pub fn from_hurst(
        q_grid: &[f64],
        detrend_order: DetrendOrder,
        hurst: &[f64],
        hurst_stderr: Vec<f64>,
        hurst_r_squared: Vec<f64>,
    ) -> Result<Self> {
        let tau = mass_exponents(q_grid, hurst);
        let curve = singularity_spectrum(q_grid, &tau)?;
        Ok(Self {
            q_grid: q_grid.to_vec(),
            detrend_order,
            hurst: hurst.to_vec(),
            hurst_stderr,
            hurst_r_squared,
            tau,
            alpha: curve.alpha,
            f: curve.f,
            delta_alpha: curve.delta_alpha,
            delta_f: curve.delta_f,
        })
    }

    pub fn q_index(&self, q: f64) -> Option<usize> {
        self.q_grid.iter().position(|&x| x == q)
    }

    /// `H(2)`, the ordinary Hurst index.
    pub fn h2(&self) -> f64 {
        self.q_index(2.0).map_or(f64::NAN, |i| self.hurst[i])
    }
}

/// Fluctuation surface and spectrum of a profile.
pub fn analyze(profile: &Profile, cfg: &AnalysisConfig) -> Result<(FluctuationSurface, MultifractalSpectrum)> {
    let surface = fluctuation_surface(profile, cfg)?;
    let spectrum = MultifractalSpectrum::from_surface(&surface)?;
    Ok((surface, spectrum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfdfa::config::q_grid;

    fn default_q() -> Vec<f64> {
        q_grid(-5.0, 5.0, 0.25).unwrap()
    }

    #[test]
    fn exact_power_law_surface() {
        let q = vec![-1.0, 0.0, 2.0];
        let s = vec![20usize, 40, 80, 160];
        let row: Vec<f64> = s.iter().map(|&s| 3.0 * (s as f64).powf(0.7)).collect();
        let surface = FluctuationSurface {
            q_grid: q.clone(),
            scale_grid: s.clone(),
            detrend_order: DetrendOrder::Linear,
            values: vec![row.clone(); 3],
            excluded: vec![vec![0; 4]; 3],
            boxes: vec![1; 4],
        };
        for fit in hurst_spectrum(&surface).unwrap() {
            assert!((fit.h - 0.7).abs() < 1e-12);
            assert!(fit.stderr < 1e-10);
            assert!((fit.r_squared - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_scales() {
        let surface = FluctuationSurface {
            q_grid: vec![0.0],
            scale_grid: vec![10, 20, 40],
            detrend_order: DetrendOrder::Linear,
            values: vec![vec![1.0, 0.0, 2.0]],
            excluded: vec![vec![0; 3]],
            boxes: vec![1; 3],
        };
        assert!(matches!(
            hurst_spectrum(&surface),
            Err(Error::InsufficientScales { .. })
        ));
    }

    #[test]
    fn mass_exponent_examples() {
        let q = default_q();
        let tau = mass_exponents(&q, &vec![0.5; q.len()]);
        for (qi, t) in q.iter().zip(&tau) {
            assert_eq!(*t, 0.5 * qi - 1.0);
        }
        let i0 = q.iter().position(|&x| x == 0.0).unwrap();
        let i2 = q.iter().position(|&x| x == 2.0).unwrap();
        assert_eq!(tau[i0], -1.0);
        assert_eq!(tau[i2], 0.0);
        let wild: Vec<f64> = q.iter().map(|x| (x * 1.3).sin() + 7.0).collect();
        assert_eq!(mass_exponents(&q, &wild)[i0], -1.0);
    }

    #[test]
    fn monofractal_spectrum() {
        let q = default_q();
        let tau: Vec<f64> = q.iter().map(|x| 0.5 * x - 1.0).collect();
        let c = singularity_spectrum(&q, &tau).unwrap();
        assert!(c.alpha.iter().all(|a| (a - 0.5).abs() < 1e-12));
        assert!(c.f.iter().all(|f| (f - 1.0).abs() < 1e-12));
        assert!(c.delta_alpha.abs() < 1e-12);
        assert!(c.delta_f.abs() < 1e-12);
    }

    #[test]
    fn quadratic_tau_differentiates_exactly() {
        let q = default_q();
        let tau: Vec<f64> = q.iter().map(|x| -1.0 + 0.6 * x - 0.01 * x * x).collect();
        let c = singularity_spectrum(&q, &tau).unwrap();
        for (x, a) in q.iter().zip(&c.alpha) {
            assert!((a - (0.6 - 0.02 * x)).abs() < 1e-12, "q={x} alpha={a}");
        }
        assert!((c.delta_alpha - 0.2).abs() < 1e-12);
    }

    #[test]
    fn legendre_consistency_and_fixed_points() {
        let q = default_q();
        let hurst: Vec<f64> = q.iter().map(|x| 0.6 + 0.1 * (0.7 * x).tanh() - 0.003 * x).collect();
        let spec = MultifractalSpectrum::from_hurst(
            &q,
            DetrendOrder::Linear,
            &hurst,
            vec![0.0; q.len()],
            vec![1.0; q.len()],
        )
        .unwrap();
        let i0 = spec.q_index(0.0).unwrap();
        assert_eq!(spec.tau[i0], -1.0);
        assert_eq!(spec.f[i0], 1.0);
        for i in 0..q.len() {
            assert!((spec.f[i] - (q[i] * spec.alpha[i] - spec.tau[i])).abs() <= 1e-12);
        }
    }

    #[test]
    fn grid_too_small() {
        assert!(matches!(
            singularity_spectrum(&[0.0, 1.0], &[0.0, 1.0]),
            Err(Error::GridTooSmall { .. })
        ));
    }
}
