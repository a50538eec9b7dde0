//! Ordinary least squares via Householder QR.

use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};

/// Classical OLS fit with homoskedastic standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_ss: f64,
    pub total_ss: f64,
    pub df_resid: usize,
}

impl OlsFit {
    pub fn r_squared(&self) -> f64 {
        if self.total_ss == 0.0 {
            return if self.residual_ss == 0.0 { 1.0 } else { 0.0 };
        }
        (1.0 - self.residual_ss / self.total_ss).clamp(0.0, 1.0)
    }

    pub fn t_stats(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.std_errors)
            .map(|(&b, &se)| ratio(b, se))
            .collect()
    }

    /// Two-sided p-values of the t statistics.
    pub fn t_p_values(&self) -> Vec<f64> {
        self.t_stats()
            .into_iter()
            .map(|t| two_sided_t_p_value(t, self.df_resid))
            .collect()
    }

    /// F statistic of the full model against the intercept-only model.
    pub fn f_stat(&self) -> f64 {
        let p = self.coefficients.len();
        let explained = (self.total_ss - self.residual_ss).max(0.0) / (p - 1) as f64;
        ratio(explained, self.residual_ss / self.df_resid as f64)
    }

    pub fn f_p_value(&self) -> f64 {
        let f = self.f_stat();
        let d1 = (self.coefficients.len() - 1) as f64;
        if f.is_nan() {
            return 1.0;
        }
        if f.is_infinite() {
            return 0.0;
        }
        FisherSnedecor::new(d1, self.df_resid as f64)
            .map(|dist| dist.sf(f))
            .unwrap_or(f64::NAN)
    }
}

/// `num / den`, mapping a zero denominator to a signed infinity (or 0 for `0/0`).
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            num.signum() * f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn two_sided_t_p_value(t: f64, df: usize) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    if t.is_nan() {
        return f64::NAN;
    }
    StudentsT::new(0.0, 1.0, df as f64)
        .map(|dist| (2.0 * dist.sf(t.abs())).min(1.0))
        .unwrap_or(f64::NAN)
}

/// Fits `y ~ X beta` where `rows` holds the rows of `X`.
///
/// An intercept column, if wanted, must be part of `rows`; `total_ss` is
/// always taken about the mean of `y`.
pub fn ols(rows: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if n != y.len() || p == 0 || rows.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidConfig("design matrix shape mismatch".into()));
    }
    if n <= p {
        return Err(Error::GridTooSmall { needed: p + 1, got: n });
    }

    // Column-major copy, reduced in place to R.
    let mut a: Vec<Vec<f64>> = (0..p).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut qty = y.to_vec();
    let mut diag_scale = 0.0_f64;
    for k in 0..p {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        diag_scale = diag_scale.max(norm);
        if norm <= 1e-12 * diag_scale.max(f64::MIN_POSITIVE) {
            return Err(Error::RankDeficient);
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |col: &mut [f64]| {
            let d: f64 = col.iter().zip(&v).map(|(c, vi)| c * vi).sum();
            let f = 2.0 * d / vnorm2;
            col.iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        };
        for col in a.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        reflect(&mut qty[k..]);
    }

    // Back substitution for beta and R^{-1} for the covariance.
    let r = |i: usize, j: usize| a[j][i];
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (qty[i] - s) / r(i, i);
    }
    let mut rinv = vec![vec![0.0; p]; p];
    for i in (0..p).rev() {
        rinv[i][i] = 1.0 / r(i, i);
        for j in i + 1..p {
            let s: f64 = (i + 1..=j).map(|k| r(i, k) * rinv[k][j]).sum();
            rinv[i][j] = -s / r(i, i);
        }
    }

    let residual_ss: f64 = rows
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let fit: f64 = row.iter().zip(&beta).map(|(x, b)| x * b).sum();
            (yi - fit).powi(2)
        })
        .sum();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let total_ss: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let df_resid = n - p;
    let sigma2 = residual_ss / df_resid as f64;
    let std_errors = (0..p)
        .map(|i| (sigma2 * rinv[i].iter().map(|v| v * v).sum::<f64>()).sqrt())
        .collect();

    Ok(OlsFit {
        coefficients: beta,
        std_errors,
        residual_ss,
        total_ss,
        df_resid,
    })
}

/// Straight-line fit `y = a + b x`; returns the full OLS record.
pub fn line_fit(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| vec![1.0, xi]).collect();
    ols(&rows, y)
}
