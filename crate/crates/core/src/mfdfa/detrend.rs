use crate::error::{Error, Result};

use super::config::DetrendOrder;

/// Orthonormal polynomial basis over a box of `len` points.
///
/// The abscissa `1..=len` is centered and scaled to `[-1, 1]` before
/// Gram-Schmidt (applied twice), which keeps the quadratic fit well
/// conditioned up to the largest boxes. Projecting a window onto this basis
/// is the least-squares polynomial fit.
#[derive(Debug, Clone)]
pub struct PolynomialBasis {
    len: usize,
    vectors: Vec<Vec<f64>>,
}

impl PolynomialBasis {
    pub fn new(len: usize, degree: usize) -> Result<Self> {
        if len < degree + 2 {
            return Err(Error::Underdetermined { len, order: degree });
        }
        let center = (len as f64 + 1.0) / 2.0;
        let half = (len as f64 - 1.0) / 2.0;
        let x: Vec<f64> = (1..=len).map(|t| (t as f64 - center) / half).collect();

        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let mut v: Vec<f64> = x.iter().map(|xi| xi.powi(k as i32)).collect();
            for _ in 0..2 {
                for u in &vectors {
                    let c = dot(&v, u);
                    v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= c * ui);
                }
            }
            let norm = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|vi| *vi /= norm);
            vectors.push(v);
        }
        Ok(Self { len, vectors })
    }

    pub fn for_order(len: usize, order: DetrendOrder) -> Result<Self> {
        Self::new(len, order.degree())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Writes `window - fit` into `out`.
    pub fn residuals_into(&self, window: &[f64], out: &mut [f64]) {
        debug_assert_eq!(window.len(), self.len);
        out.copy_from_slice(window);
        for u in &self.vectors {
            let c = dot(out, u);
            out.iter_mut().zip(u).for_each(|(o, ui)| *o -= c * ui);
        }
    }

    /// Mean squared residual of `window` after removing the fit.
    pub fn residual_mean_square(&self, window: &[f64], scratch: &mut [f64]) -> f64 {
        self.residuals_into(window, scratch);
        dot(scratch, scratch) / self.len as f64
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Residuals of `values` after a least-squares polynomial fit of the given order.
pub fn detrend_segment(values: &[f64], order: DetrendOrder) -> Result<Vec<f64>> {
    let basis = PolynomialBasis::for_order(values.len(), order)?;
    let mut out = vec![0.0; values.len()];
    basis.residuals_into(values, &mut out);
    Ok(out)
}
