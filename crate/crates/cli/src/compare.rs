//! Side-by-side view of the same series analyzed with different detrending orders.

use mfdfa_core::{DetrendOrder, Error, Result, TestReport, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub order: DetrendOrder,
    pub h2: f64,
    pub delta_alpha: f64,
    pub delta_f: f64,
    pub a2: f64,
    pub a2_p_value: f64,
    pub width_p_value: f64,
    pub spectrum_difference_p_value: f64,
    pub verdict: Verdict,
}

impl OrderRow {
    fn from_report(r: &TestReport) -> Self {
        Self {
            order: r.detrend_order,
            h2: r.hurst_band.h2,
            delta_alpha: r.width.observed,
            delta_f: r.spectrum_difference.observed,
            a2: r.quad_fit.coefficients[2],
            a2_p_value: r.quad_fit.p_values[2],
            width_p_value: r.width.p_value,
            spectrum_difference_p_value: r.spectrum_difference.p_value,
            verdict: r.verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderComparison {
    pub label: String,
    pub rows: Vec<OrderRow>,
    /// Differences of the second row minus the first, in row order.
    pub h2_difference: f64,
    pub delta_alpha_difference: f64,
    pub delta_f_difference: f64,
    pub width_p_difference: f64,
    pub verdict_disagreement: bool,
    /// The width test rejects at `significance` for one order only.
    pub width_test_disagreement: bool,
}

/// Compares two reports of one series. Both must come from the same input,
/// order grid, ensemble size and significance level.
pub fn compare_orders(a: &TestReport, b: &TestReport) -> Result<OrderComparison> {
    if a.label != b.label || a.ensemble_size != b.ensemble_size || a.significance != b.significance {
        return Err(Error::GridMismatch);
    }
    if a.quad_fit.df_resid != b.quad_fit.df_resid {
        return Err(Error::GridMismatch);
    }
    let (ra, rb) = (OrderRow::from_report(a), OrderRow::from_report(b));
    let level = a.significance;
    Ok(OrderComparison {
        label: a.label.clone(),
        h2_difference: rb.h2 - ra.h2,
        delta_alpha_difference: rb.delta_alpha - ra.delta_alpha,
        delta_f_difference: rb.delta_f - ra.delta_f,
        width_p_difference: rb.width_p_value - ra.width_p_value,
        verdict_disagreement: ra.verdict != rb.verdict,
        width_test_disagreement: (ra.width_p_value < level) != (rb.width_p_value < level),
        rows: vec![ra, rb],
    })
}

impl OrderComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "order,H2,delta_alpha,delta_f,a2,a2_p,width_p,delta_f_p,verdict\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.order,
                r.h2,
                r.delta_alpha,
                r.delta_f,
                r.a2,
                r.a2_p_value,
                r.width_p_value,
                r.spectrum_difference_p_value,
                serde_json::to_value(r.verdict).unwrap().as_str().unwrap_or_default()
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("Order comparison for {}\n", self.label);
        out.push_str(&format!(
            "{:>5} {:>8} {:>8} {:>8} {:>9} {:>8} {:>8}  {}\n",
            "order", "H(2)", "dalpha", "df", "a2", "p_width", "p_df", "verdict"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>5} {:>8.4} {:>8.4} {:>8.4} {:>9.5} {:>8.4} {:>8.4}  {}\n",
                r.order,
                r.h2,
                r.delta_alpha,
                r.delta_f,
                r.a2,
                r.width_p_value,
                r.spectrum_difference_p_value,
                r.verdict
            ));
        }
        if self.verdict_disagreement {
            out.push_str("! verdicts differ between detrending orders\n");
        }
        if self.width_test_disagreement {
            out.push_str("! width test decision differs between detrending orders\n");
        }
        out
    }
}
