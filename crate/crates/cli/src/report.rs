//! Fixed-width text rendering of a [`TestReport`].

use std::fmt::Write;

use mfdfa_core::TestReport;

fn mark(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_mark(b: Option<bool>) -> &'static str {
    b.map_or("-", mark)
}

fn opt_p(p: Option<f64>) -> String {
    p.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}

pub fn render(r: &TestReport) -> String {
    let mut s = String::new();
    let q = &r.quad_fit;
    let _ = writeln!(s, "{}  (detrending order {}, {} surrogates, level {})", r.label, r.detrend_order, r.ensemble_size, r.significance);
    let _ = writeln!(
        s,
        "H(2) = {:.4}   surrogates {:.4} +/- {:.4}   within 1 sd: {}   within 3 sd: {}",
        r.hurst_band.h2,
        r.hurst_band.ensemble_mean,
        r.hurst_band.ensemble_std,
        mark(r.hurst_band.within_one_sigma),
        mark(r.hurst_band.within_three_sigma)
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "tau(q) = a0 + a1 q + a2 q^2");
    let _ = writeln!(s, "{:>12} {:>10} {:>8} {:>10} {:>8} {:>10} {:>10} {:>8}", "F", "p", "R2", "a1", "t", "p", "a2", "t");
    let _ = writeln!(
        s,
        "{:>12.0} {:>10.4} {:>8.4} {:>10.4} {:>8.0} {:>10.4} {:>10.4} {:>8.0}   p(a2) = {:.4}",
        q.f_stat, q.f_p_value, q.r_squared, q.coefficients[1], q.t_stats[1], q.p_values[1], q.coefficients[2], q.t_stats[2], q.p_values[2]
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<22} {:>9} {:>9} {:>9} {:>8}", "statistic", "observed", "mean", "sd", "p");
    for (name, t) in [("singularity width", &r.width), ("spectrum difference", &r.spectrum_difference)] {
        let _ = writeln!(s, "{:<22} {:>9.4} {:>9.4} {:>9.4} {:>8.4}", name, t.observed, t.ensemble_mean, t.ensemble_std, t.p_value);
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<10} {:>8} {:>6} {:>6} {:>7} {:>9} {:>9}",
        "method", "dH/dq<0", "bell", "a2!=0", "a2<0", "p(width)", "p(df)"
    );
    let _ = writeln!(
        s,
        "{:<10} {:>8} {:>6} {:>6} {:>7} {:>9.4} {:>9.4}",
        format!("MF-DFA-{}", r.detrend_order),
        mark(r.shapes.hurst_decreasing),
        mark(r.shapes.bell_shaped),
        mark(q.p_values[2] < r.significance),
        mark(q.coefficients[2] < 0.0),
        r.width.p_value,
        r.spectrum_difference.p_value
    );
    for e in &r.external {
        let _ = writeln!(
            s,
            "{:<10} {:>8} {:>6} {:>6} {:>7} {:>9} {:>9}",
            e.method,
            opt_mark(e.hurst_decreasing),
            opt_mark(e.bell_shaped),
            opt_mark(e.a2_nonzero),
            opt_mark(e.a2_negative),
            opt_p(e.width_p_value),
            opt_p(e.spectrum_difference_p_value)
        );
    }
    if r.shapes.knot {
        let _ = writeln!(s, "singularity spectrum is knotted");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "verdict: {}", r.verdict);
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}
