use mfdfa_core::mftest::{quadratic_tau_fit, ExternalRow};
use mfdfa_core::surrogate::{amplitude_spectrum, spectrum_residual};
use mfdfa_core::synth::{fgn, gaussian_white_noise, FbmSpec};
use mfdfa_core::{
    assess, ensemble, AnalysisConfig, DetrendOrder, IaaftConfig, ReturnSeries, SurrogateSettings, Verdict,
};

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

#[test]
fn white_noise_ensemble_keeps_values_exactly() {
    let x = gaussian_white_noise(2048, 40);
    let ens = ensemble("wn", &x, 100, 9, &IaaftConfig::default()).unwrap();
    let want = sorted(&x);
    assert_eq!(ens.len(), 100);
    assert!(ens.surrogates.iter().all(|s| sorted(s) == want));
    let target = amplitude_spectrum(&x);
    for (s, r) in ens.surrogates.iter().zip(&ens.residuals) {
        let oracle = spectrum_residual(&amplitude_spectrum(s), &target);
        assert!((oracle - r).abs() <= 1e-12 * oracle.max(1e-300));
    }
    // Distinct seeds give distinct members.
    for i in 0..ens.len() {
        for j in i + 1..ens.len() {
            assert_ne!(ens.surrogates[i], ens.surrogates[j]);
        }
    }
}

#[test]
fn fbm_surrogates_preserve_hurst_index() {
    let x = fgn(&FbmSpec { n: 1 << 14, hurst: 0.7, seed: 77 }).unwrap();
    let r = ReturnSeries::from_values("fgn", x).unwrap();
    let cfg = AnalysisConfig::with_defaults(DetrendOrder::Linear);
    let settings = SurrogateSettings {
        ensemble_size: 100,
        base_seed: 5,
        ..Default::default()
    };
    let set = assess(&r, &[cfg], &settings).unwrap();
    let a = &set.per_order[0];
    let i2 = a.stats.q_index(2.0).unwrap();
    let h2 = a.spectrum.h2();
    assert!((a.stats.mean_hurst[i2] - h2).abs() <= 0.05, "{} vs {h2}", a.stats.mean_hurst[i2]);
    assert!(a.report.hurst_band.within_three_sigma);
}

#[test]
fn white_noise_surrogate_spread_smallest_near_second_order() {
    // On a 0.25 grid the minimum can fall one step below q = 2; among the
    // integer orders q = 2 is the smallest.
    let r = ReturnSeries::from_values("wn", gaussian_white_noise(1 << 12, 7)).unwrap();
    let cfg = AnalysisConfig::with_defaults(DetrendOrder::Linear);
    let settings = SurrogateSettings {
        ensemble_size: 1000,
        base_seed: 7,
        ..Default::default()
    };
    let set = assess(&r, &[cfg], &settings).unwrap();
    let st = &set.per_order[0].stats;
    let s2 = st.std_hurst[st.q_index(2.0).unwrap()];
    for (q, s) in st.q_grid.iter().zip(&st.std_hurst) {
        if q.fract() == 0.0 {
            assert!(s2 <= *s, "q={q}: {s} < {s2}");
        }
    }
    let global = st.std_hurst.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(s2 <= 1.05 * global);
}

/// Solves the 3x3 normal equations by Cramer's rule.
fn normal_equations(q: &[f64], y: &[f64]) -> [f64; 3] {
    let mut m = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&x, &v) in q.iter().zip(y) {
        let row = [1.0, x, x * x];
        for i in 0..3 {
            b[i] += row[i] * v;
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(mk) / d;
    }
    out
}

#[test]
fn quadratic_fit_matches_normal_equations() {
    let q = mfdfa_core::mfdfa::q_grid(-5.0, 5.0, 0.25).unwrap();
    let noise = gaussian_white_noise(q.len() * 20, 3);
    for (k, eps) in noise.chunks(q.len()).enumerate() {
        let a = [-1.0 + 0.01 * k as f64, 0.6 - 0.005 * k as f64, -0.02 + 0.002 * k as f64];
        let tau: Vec<f64> = q
            .iter()
            .zip(eps)
            .map(|(x, e)| a[0] + a[1] * x + a[2] * x * x + 1e-3 * e)
            .collect();
        let fit = quadratic_tau_fit(&q, &tau).unwrap();
        let want = normal_equations(&q, &tau);
        for i in 0..3 {
            assert!((fit.coefficients[i] - want[i]).abs() <= 1e-10);
        }
    }
}

#[test]
fn external_rows_round_trip_through_json() {
    let row = ExternalRow {
        method: "MF-DMA".into(),
        hurst_decreasing: Some(true),
        bell_shaped: Some(false),
        a2_nonzero: Some(true),
        a2_negative: Some(true),
        width_p_value: None,
        spectrum_difference_p_value: Some(0.2),
    };
    let text = serde_json::to_string(&row).unwrap();
    let back: ExternalRow = serde_json::from_str(&text).unwrap();
    assert_eq!(back, row);
    assert_eq!(serde_json::to_string(&Verdict::ApparentOnly).unwrap(), "\"apparent_only\"");
}
