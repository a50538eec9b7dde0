//! Run directories: loading the input, running the analysis and writing artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::time::Instant;

use log::info;
use mfdfa_core::assess::assess_cancellable;
use mfdfa_core::mfdfa::analyze;
use mfdfa_core::{
    load_price_csv, log_returns, tables, Error, Profile, Result, ReturnSeries, TestReport,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::compare::{compare_orders, OrderComparison};
use crate::config::{InputSource, RunConfig};
use crate::report;

pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub load_ms: u128,
    pub analysis_ms: u128,
    pub write_ms: u128,
}

/// Record of a run. Together with the input file it reproduces every table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub label: String,
    pub input_sha256: String,
    pub input_length: usize,
    pub returns_length: usize,
    pub base_seed: u64,
    pub member_seeds: Vec<u64>,
    pub timings: StageTimings,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub reports: Vec<TestReport>,
    pub comparison: Option<OrderComparison>,
    pub manifest: RunManifest,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Returns, label, fingerprint and length of the raw input.
pub fn load_input(input: &InputSource) -> Result<(ReturnSeries, String, usize)> {
    match input {
        InputSource::Csv { path, .. } => {
            if !path.exists() {
                return Err(Error::FileNotFound(path.clone()));
            }
            let bytes = fs::read(path)?;
            let prices = load_price_csv(path, &input.columns().unwrap_or_default())?;
            let n = prices.len();
            Ok((log_returns(&prices)?, sha256_hex(&bytes), n))
        }
        InputSource::Synth { spec } => {
            let inc = spec.increments()?;
            let bytes: Vec<u8> = inc.iter().flat_map(|v| v.to_le_bytes()).collect();
            let n = inc.len();
            Ok((ReturnSeries::from_values(spec.label(), inc)?, sha256_hex(&bytes), n))
        }
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(f),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn order_dir(out: &Path, degree: usize) -> Result<PathBuf> {
    let dir = out.join(format!("order{degree}"));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Creates the run directory and its incomplete marker.
fn open_run_dir(out: &Path) -> Result<()> {
    let unwritable = |e: std::io::Error| Error::InvalidConfig(format!("output directory {}: {e}", out.display()));
    fs::create_dir_all(out).map_err(unwritable)?;
    let _ = fs::remove_file(out.join("error.txt"));
    fs::write(out.join(INCOMPLETE_MARKER), "run started, not finished\n").map_err(unwritable)?;
    Ok(())
}

fn close_run_dir<T>(out: &Path, result: Result<T>) -> Result<T> {
    match &result {
        Ok(_) => {
            fs::remove_file(out.join(INCOMPLETE_MARKER))?;
        }
        Err(e) => {
            let _ = fs::write(out.join("error.txt"), format!("{e}\n"));
        }
    }
    result
}

/// Full pipeline: spectra, surrogate ensemble, tests, tables and reports.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutcome> {
    run_pipeline_cancellable(cfg, &AtomicBool::new(false))
}

pub fn run_pipeline_cancellable(cfg: &RunConfig, cancel: &AtomicBool) -> Result<RunOutcome> {
    cfg.validate()?;
    let out = cfg.out_dir.clone();
    open_run_dir(&out)?;
    let result = analyze_run(cfg, cancel, &out);
    close_run_dir(&out, result)
}

fn analyze_run(cfg: &RunConfig, cancel: &AtomicBool, out: &Path) -> Result<RunOutcome> {
    let mut timings = StageTimings::default();
    let t = Instant::now();
    let (returns, fingerprint, input_length) = load_input(&cfg.input)?;
    timings.load_ms = t.elapsed().as_millis();
    info!("{}: {} returns", returns.label(), returns.len());

    let t = Instant::now();
    let analyses = cfg.analyses()?;
    let settings = cfg.surrogate_settings();
    let set = with_pool(cfg.workers, || assess_cancellable(&returns, &analyses, &settings, cancel))?;
    timings.analysis_ms = t.elapsed().as_millis();

    let t = Instant::now();
    let mut reports = Vec::new();
    for a in &set.per_order {
        let dir = order_dir(out, a.spectrum.detrend_order.degree())?;
        let mut report = a.report.clone();
        report.external = cfg.external.clone();
        tables::save_surface(&dir.join("surface.csv"), &a.surface)?;
        tables::save_spectrum(&dir.join("spectrum.csv"), &a.spectrum)?;
        tables::save_ensemble_stats(&dir.join("ensemble_stats.csv"), &a.stats)?;
        tables::save_width_samples(&dir.join("surrogate_widths.csv"), &a.stats, &set.seeds)?;
        write_json(&dir.join("report.json"), &report)?;
        fs::write(dir.join("report.txt"), report::render(&report))?;
        reports.push(report);
    }
    let mut ens_table = String::from("surrogate,seed,iterations,spectrum_residual\n");
    for (i, ((s, it), r)) in set.seeds.iter().zip(&set.iterations).zip(&set.residuals).enumerate() {
        ens_table.push_str(&format!("{i},{s},{it},{r}\n"));
    }
    fs::write(out.join("ensemble.csv"), ens_table)?;
    if let Some(ens) = &set.surrogates {
        ens.write_directory(&out.join("surrogates"))?;
    }
    let comparison = match reports.as_slice() {
        [a, b] => {
            let c = compare_orders(a, b)?;
            write_comparison(out, &c)?;
            Some(c)
        }
        _ => None,
    };
    timings.write_ms = t.elapsed().as_millis();

    let manifest = RunManifest {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "analyze".into(),
        config: cfg.clone(),
        label: returns.label().into(),
        input_sha256: fingerprint,
        input_length,
        returns_length: returns.len(),
        base_seed: cfg.base_seed,
        member_seeds: set.seeds.clone(),
        timings,
    };
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(RunOutcome {
        out_dir: out.to_path_buf(),
        reports,
        comparison,
        manifest,
    })
}

pub fn write_comparison(out: &Path, c: &OrderComparison) -> Result<()> {
    fs::write(out.join("comparison.csv"), c.to_csv())?;
    fs::write(out.join("comparison.txt"), c.to_text())?;
    write_json(&out.join("comparison.json"), c)
}

/// MF-DFA only: surface and spectrum tables per order, no surrogates.
pub fn run_spectrum(cfg: &RunConfig) -> Result<RunManifest> {
    let mut check = cfg.clone();
    check.ensemble_size = check.ensemble_size.max(2);
    check.validate()?;
    let out = cfg.out_dir.clone();
    open_run_dir(&out)?;
    let result = (|| {
        let mut timings = StageTimings::default();
        let t = Instant::now();
        let (returns, fingerprint, input_length) = load_input(&cfg.input)?;
        timings.load_ms = t.elapsed().as_millis();
        let t = Instant::now();
        let profile = Profile::from_increments(returns.values(), cfg.profile)?;
        let mut results = Vec::new();
        for a in cfg.analyses()? {
            a.validate_for_length(profile.len())?;
            results.push(with_pool(cfg.workers, || analyze(&profile, &a))?);
        }
        timings.analysis_ms = t.elapsed().as_millis();
        let t = Instant::now();
        for (surface, spectrum) in &results {
            let dir = order_dir(&out, spectrum.detrend_order.degree())?;
            tables::save_surface(&dir.join("surface.csv"), surface)?;
            tables::save_spectrum(&dir.join("spectrum.csv"), spectrum)?;
            let summary = serde_json::json!({
                "label": returns.label(),
                "detrend_order": spectrum.detrend_order,
                "H2": spectrum.h2(),
                "delta_alpha": spectrum.delta_alpha,
                "delta_f": spectrum.delta_f,
                "excluded_boxes": surface.total_excluded(),
            });
            write_json(&dir.join("summary.json"), &summary)?;
        }
        timings.write_ms = t.elapsed().as_millis();
        let manifest = RunManifest {
            software: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: "spectrum".into(),
            config: cfg.clone(),
            label: returns.label().into(),
            input_sha256: fingerprint,
            input_length,
            returns_length: returns.len(),
            base_seed: cfg.base_seed,
            member_seeds: Vec::new(),
            timings,
        };
        write_json(&out.join("manifest.json"), &manifest)?;
        Ok(manifest)
    })();
    close_run_dir(&out, result)
}

/// Reads the per-order reports of a finished run directory.
pub fn read_reports(run_dir: &Path) -> Result<Vec<TestReport>> {
    if run_dir.join(INCOMPLETE_MARKER).exists() {
        return Err(Error::InvalidConfig(format!(
            "run directory {} is marked incomplete",
            run_dir.display()
        )));
    }
    let mut reports = Vec::new();
    for degree in 1..=2 {
        let path = run_dir.join(format!("order{degree}")).join("report.json");
        if path.exists() {
            reports.push(serde_json::from_slice(&fs::read(&path)?)?);
        }
    }
    Ok(reports)
}

/// Writes synthetic data in the price-file schema that [`load_price_csv`] reads.
///
/// Prices are `100 exp(scale * cumsum(increments))` starting at 100, so the
/// log returns of the file are exactly `scale * increments` up to rounding.
pub fn write_synth_csv(path: &Path, increments: &[f64], scale: f64) -> Result<()> {
    let start = chrono::NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
    let mut text = String::from("date,value\n");
    let mut acc = 0.0;
    for t in 0..=increments.len() {
        if t > 0 {
            acc += scale * increments[t - 1];
        }
        let date = start + chrono::Days::new(t as u64);
        text.push_str(&format!("{},{}\n", date.format("%Y-%m-%d"), 100.0 * acc.exp()));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}
